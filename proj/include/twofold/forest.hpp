#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "twofold/tree.hpp"

namespace twofold {

struct ForestParams {
    int n_trees = 300;
    int max_depth = 12;  ///< <= 0 means unbounded
    double bootstrap_fraction = 1.0;
    bool bootstrap = true;
    double min_leaf_weight = 1.0;
    double colsample = 1.0;
    std::size_t max_bins = 255;
    std::uint64_t seed = 0;
};

/// Bagged squared-error regression trees; prediction is the mean tree output.
class TreeEnsembleRegressor {
public:
    TreeEnsembleRegressor() = default;

    /// Throws InvalidInput on empty input.
    static TreeEnsembleRegressor fit(const FeatureMatrix& x, std::span<const double> targets, const ForestParams& params);

    double predict_row(std::span<const double> row) const;
    std::vector<double> predict(const FeatureMatrix& x) const;

    const FeatureSchema& schema() const { return schema_; }
    std::size_t n_trees() const { return trees_.size(); }
    double min_target() const { return min_target_; }
    double max_target() const { return max_target_; }

    void save(std::ostream& out) const;
    static TreeEnsembleRegressor load(std::istream& in, const FeatureSchema& schema);

private:
    FeatureSchema schema_;
    std::vector<Tree> trees_;
    double min_target_ = 0.0;
    double max_target_ = 0.0;
};

}  // namespace twofold
