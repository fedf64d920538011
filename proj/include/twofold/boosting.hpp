#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "twofold/tree.hpp"

namespace twofold {

/**
 * Focal loss on a logit score s with label y:
 *   FL = -(1 - p_t)^gamma * log(p_t),  p_t = sigmoid(s) if y else 1 - sigmoid(s).
 * gamma = 0 is the binary log-loss. Derivatives are with respect to s.
 */
struct FocalLoss {
    double gamma = 2.0;

    double loss(double score, bool label) const;
    double gradient(double score, bool label) const;
    double hessian(double score, bool label) const;
};

/// Log-loss gradient sigmoid(s) - y, the gamma = 0 reference.
double log_loss_gradient(double score, bool label);

double sigmoid(double x);

struct BoostParams {
    int rounds = 200;
    int max_depth = 6;
    double learning_rate = 0.1;
    double focal_gamma = 2.0;
    double lambda = 1.0;
    double min_leaf_weight = 20.0;
    double min_child_hessian = 1e-3;
    std::size_t max_bins = 255;
    double row_subsample = 1.0;
    std::uint64_t seed = 0;
};

/// Gradient-boosted trees on the focal loss with a logistic score transform.
class BoostedClassifier {
public:
    BoostedClassifier() = default;

    /// Throws InvalidInput naming the missing class when labels are single-class.
    static BoostedClassifier fit(const FeatureMatrix& x, std::span<const std::uint8_t> labels,
                                 const BoostParams& params);

    std::vector<double> predict_raw(const FeatureMatrix& x) const;
    /// Scores in (0,1). Throws SchemaMismatch when `x` has a different schema.
    std::vector<double> predict(const FeatureMatrix& x) const;
    double predict_row(std::span<const double> row) const;

    const FeatureSchema& schema() const { return schema_; }
    const BoostParams& params() const { return params_; }
    double base_score() const { return base_score_; }
    std::size_t n_trees() const { return trees_.size(); }

    void save(std::ostream& out) const;
    static BoostedClassifier load(std::istream& in, const FeatureSchema& schema);

private:
    FeatureSchema schema_;
    BoostParams params_;
    double base_score_ = 0.0;
    std::vector<Tree> trees_;
};

}  // namespace twofold
