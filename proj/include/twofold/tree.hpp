#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace twofold {

enum class FeatureKind { Numeric, Categorical };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;

    bool operator==(const FeatureSpec&) const = default;
};

using FeatureSchema = std::vector<FeatureSpec>;

/// FNV-1a over "name:kind;" for every feature. Stored in model files.
std::uint64_t schema_hash(const FeatureSchema& schema);

/// Throws SchemaMismatch listing the offending feature names.
void check_schema(const FeatureSchema& expected, const FeatureSchema& actual);

/// Categorical codes must be integers in [0, kMaxCategories).
inline constexpr int kMaxCategories = 32;

/// Dense row-major matrix tagged with its schema.
class FeatureMatrix {
public:
    explicit FeatureMatrix(FeatureSchema schema) : schema_(std::move(schema)) {}

    const FeatureSchema& schema() const { return schema_; }
    std::size_t rows() const { return schema_.empty() ? 0 : data_.size() / schema_.size(); }
    std::size_t cols() const { return schema_.size(); }

    void add_row(std::span<const double> row);
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols(), cols()}; }
    double at(std::size_t i, std::size_t j) const { return data_[i * cols() + j]; }

private:
    FeatureSchema schema_;
    std::vector<double> data_;
};

/**
 * Row-major bin codes. A numeric bin k holds values in (upper[k-1], upper[k]];
 * edges are training values picked by rank, so any strictly increasing
 * transform of a feature yields the same codes. Categorical codes are the
 * category values themselves.
 */
struct BinnedMatrix {
    std::size_t rows = 0;
    std::vector<FeatureKind> kinds;
    std::vector<std::vector<double>> upper;
    std::vector<std::uint16_t> codes;

    std::size_t bins(std::size_t f) const {
        return kinds[f] == FeatureKind::Categorical ? kMaxCategories : upper[f].size();
    }
    std::uint16_t code(std::size_t row, std::size_t f) const { return codes[row * kinds.size() + f]; }
};

BinnedMatrix bin_features(const FeatureMatrix& x, std::size_t max_bins);

struct TreeNode {
    int feature = -1;  ///< -1 marks a leaf
    double threshold = 0.0;
    std::uint32_t category_mask = 0;  ///< categories routed left
    int left = -1;
    int right = -1;
    double value = 0.0;
};

class Tree {
public:
    Tree() = default;
    explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    double predict(std::span<const double> row) const;
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t depth() const;

    void save(std::ostream& out) const;
    static Tree load(std::istream& in);

private:
    std::vector<TreeNode> nodes_;
};

struct GrowParams {
    int max_depth = 6;  ///< <= 0 means unbounded
    double lambda = 1.0;
    double min_child_hessian = 1e-3;
    double min_leaf_weight = 1.0;
    double min_gain = 1e-12;
    double colsample = 1.0;
};

/**
 * Grows one second-order tree: leaf value -G / (H + lambda), split gain
 * G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda). With g = -y,
 * h = 1, lambda = 0 this is the squared-error regression tree. Rows with zero
 * weight are ignored; `grad` and `hess` must already include the weights.
 * When given, `leaf_of_row` receives each used row's leaf node index (-1 for
 * ignored rows).
 */
Tree grow_tree(const BinnedMatrix& x, std::span<const double> grad, std::span<const double> hess,
               std::span<const double> weight, const GrowParams& params, std::mt19937_64* rng = nullptr,
               std::vector<int>* leaf_of_row = nullptr);

}  // namespace twofold
