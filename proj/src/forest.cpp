#include "twofold/forest.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>

#include "twofold/errors.hpp"

namespace twofold {

TreeEnsembleRegressor TreeEnsembleRegressor::fit(const FeatureMatrix& x, std::span<const double> targets,
                                                 const ForestParams& params) {
    const std::size_t n = x.rows();
    if (n == 0) throw InvalidInput("cannot fit regressor on zero rows");
    if (targets.size() != n) throw InvalidInput("target count does not match rows");
    if (params.n_trees <= 0) throw InvalidInput("forest needs at least one tree");

    TreeEnsembleRegressor model;
    model.schema_ = x.schema();
    model.min_target_ = *std::min_element(targets.begin(), targets.end());
    model.max_target_ = *std::max_element(targets.begin(), targets.end());

    const BinnedMatrix binned = bin_features(x, params.max_bins);
    GrowParams grow;
    grow.max_depth = params.max_depth;
    grow.lambda = 0.0;
    grow.min_child_hessian = 0.0;
    grow.min_leaf_weight = params.min_leaf_weight;
    grow.colsample = params.colsample;

    std::mt19937_64 rng(params.seed);
    std::vector<double> g(n), h(n), w(n);
    const auto draws = std::max<std::size_t>(1, static_cast<std::size_t>(params.bootstrap_fraction * static_cast<double>(n)));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    model.trees_.reserve(static_cast<std::size_t>(params.n_trees));
    for (int t = 0; t < params.n_trees; ++t) {
        if (params.bootstrap) {
            std::fill(w.begin(), w.end(), 0.0);
            for (std::size_t k = 0; k < draws; ++k) w[pick(rng)] += 1.0;
        } else {
            std::fill(w.begin(), w.end(), 1.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = -targets[i] * w[i];
            h[i] = w[i];
        }
        model.trees_.push_back(grow_tree(binned, g, h, w, grow, &rng));
    }
    return model;
}

double TreeEnsembleRegressor::predict_row(std::span<const double> row) const {
    double sum = 0.0;
    for (const auto& t : trees_) sum += t.predict(row);
    return std::clamp(sum / static_cast<double>(trees_.size()), min_target_, max_target_);
}

std::vector<double> TreeEnsembleRegressor::predict(const FeatureMatrix& x) const {
    check_schema(schema_, x.schema());
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_row(x.row(i));
    return out;
}

void TreeEnsembleRegressor::save(std::ostream& out) const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "range %.17g %.17g\ntrees %zu\n", min_target_, max_target_, trees_.size());
    out << buf;
    for (const auto& t : trees_) t.save(out);
}

TreeEnsembleRegressor TreeEnsembleRegressor::load(std::istream& in, const FeatureSchema& schema) {
    TreeEnsembleRegressor m;
    m.schema_ = schema;
    std::string tag;
    std::size_t count = 0;
    if (!(in >> tag >> m.min_target_ >> m.max_target_) || tag != "range") throw InvalidInput("malformed forest range");
    if (!(in >> tag >> count) || tag != "trees" || count == 0) throw InvalidInput("malformed forest tree count");
    for (std::size_t i = 0; i < count; ++i) m.trees_.push_back(Tree::load(in));
    return m;
}

}  // namespace twofold
