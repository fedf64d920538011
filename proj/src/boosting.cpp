#include "twofold/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#include "twofold/errors.hpp"

namespace twofold {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

namespace {

// log(sigmoid(z)) without overflow.
double log_sigmoid(double z) { return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }

constexpr double kScoreClamp = 30.0;

double int_pow(double u, double gamma) {
    if (gamma == 0.0) return 1.0;
    if (gamma == 1.0) return u;
    if (gamma == 2.0) return u * u;
    return std::pow(u, gamma);
}

// Gradient and Newton curvature with shared transcendental terms. The focal
// second derivative turns negative on badly misclassified rows, so the
// curvature is floored at the focal-weighted logistic term q * u^(g+1).
void gradient_and_curvature(double gamma, double score, bool label, double& grad, double& curv) {
    const double z = label ? score : -score;
    const double q = sigmoid(z);
    const double u = sigmoid(-z);
    const double lq = log_sigmoid(z);
    const double ug = int_pow(u, gamma);
    const double ug1 = ug * u;
    const double dz = gamma * q * ug * lq - ug1;
    grad = label ? dz : -dz;
    const double exact = gamma * (q * ug1 * lq - gamma * q * q * ug * lq + q * ug1) + (gamma + 1.0) * q * ug1;
    curv = std::max({exact, q * ug1, 1e-6});
}

}  // namespace

// All three are written on the signed margin z = s for positives, -s for
// negatives; with q = sigmoid(z) and u = 1 - q:
//   L     = -u^g log q
//   dL/dz = g q u^g log q - u^(g+1)
//   d2L/dz2 = g (q u^(g+1) log q - g q^2 u^g log q + q u^(g+1)) + (g+1) q u^(g+1)
double FocalLoss::loss(double score, bool label) const {
    const double z = label ? score : -score;
    const double u = sigmoid(-z);
    return -std::pow(u, gamma) * log_sigmoid(z);
}

double FocalLoss::gradient(double score, bool label) const {
    const double z = label ? score : -score;
    const double q = sigmoid(z);
    const double u = sigmoid(-z);
    const double lq = log_sigmoid(z);
    const double dz = gamma * q * std::pow(u, gamma) * lq - std::pow(u, gamma + 1.0);
    return label ? dz : -dz;
}

double FocalLoss::hessian(double score, bool label) const {
    const double z = label ? score : -score;
    const double q = sigmoid(z);
    const double u = sigmoid(-z);
    const double lq = log_sigmoid(z);
    const double ug = std::pow(u, gamma);
    const double ug1 = ug * u;
    return gamma * (q * ug1 * lq - gamma * q * q * ug * lq + q * ug1) + (gamma + 1.0) * q * ug1;
}

double log_loss_gradient(double score, bool label) { return sigmoid(score) - (label ? 1.0 : 0.0); }

BoostedClassifier BoostedClassifier::fit(const FeatureMatrix& x, std::span<const std::uint8_t> labels,
                                         const BoostParams& params) {
    const std::size_t n = x.rows();
    if (labels.size() != n) throw InvalidInput("label count does not match rows");
    if (n == 0) throw InvalidInput("cannot fit classifier on zero rows");
    std::size_t positives = 0;
    for (auto y : labels) positives += y ? 1 : 0;
    if (positives == 0) throw InvalidInput("training set has no rows of class 'demand' (positive)");
    if (positives == n) throw InvalidInput("training set has no rows of class 'no demand' (negative)");

    BoostedClassifier model;
    model.schema_ = x.schema();
    model.params_ = params;
    const double rate = static_cast<double>(positives) / static_cast<double>(n);
    model.base_score_ = std::log(rate / (1.0 - rate));

    const BinnedMatrix binned = bin_features(x, params.max_bins);
    GrowParams grow;
    grow.max_depth = params.max_depth;
    grow.lambda = params.lambda;
    grow.min_leaf_weight = params.min_leaf_weight;
    grow.min_child_hessian = params.min_child_hessian;

    std::vector<double> score(n, model.base_score_);
    std::vector<double> g(n), h(n), w(n, 1.0);
    std::vector<int> leaf;
    std::mt19937_64 rng(params.seed);
    std::bernoulli_distribution keep(std::clamp(params.row_subsample, 0.0, 1.0));
    model.trees_.reserve(static_cast<std::size_t>(params.rounds));
    for (int round = 0; round < params.rounds; ++round) {
        if (params.row_subsample < 1.0) {
            for (auto& wi : w) wi = keep(rng) ? 1.0 : 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const bool y = labels[i] != 0;
            gradient_and_curvature(params.focal_gamma, score[i], y, g[i], h[i]);
            g[i] *= w[i];
            h[i] *= w[i];
        }
        Tree tree = grow_tree(binned, g, h, w, grow, &rng, &leaf);
        std::vector<TreeNode> nodes = tree.nodes();
        for (auto& node : nodes) node.value *= params.learning_rate;
        tree = Tree(std::move(nodes));
        // Rows left out by subsampling have no recorded leaf.
        for (std::size_t i = 0; i < n; ++i) {
            score[i] += leaf[i] >= 0 ? tree.nodes()[static_cast<std::size_t>(leaf[i])].value : tree.predict(x.row(i));
        }
        model.trees_.push_back(std::move(tree));
    }
    return model;
}

double BoostedClassifier::predict_row(std::span<const double> row) const {
    double s = base_score_;
    for (const auto& t : trees_) s += t.predict(row);
    return sigmoid(std::clamp(s, -kScoreClamp, kScoreClamp));
}

std::vector<double> BoostedClassifier::predict_raw(const FeatureMatrix& x) const {
    check_schema(schema_, x.schema());
    std::vector<double> out(x.rows(), base_score_);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (const auto& t : trees_) out[i] += t.predict(x.row(i));
    }
    return out;
}

std::vector<double> BoostedClassifier::predict(const FeatureMatrix& x) const {
    auto raw = predict_raw(x);
    for (auto& s : raw) s = sigmoid(std::clamp(s, -kScoreClamp, kScoreClamp));
    return raw;
}

void BoostedClassifier::save(std::ostream& out) const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "params %d %d %.17g %.17g %.17g %.17g %zu\nbase %.17g\ntrees %zu\n",
                  params_.rounds, params_.max_depth, params_.learning_rate, params_.focal_gamma, params_.lambda,
                  params_.min_leaf_weight, params_.max_bins, base_score_, trees_.size());
    out << buf;
    for (const auto& t : trees_) t.save(out);
}

BoostedClassifier BoostedClassifier::load(std::istream& in, const FeatureSchema& schema) {
    BoostedClassifier m;
    m.schema_ = schema;
    std::string tag;
    std::size_t count = 0;
    auto& p = m.params_;
    if (!(in >> tag >> p.rounds >> p.max_depth >> p.learning_rate >> p.focal_gamma >> p.lambda >> p.min_leaf_weight >>
          p.max_bins) ||
        tag != "params") {
        throw InvalidInput("malformed boosted classifier params");
    }
    if (!(in >> tag >> m.base_score_) || tag != "base") throw InvalidInput("malformed boosted classifier base");
    if (!(in >> tag >> count) || tag != "trees") throw InvalidInput("malformed boosted classifier tree count");
    m.trees_.reserve(count);
    for (std::size_t i = 0; i < count; ++i) m.trees_.push_back(Tree::load(in));
    return m;
}

}  // namespace twofold
