#include "twofold/tree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "twofold/errors.hpp"

namespace twofold {

std::uint64_t schema_hash(const FeatureSchema& schema) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    };
    for (const auto& f : schema) {
        for (char c : f.name) mix(c);
        mix(':');
        mix(f.kind == FeatureKind::Numeric ? 'n' : 'c');
        mix(';');
    }
    return h;
}

void check_schema(const FeatureSchema& expected, const FeatureSchema& actual) {
    if (expected == actual) return;
    std::string offending;
    const std::size_t n = std::max(expected.size(), actual.size());
    for (std::size_t i = 0; i < n; ++i) {
        const bool ok = i < expected.size() && i < actual.size() && expected[i] == actual[i];
        if (ok) continue;
        if (!offending.empty()) offending += ", ";
        offending += i < actual.size() ? actual[i].name : "<missing " + expected[i].name + ">";
    }
    throw SchemaMismatch("feature schema mismatch at: " + offending);
}

void FeatureMatrix::add_row(std::span<const double> row) {
    if (row.size() != cols()) throw InvalidInput("row width does not match schema");
    data_.insert(data_.end(), row.begin(), row.end());
}

BinnedMatrix bin_features(const FeatureMatrix& x, std::size_t max_bins) {
    BinnedMatrix b;
    b.rows = x.rows();
    const std::size_t nf = x.cols();
    b.kinds.resize(nf);
    b.upper.resize(nf);
    b.codes.resize(nf * b.rows);
    std::vector<double> column(b.rows);
    for (std::size_t f = 0; f < nf; ++f) {
        b.kinds[f] = x.schema()[f].kind;
        for (std::size_t i = 0; i < b.rows; ++i) column[i] = x.at(i, f);
        if (b.kinds[f] == FeatureKind::Categorical) {
            for (std::size_t i = 0; i < b.rows; ++i) {
                const double v = column[i];
                if (v < 0 || v >= kMaxCategories || v != std::floor(v)) {
                    throw InvalidInput("categorical feature " + x.schema()[f].name + " has invalid code");
                }
                b.codes[i * nf + f] = static_cast<std::uint16_t>(v);
            }
            continue;
        }
        std::vector<double> uniq = column;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        auto& upper = b.upper[f];
        if (uniq.size() <= max_bins) {
            upper = uniq;
        } else {
            for (std::size_t k = 1; k <= max_bins; ++k) {
                const std::size_t idx = (k * uniq.size() + max_bins - 1) / max_bins - 1;
                if (upper.empty() || uniq[idx] != upper.back()) upper.push_back(uniq[idx]);
            }
        }
        for (std::size_t i = 0; i < b.rows; ++i) {
            const auto it = std::lower_bound(upper.begin(), upper.end(), column[i]);
            b.codes[i * nf + f] = static_cast<std::uint16_t>(it - upper.begin());
        }
    }
    return b;
}

double Tree::predict(std::span<const double> row) const {
    if (nodes_.empty()) return 0.0;
    int i = 0;
    while (nodes_[i].feature >= 0) {
        const auto& n = nodes_[i];
        const double v = row[n.feature];
        bool go_left;
        if (n.category_mask != 0) {
            const int c = static_cast<int>(v);
            go_left = c >= 0 && c < kMaxCategories && ((n.category_mask >> c) & 1u);
        } else {
            go_left = v <= n.threshold;
        }
        i = go_left ? n.left : n.right;
    }
    return nodes_[i].value;
}

std::size_t Tree::depth() const {
    if (nodes_.empty()) return 0;
    std::vector<std::size_t> d(nodes_.size(), 0);
    std::size_t best = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        best = std::max(best, d[i]);
        if (nodes_[i].feature >= 0) {
            d[nodes_[i].left] = d[i] + 1;
            d[nodes_[i].right] = d[i] + 1;
        }
    }
    return best;
}

void Tree::save(std::ostream& out) const {
    out << "tree " << nodes_.size() << '\n';
    char buf[160];
    for (const auto& n : nodes_) {
        std::snprintf(buf, sizeof buf, "%d %.17g %u %d %d %.17g\n", n.feature, n.threshold, n.category_mask,
                      n.left, n.right, n.value);
        out << buf;
    }
}

Tree Tree::load(std::istream& in) {
    std::string tag;
    std::size_t count = 0;
    if (!(in >> tag >> count) || tag != "tree") throw InvalidInput("malformed tree record");
    std::vector<TreeNode> nodes(count);
    for (auto& n : nodes) {
        if (!(in >> n.feature >> n.threshold >> n.category_mask >> n.left >> n.right >> n.value)) {
            throw InvalidInput("malformed tree node");
        }
        if (n.feature >= 0 && (n.left < 0 || n.right < 0 || static_cast<std::size_t>(n.left) >= count ||
                               static_cast<std::size_t>(n.right) >= count)) {
            throw InvalidInput("tree node child out of range");
        }
    }
    return Tree(std::move(nodes));
}

namespace {

struct Bin {
    double g = 0.0;
    double h = 0.0;
    double w = 0.0;
};

// All features' bins back to back; Grower::offset_ locates each feature.
using Histogram = std::vector<Bin>;

struct Split {
    double gain = 0.0;
    int feature = -1;
    std::size_t bin = 0;  // numeric: last bin on the left
    std::uint32_t mask = 0;
};

class Grower {
public:
    Grower(const BinnedMatrix& x, std::span<const double> g, std::span<const double> h, std::span<const double> w,
           const GrowParams& p, std::mt19937_64* rng, std::vector<int>* leaf_of_row)
        : x_(x), g_(g), h_(h), w_(w), p_(p), rng_(rng), leaf_of_row_(leaf_of_row) {
        if (leaf_of_row_) leaf_of_row_->assign(x.rows, -1);
        offset_.push_back(0);
        for (std::size_t f = 0; f < x.kinds.size(); ++f) offset_.push_back(offset_.back() + x.bins(f));
    }

    Tree run() {
        std::vector<std::uint32_t> rows;
        rows.reserve(x_.rows);
        for (std::uint32_t i = 0; i < x_.rows; ++i) {
            if (w_[i] > 0.0) rows.push_back(i);
        }
        nodes_.clear();
        nodes_.emplace_back();
        if (rows.empty()) return Tree(std::move(nodes_));
        Histogram hist = build(rows.begin(), rows.end());
        grow(0, rows.begin(), rows.end(), hist, 0);
        return Tree(std::move(nodes_));
    }

private:
    using It = std::vector<std::uint32_t>::iterator;

    Histogram build(It first, It last) const {
        Histogram hist(offset_.back());
        const std::size_t nf = x_.kinds.size();
        const std::uint16_t* codes = x_.codes.data();
        for (It it = first; it != last; ++it) {
            const std::uint16_t* c = codes + static_cast<std::size_t>(*it) * nf;
            const double g = g_[*it], h = h_[*it], w = w_[*it];
            for (std::size_t f = 0; f < nf; ++f) {
                Bin& b = hist[offset_[f] + c[f]];
                b.g += g;
                b.h += h;
                b.w += w;
            }
        }
        return hist;
    }

    double score(double g, double h) const {
        const double d = h + p_.lambda;
        return d > 0.0 ? g * g / d : 0.0;
    }

    double leaf_value(double g, double h) const {
        const double d = h + p_.lambda;
        return d > 0.0 ? -g / d : 0.0;
    }

    bool child_ok(const Bin& b) const { return b.w >= p_.min_leaf_weight && b.h >= p_.min_child_hessian; }

    std::vector<std::size_t> candidate_features() {
        std::vector<std::size_t> feats(x_.kinds.size());
        std::iota(feats.begin(), feats.end(), 0);
        if (p_.colsample < 1.0 && rng_ != nullptr) {
            std::shuffle(feats.begin(), feats.end(), *rng_);
            const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(p_.colsample * feats.size())));
            feats.resize(keep);
            std::sort(feats.begin(), feats.end());
        }
        return feats;
    }

    Split best_split(const Histogram& hist, const Bin& total) {
        Split best;
        const double parent = score(total.g, total.h);
        for (std::size_t f : candidate_features()) {
            const std::span<const Bin> hf(hist.data() + offset_[f], x_.bins(f));
            if (x_.kinds[f] == FeatureKind::Numeric) {
                Bin left;
                for (std::size_t k = 0; k + 1 < hf.size(); ++k) {
                    left.g += hf[k].g;
                    left.h += hf[k].h;
                    left.w += hf[k].w;
                    if (hf[k].w == 0.0) continue;
                    const Bin right{total.g - left.g, total.h - left.h, total.w - left.w};
                    if (!child_ok(left) || !child_ok(right)) continue;
                    const double gain = score(left.g, left.h) + score(right.g, right.h) - parent;
                    if (gain > best.gain + p_.min_gain) best = {gain, static_cast<int>(f), k, 0};
                }
            } else {
                std::vector<std::size_t> cats;
                for (std::size_t c = 0; c < hf.size(); ++c) {
                    if (hf[c].w > 0.0) cats.push_back(c);
                }
                if (cats.size() < 2) continue;
                std::stable_sort(cats.begin(), cats.end(), [&](std::size_t a, std::size_t b) {
                    return hf[a].g / (hf[a].h + p_.lambda + 1e-12) < hf[b].g / (hf[b].h + p_.lambda + 1e-12);
                });
                Bin left;
                std::uint32_t mask = 0;
                for (std::size_t k = 0; k + 1 < cats.size(); ++k) {
                    const auto& b = hf[cats[k]];
                    left.g += b.g;
                    left.h += b.h;
                    left.w += b.w;
                    mask |= 1u << cats[k];
                    const Bin right{total.g - left.g, total.h - left.h, total.w - left.w};
                    if (!child_ok(left) || !child_ok(right)) continue;
                    const double gain = score(left.g, left.h) + score(right.g, right.h) - parent;
                    if (gain > best.gain + p_.min_gain) best = {gain, static_cast<int>(f), 0, mask};
                }
            }
        }
        return best;
    }

    // Stable split of [first, last) into left rows then right rows.
    It partition(It first, It last, const Split& s) {
        scratch_.clear();
        It out = first;
        for (It it = first; it != last; ++it) {
            if (goes_left(*it, s)) {
                *out++ = *it;
            } else {
                scratch_.push_back(*it);
            }
        }
        std::copy(scratch_.begin(), scratch_.end(), out);
        return out;
    }

    bool goes_left(std::uint32_t row, const Split& s) const {
        const auto c = x_.code(row, static_cast<std::size_t>(s.feature));
        if (x_.kinds[s.feature] == FeatureKind::Categorical) return (s.mask >> c) & 1u;
        return c <= s.bin;
    }

    void grow(int node, It first, It last, Histogram& hist, int depth) {
        Bin total;
        for (std::size_t k = 0; k < x_.bins(0); ++k) {
            const Bin& b = hist[k];
            total.g += b.g;
            total.h += b.h;
            total.w += b.w;
        }
        nodes_[node].value = leaf_value(total.g, total.h);
        const Split s = p_.max_depth > 0 && depth >= p_.max_depth ? Split{} : best_split(hist, total);
        if (s.feature < 0) {
            if (leaf_of_row_) {
                for (It it = first; it != last; ++it) (*leaf_of_row_)[*it] = node;
            }
            return;
        }

        It mid = partition(first, last, s);
        const bool left_small = (mid - first) <= (last - mid);
        Histogram small = left_small ? build(first, mid) : build(mid, last);
        // Sibling by subtraction, reusing the parent's storage.
        for (std::size_t k = 0; k < hist.size(); ++k) {
            hist[k].g -= small[k].g;
            hist[k].h -= small[k].h;
            hist[k].w -= small[k].w;
        }
        Histogram& left_hist = left_small ? small : hist;
        Histogram& right_hist = left_small ? hist : small;

        auto& n = nodes_[node];
        n.feature = s.feature;
        if (x_.kinds[s.feature] == FeatureKind::Categorical) {
            n.category_mask = s.mask;
        } else {
            n.threshold = x_.upper[s.feature][s.bin];
        }
        const int l = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        const int r = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[node].left = l;
        nodes_[node].right = r;
        grow(l, first, mid, left_hist, depth + 1);
        grow(r, mid, last, right_hist, depth + 1);
    }

    const BinnedMatrix& x_;
    std::span<const double> g_, h_, w_;
    const GrowParams& p_;
    std::mt19937_64* rng_;
    std::vector<int>* leaf_of_row_;
    std::vector<std::size_t> offset_;
    std::vector<std::uint32_t> scratch_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

Tree grow_tree(const BinnedMatrix& x, std::span<const double> grad, std::span<const double> hess,
               std::span<const double> weight, const GrowParams& params, std::mt19937_64* rng,
               std::vector<int>* leaf_of_row) {
    if (grad.size() != x.rows || hess.size() != x.rows || weight.size() != x.rows) {
        throw InvalidInput("gradient arrays do not match row count");
    }
    return Grower(x, grad, hess, weight, params, rng, leaf_of_row).run();
}

}  // namespace twofold
