#include "twofold/occurrence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "twofold/errors.hpp"

namespace twofold {

std::array<double, OccurrenceFeatureRow::kWidth> OccurrenceFeatureRow::values() const {
    return {weekdays_since_last_demand,
            static_cast<double>(dow_last_demand),
            static_cast<double>(dow_target),
            mean_interdemand_interval,
            mean_recent_intervals_global,
            size_skew,
            size_kurtosis,
            target_dow_share};
}

FeatureSchema occurrence_schema() {
    return {{"weekdays_since_last_demand", FeatureKind::Numeric},
            {"dow_last_demand", FeatureKind::Categorical},
            {"dow_target", FeatureKind::Categorical},
            {"mean_interdemand_interval", FeatureKind::Numeric},
            {"mean_recent_intervals_global", FeatureKind::Numeric},
            {"size_skew", FeatureKind::Numeric},
            {"size_kurtosis", FeatureKind::Numeric},
            {"target_dow_share", FeatureKind::Numeric}};
}

OccurrenceFeatureExtractor::OccurrenceFeatureExtractor(std::span<const DemandSeries> series) : series_(series) {
    histories_.reserve(series.size());
    if (series.empty()) return;
    Date first = series.front().start();
    Date last = series.front().end();
    for (const auto& s : series) {
        histories_.emplace_back(s);
        first = std::min(first, s.start());
        last = std::max(last, s.end());
    }
    first_day_ = first;
    const auto days = static_cast<std::size_t>(days_between(first, last) + 2);
    std::vector<double> sum(days, 0.0), count(days, 0.0);
    for (const auto& h : histories_) {
        const auto d = h.dates();
        for (std::size_t j = 1; j < d.size(); ++j) {
            const double interval = static_cast<double>(days_between(d[j - 1], d[j]));
            const auto on = static_cast<std::size_t>(days_between(first, d[j]));
            sum[on] += interval;
            count[on] += 1.0;
            if (j + 1 < d.size()) {
                const auto off = static_cast<std::size_t>(days_between(first, d[j + 1]));
                sum[off] -= interval;
                count[off] -= 1.0;
            }
        }
    }
    recent_mean_.resize(days);
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < days; ++i) {
        s += sum[i];
        c += count[i];
        recent_mean_[i] = c > 0.0 ? s / c : 0.0;
    }
}

double OccurrenceFeatureExtractor::global_recent_interval(Date origin) const {
    if (recent_mean_.empty() || origin < first_day_) return 0.0;
    const auto i = std::min(static_cast<std::size_t>(days_between(first_day_, origin)), recent_mean_.size() - 1);
    return recent_mean_[i];
}

namespace {

void size_moments(std::span<const double> x, double& skew, double& kurt) {
    skew = 0.0;
    kurt = 0.0;
    if (x.size() < 2) return;
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 <= 0.0) return;
    skew = m3 / std::pow(m2, 1.5);
    kurt = m4 / (m2 * m2) - 3.0;
}

}  // namespace

std::optional<OccurrenceFeatureRow> OccurrenceFeatureExtractor::row(std::size_t index, Date target, int horizon) const {
    const auto& s = series_[index];
    const Date origin = target - Days{horizon};
    if (origin < s.start()) return std::nullopt;
    const auto& hist = histories_[index];
    const auto dates = hist.dates_until(origin);
    const auto sizes = hist.sizes_until(origin);
    const std::size_t k = dates.size();

    OccurrenceFeatureRow r;
    r.series = index;
    r.target = target;
    r.horizon = horizon;
    r.dow_target = day_of_week(target);
    if (k > 0) {
        r.weekdays_since_last_demand = static_cast<double>(weekdays_between(dates[k - 1], target));
        r.dow_last_demand = day_of_week(dates[k - 1]);
        std::size_t same = 0;
        for (Date d : dates) same += day_of_week(d) == r.dow_target ? 1 : 0;
        r.target_dow_share = static_cast<double>(same) / static_cast<double>(k);
    } else {
        r.weekdays_since_last_demand = static_cast<double>(weekdays_between(s.start() - Days{1}, target));
    }
    r.mean_interdemand_interval = k >= 2 ? static_cast<double>(days_between(dates[0], dates[k - 1])) / static_cast<double>(k - 1)
                                         : static_cast<double>(days_between(s.start(), origin) + 1);
    r.mean_recent_intervals_global = global_recent_interval(origin);
    size_moments(sizes, r.size_skew, r.size_kurtosis);
    r.label_known = s.covers(target);
    r.label = r.label_known && s.at(target) > 0.0;
    return r;
}

std::vector<OccurrenceFeatureRow> extract_occurrence_features(std::span<const DemandSeries> series,
                                                              std::span<const Date> targets, int horizon,
                                                              ExtractionReport* report) {
    if (horizon < 0) throw InvalidInput("horizon must be non-negative");
    OccurrenceFeatureExtractor extractor(series);
    std::vector<OccurrenceFeatureRow> rows;
    ExtractionReport local;
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (Date t : targets) {
            if (!Calendar::is_evaluation_day(t)) {
                ++local.non_weekday;
                continue;
            }
            if (auto r = extractor.row(i, t, horizon)) {
                rows.push_back(*r);
            } else {
                ++local.skipped;
            }
        }
    }
    local.rows = rows.size();
    if (report) *report = local;
    return rows;
}

FeatureMatrix to_matrix(std::span<const OccurrenceFeatureRow> rows) {
    FeatureMatrix m(occurrence_schema());
    for (const auto& r : rows) m.add_row(r.values());
    return m;
}

std::vector<double> predict_occurrence(const BoostedClassifier& model, std::span<const OccurrenceFeatureRow> rows) {
    if (rows.empty()) return {};
    return model.predict(to_matrix(rows));
}

namespace {

std::size_t group_index(DemandGroup g) { return g == DemandGroup::Lumpy ? 0 : 1; }

BoostedClassifier fit_subset(std::span<const OccurrenceFeatureRow> rows, std::span<const DemandGroup> groups,
                             std::optional<DemandGroup> only, const BoostParams& params) {
    FeatureMatrix x(occurrence_schema());
    std::vector<std::uint8_t> y;
    for (const auto& r : rows) {
        if (!r.label_known) continue;
        if (only && groups[r.series] != *only) continue;
        x.add_row(r.values());
        y.push_back(r.label ? 1 : 0);
    }
    try {
        return BoostedClassifier::fit(x, y, params);
    } catch (const InvalidInput& e) {
        if (!only) throw;
        throw InvalidInput(to_string(*only) + " group: " + e.what());
    }
}

}  // namespace

ScopedClassifier fit_boosted(std::span<const OccurrenceFeatureRow> rows, std::span<const DemandGroup> groups,
                             ModelScope scope, const BoostParams& params) {
    ScopedClassifier c;
    c.scope_ = scope;
    if (scope == ModelScope::Global) {
        c.global_ = fit_subset(rows, groups, std::nullopt, params);
    } else {
        for (auto g : {DemandGroup::Lumpy, DemandGroup::Intermittent}) {
            c.by_group_[group_index(g)] = fit_subset(rows, groups, g, params);
        }
    }
    return c;
}

const BoostedClassifier& ScopedClassifier::model(DemandGroup g) const {
    if (scope_ == ModelScope::Global) return global();
    const auto& m = by_group_[group_index(g)];
    if (!m) throw NotFitted("no classifier for " + to_string(g) + " group");
    return *m;
}

const BoostedClassifier& ScopedClassifier::global() const {
    if (!global_) throw NotFitted("classifier has no global model");
    return *global_;
}

std::vector<double> ScopedClassifier::predict(std::span<const OccurrenceFeatureRow> rows,
                                              std::span<const DemandGroup> groups) const {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto v = rows[i].values();
        out[i] = model(groups[rows[i].series]).predict_row(v);
    }
    return out;
}

MarkovOccurrence MarkovOccurrence::fit(std::span<const double> values) {
    if (values.size() < 2) throw InvalidInput("Markov occurrence needs at least two periods");
    double n00 = 0, n01 = 0, n10 = 0, n11 = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const bool prev = values[i - 1] > 0.0;
        const bool cur = values[i] > 0.0;
        if (prev) {
            (cur ? n11 : n10) += 1.0;
        } else {
            (cur ? n01 : n00) += 1.0;
        }
    }
    MarkovOccurrence m;
    m.p01 = (n01 + 1.0) / (n00 + n01 + 2.0);
    m.p11 = (n11 + 1.0) / (n10 + n11 + 2.0);
    return m;
}

double MarkovOccurrence::stationary() const { return p01 / (1.0 - p11 + p01); }

double MarkovOccurrence::probability(bool demand_now, int steps) const {
    if (steps <= 0) return demand_now ? 1.0 : 0.0;
    const double pi = stationary();
    const double lambda = p11 - p01;
    return pi + std::pow(lambda, steps) * ((demand_now ? 1.0 : 0.0) - pi);
}

HybridInputs hybrid_inputs(const DemandSeries& series, const DemandHistory& history, Date target, int horizon) {
    const Date origin = target - Days{horizon};
    if (origin < series.start()) throw NoForecast("hybrid inputs: origin before series start");
    const auto dates = history.dates_until(origin);
    const std::size_t k = dates.size();
    if (k < 2) throw NoForecast("hybrid inputs: fewer than two demands before " + format_date(origin));
    HybridInputs in;
    const Date last_seen = std::min(origin, series.end());
    in.last_size = origin <= series.end() ? series.at(origin) : 0.0;
    in.gap_last_two = static_cast<double>(days_between(dates[k - 2], dates[k - 1]));
    in.since_last_demand = static_cast<double>(days_between(dates[k - 1], target));
    Date zero = series.start() - Days{1};
    for (Date d = last_seen; d >= series.start(); d -= Days{1}) {
        if (series.at(d) <= 0.0) {
            zero = d;
            break;
        }
    }
    in.since_last_zero = static_cast<double>(days_between(zero, target));
    return in;
}

HybridMLP HybridMLP::fit(const DemandSeries& series, Date train_before, int horizon, const MlpParams& params) {
    if (params.hidden <= 0) throw InvalidInput("hybrid network needs hidden units");
    const DemandHistory history(series);
    std::vector<std::array<double, 4>> xs;
    std::vector<double> ys;
    for (Date t = series.start(); t < train_before && t <= series.end(); t += Days{1}) {
        if (!is_weekday(t)) continue;
        const Date origin = t - Days{horizon};
        if (origin < series.start() || history.count_until(origin) < 2) continue;
        xs.push_back(hybrid_inputs(series, history, t, horizon).values());
        ys.push_back(series.at(t));
    }
    if (xs.empty()) throw NoForecast("hybrid network: no usable training rows for " + to_string(series.key()));
    if (xs.size() > params.window) {
        const auto drop = static_cast<std::ptrdiff_t>(xs.size() - params.window);
        xs.erase(xs.begin(), xs.begin() + drop);
        ys.erase(ys.begin(), ys.begin() + drop);
    }

    HybridMLP net;
    net.hidden_ = params.hidden;
    const double n = static_cast<double>(xs.size());
    for (std::size_t f = 0; f < 4; ++f) {
        double mean = 0.0, var = 0.0;
        for (const auto& x : xs) mean += x[f];
        mean /= n;
        for (const auto& x : xs) var += (x[f] - mean) * (x[f] - mean);
        const double sd = std::sqrt(var / n);
        net.mean_[f] = mean;
        net.scale_[f] = sd > 0.0 ? sd : 1.0;
    }
    const double ymax = *std::max_element(ys.begin(), ys.end());
    net.target_scale_ = ymax > 0.0 ? ymax : 1.0;

    const int H = params.hidden;
    const std::size_t in_w = static_cast<std::size_t>(H) * 5;
    net.weights_.resize(in_w + static_cast<std::size_t>(H) + 1);
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> init(-0.5, 0.5);
    for (auto& w : net.weights_) w = init(rng);

    std::vector<std::array<double, 4>> z(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t f = 0; f < 4; ++f) z[i][f] = (xs[i][f] - net.mean_[f]) / net.scale_[f];
    }
    std::vector<double> grad(net.weights_.size());
    std::vector<double> act(static_cast<std::size_t>(H));
    auto& w = net.weights_;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < z.size(); ++i) {
            double out = w[in_w + static_cast<std::size_t>(H)];
            for (int j = 0; j < H; ++j) {
                const std::size_t base = static_cast<std::size_t>(j) * 5;
                double a = w[base + 4];
                for (std::size_t f = 0; f < 4; ++f) a += w[base + f] * z[i][f];
                act[j] = sigmoid(a);
                out += w[in_w + j] * act[j];
            }
            const double err = out - ys[i] / net.target_scale_;
            grad[in_w + static_cast<std::size_t>(H)] += err;
            for (int j = 0; j < H; ++j) {
                const std::size_t base = static_cast<std::size_t>(j) * 5;
                grad[in_w + j] += err * act[j];
                const double delta = err * w[in_w + j] * act[j] * (1.0 - act[j]);
                for (std::size_t f = 0; f < 4; ++f) grad[base + f] += delta * z[i][f];
                grad[base + 4] += delta;
            }
        }
        for (std::size_t k = 0; k < w.size(); ++k) w[k] -= params.learning_rate * grad[k] / n;
    }
    return net;
}

HybridMLP::Prediction HybridMLP::predict(const HybridInputs& inputs) const {
    const auto x = inputs.values();
    const std::size_t in_w = static_cast<std::size_t>(hidden_) * 5;
    double out = weights_[in_w + static_cast<std::size_t>(hidden_)];
    for (int j = 0; j < hidden_; ++j) {
        const std::size_t base = static_cast<std::size_t>(j) * 5;
        double a = weights_[base + 4];
        for (std::size_t f = 0; f < 4; ++f) a += weights_[base + f] * (x[f] - mean_[f]) / scale_[f];
        out += weights_[in_w + j] * sigmoid(a);
    }
    const double raw = out * target_scale_;
    return {raw > 0.0, raw};
}

}  // namespace twofold
