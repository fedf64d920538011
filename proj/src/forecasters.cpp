#include "twofold/forecasters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "twofold/errors.hpp"

namespace twofold {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_history(std::span<const double> history, const char* what) {
    if (history.empty()) throw NoForecast(std::string(what) + ": empty demand history");
}

}  // namespace

double naive_last(std::span<const double> history) {
    require_history(history, "naive");
    return history.back();
}

double ma3(std::span<const double> history) {
    require_history(history, "ma3");
    const std::size_t k = std::min<std::size_t>(3, history.size());
    // Anchored on the oldest value so a constant window returns that value exactly.
    const double anchor = history[history.size() - k];
    double offset = 0.0;
    for (std::size_t i = history.size() - k + 1; i < history.size(); ++i) offset += history[i] - anchor;
    return anchor + offset / static_cast<double>(k);
}

double mfv(std::span<const double> history) {
    require_history(history, "mfv");
    std::map<double, int> counts;
    for (double x : history) ++counts[x];
    double best = counts.begin()->first;
    int best_count = 0;
    for (const auto& [value, count] : counts) {
        if (count > best_count) {
            best = value;
            best_count = count;
        }
    }
    return best;
}

double ses(std::span<const double> history, double alpha) {
    require_history(history, "ses");
    double level = history.front();
    for (std::size_t i = 1; i < history.size(); ++i) level = alpha * history[i] + (1.0 - alpha) * level;
    return level;
}

double median(std::span<const double> history) {
    require_history(history, "median");
    std::vector<double> v(history.begin(), history.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double jitter_draw(std::span<const double> history, std::size_t pick, double z) {
    require_history(history, "rand");
    const double x = history[pick % history.size()];
    const double jittered = 1.0 + std::round(x + z * std::sqrt(x));
    return jittered > 0.0 ? jittered : x;
}

double rand_jitter(std::span<const double> history, std::uint64_t seed) {
    require_history(history, "rand");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, history.size() - 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t i = pick(rng);
    return jitter_draw(history, i, normal(rng));
}

void CrostonState::update(double demand) {
    ++since_last_;
    if (demand <= 0.0) return;
    if (!seen_) {
        seen_ = true;
        level_ = demand;
        interval_ = opts_.init == CrostonInit::FirstDemand ? 1.0 : static_cast<double>(since_last_);
    } else {
        const double a = opts_.alpha;
        const double q = static_cast<double>(since_last_);
        level_ = a * demand + (1.0 - a) * level_;
        interval_ = opts_.printed_variant ? a * q * demand + (1.0 - a) * interval_
                                          : a * q + (1.0 - a) * interval_;
    }
    since_last_ = 0;
}

double CrostonState::forecast() const {
    if (!seen_) throw NoForecast("croston: no demand observed");
    return level_ / interval_;
}

double croston(std::span<const double> values, const CrostonOptions& opts) {
    CrostonState state(opts);
    for (double d : values) state.update(d);
    return state.forecast();
}

double sba(std::span<const double> values, const CrostonOptions& opts) {
    return (1.0 - opts.alpha / 2.0) * croston(values, opts);
}

std::vector<double> croston_path(std::span<const double> values, const CrostonOptions& opts) {
    std::vector<double> out(values.size(), kNaN);
    CrostonState state(opts);
    for (std::size_t i = 0; i < values.size(); ++i) {
        state.update(values[i]);
        if (state.ready()) out[i] = state.forecast();
    }
    return out;
}

std::vector<double> croston_occurrence_path(std::span<const double> values, const CrostonOptions& opts) {
    std::vector<double> out(values.size(), kNaN);
    CrostonState state(opts);
    for (std::size_t i = 0; i < values.size(); ++i) {
        state.update(values[i]);
        if (state.ready()) out[i] = 1.0 / state.interval();
    }
    return out;
}

void TsbState::update(double demand) {
    const double b = opts_.beta;
    if (demand > 0.0) {
        if (!seen_) {
            level_ = demand;
            seen_ = true;
        } else {
            level_ = opts_.alpha * demand + (1.0 - opts_.alpha) * level_;
        }
        prob_ = opts_.printed_variant ? b * demand + (1.0 - b) * prob_ : b + (1.0 - b) * prob_;
    } else {
        prob_ = (1.0 - b) * prob_;
    }
}

namespace {

template <class Emit>
void run_tsb(std::span<const double> values, const TsbOptions& opts, std::size_t init_prefix, Emit emit) {
    const std::size_t prefix = (init_prefix == 0 || init_prefix > values.size()) ? values.size() : init_prefix;
    double freq = 0.0;
    for (std::size_t i = 0; i < prefix; ++i) freq += values[i] > 0.0 ? 1.0 : 0.0;
    freq = prefix > 0 ? freq / static_cast<double>(prefix) : 0.0;
    TsbState state(0.0, freq, false, opts);
    for (std::size_t i = 0; i < values.size(); ++i) {
        state.update(values[i]);
        emit(i, state);
    }
}

}  // namespace

std::vector<double> tsb_path(std::span<const double> values, const TsbOptions& opts, std::size_t init_prefix) {
    std::vector<double> out(values.size());
    run_tsb(values, opts, init_prefix, [&](std::size_t i, const TsbState& s) { out[i] = s.forecast(); });
    return out;
}

std::vector<double> tsb_occurrence_path(std::span<const double> values, const TsbOptions& opts,
                                        std::size_t init_prefix) {
    std::vector<double> out(values.size());
    run_tsb(values, opts, init_prefix, [&](std::size_t i, const TsbState& s) { out[i] = s.probability(); });
    return out;
}

double tsb(std::span<const double> values, const TsbOptions& opts) {
    if (values.empty()) return 0.0;
    return tsb_path(values, opts).back();
}

std::string to_string(PointMethod m) {
    switch (m) {
        case PointMethod::Naive: return "NAIVE";
        case PointMethod::MA3: return "MA3";
        case PointMethod::MFV: return "MFV";
        case PointMethod::SES: return "SES";
        case PointMethod::RAND: return "RAND";
        case PointMethod::Croston: return "CROSTON";
        case PointMethod::SBA: return "SBA";
        case PointMethod::TSB: return "TSB";
    }
    return "?";
}

PointMethod parse_point_method(const std::string& name) {
    std::string up = name;
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "MA(3)") up = "MA3";
    for (auto m : {PointMethod::Naive, PointMethod::MA3, PointMethod::MFV, PointMethod::SES, PointMethod::RAND,
                   PointMethod::Croston, PointMethod::SBA, PointMethod::TSB}) {
        if (to_string(m) == up) return m;
    }
    throw InvalidInput("unknown point method '" + name + "'");
}

double implied_occurrence_score(PointMethod method, const DemandSeries& series, Date origin,
                                const SmoothingParams& params) {
    if (!series.covers(origin)) throw InvalidInput("origin outside series");
    const auto prefix = series.values().first(series.index_of(origin) + 1);
    switch (method) {
        case PointMethod::Croston:
        case PointMethod::SBA: {
            CrostonState state({params.alpha});
            for (double d : prefix) state.update(d);
            if (!state.ready()) throw NotFitted("croston: no demand observed before " + format_date(origin));
            return 1.0 / state.interval();
        }
        case PointMethod::TSB: {
            const auto path = tsb_occurrence_path(prefix, {params.alpha, params.beta});
            return path.back();
        }
        default: {
            double count = 0.0;
            for (double d : prefix) count += d > 0.0 ? 1.0 : 0.0;
            if (count == 0.0) throw NotFitted(to_string(method) + ": no demand observed before " + format_date(origin));
            return count / static_cast<double>(prefix.size());
        }
    }
}

}  // namespace twofold
