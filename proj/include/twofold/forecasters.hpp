#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twofold/demand.hpp"

namespace twofold {

// Local size estimators over a history of nonzero demand sizes. All of them
// throw NoForecast on an empty history.

double naive_last(std::span<const double> history);

/// Mean of the last min(3, n) sizes.
double ma3(std::span<const double> history);

/// Most frequent value; ties go to the smallest value.
double mfv(std::span<const double> history);

/// s_1 = x_1, s_t = alpha * x_t + (1 - alpha) * s_{t-1}; returns the final level.
double ses(std::span<const double> history, double alpha);

/// Median (mean of the two middle values for even lengths).
double median(std::span<const double> history);

/**
 * Bootstrap-with-jitter draw: picks X* = history[pick] and returns
 * 1 + round(X* + z * sqrt(X*)), or X* when that is not positive.
 */
double jitter_draw(std::span<const double> history, std::size_t pick, double z);

/// jitter_draw with pick ~ U{0..n-1} and z ~ N(0,1) from an engine seeded with `seed`.
double rand_jitter(std::span<const double> history, std::uint64_t seed);

enum class CrostonInit {
    FirstDemand,    ///< a = first size, p = 1
    FirstInterval,  ///< a = first size, p = periods from series start to first demand
};

struct CrostonOptions {
    double alpha = 0.1;
    CrostonInit init = CrostonInit::FirstDemand;
    /// Interval update weighted by demand size, as typeset in some sources.
    bool printed_variant = false;
};

/// Size level and inter-demand interval, updated only on demand periods.
class CrostonState {
public:
    explicit CrostonState(CrostonOptions opts = {}) : opts_(opts) {}

    void update(double demand);
    bool ready() const { return seen_; }
    double level() const { return level_; }
    double interval() const { return interval_; }
    /// level / interval. Throws NoForecast before the first demand.
    double forecast() const;

private:
    CrostonOptions opts_;
    bool seen_ = false;
    double level_ = 0.0;
    double interval_ = 1.0;
    long since_last_ = 0;
};

/// Flat per-period forecast after observing `values`. Throws NoForecast if all zero.
double croston(std::span<const double> values, const CrostonOptions& opts = {});

/// (1 - alpha / 2) * croston.
double sba(std::span<const double> values, const CrostonOptions& opts = {});

/// Forecast after each prefix values[0..i]; NaN before the first demand.
std::vector<double> croston_path(std::span<const double> values, const CrostonOptions& opts = {});

/// 1 / interval after each prefix; NaN before the first demand.
std::vector<double> croston_occurrence_path(std::span<const double> values, const CrostonOptions& opts = {});

struct TsbOptions {
    double alpha = 0.1;
    double beta = 0.1;
    bool printed_variant = false;
};

/// Level updated on demand, occurrence probability updated every period.
class TsbState {
public:
    TsbState(double level, double probability, bool seen, TsbOptions opts = {})
        : opts_(opts), seen_(seen), level_(level), prob_(probability) {}

    void update(double demand);
    double level() const { return level_; }
    double probability() const { return prob_; }
    double forecast() const { return level_ * prob_; }

private:
    TsbOptions opts_;
    bool seen_;
    double level_;
    double prob_;
};

/**
 * Per-period TSB forecasts after each prefix of `values`. The probability starts
 * at the demand frequency of values[0..init_prefix) (whole input when
 * init_prefix is 0 or too long); the level starts at the first demand size.
 */
std::vector<double> tsb_path(std::span<const double> values, const TsbOptions& opts = {},
                             std::size_t init_prefix = 0);
std::vector<double> tsb_occurrence_path(std::span<const double> values, const TsbOptions& opts = {},
                                        std::size_t init_prefix = 0);
double tsb(std::span<const double> values, const TsbOptions& opts = {});

enum class PointMethod { Naive, MA3, MFV, SES, RAND, Croston, SBA, TSB };

std::string to_string(PointMethod m);
PointMethod parse_point_method(const std::string& name);

struct SmoothingParams {
    double alpha = 0.1;
    double beta = 0.1;
};

/**
 * Occurrence belief a point forecaster implies from the history up to and
 * including `origin`: 1/p for Croston and SBA, p for TSB, demand frequency for
 * the size-only methods. Throws NotFitted when the method has seen no demand.
 */
double implied_occurrence_score(PointMethod method, const DemandSeries& series, Date origin,
                                const SmoothingParams& params = {});

}  // namespace twofold
