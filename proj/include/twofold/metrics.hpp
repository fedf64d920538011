#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "twofold/demand.hpp"

namespace twofold {

/// Mann-Whitney rank statistic with average ranks for ties. Throws
/// UndefinedMetric unless both classes are present.
double auc_roc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// In-sample one-step naive MAE: mean |y_i - y_{i-1}|. Throws UndefinedMetric for
/// fewer than two values or a zero result.
double naive_scale(std::span<const double> training);

/// MAE of forecasts over actuals divided by `scale` (> 0).
double mase(std::span<const double> forecasts, std::span<const double> actuals, double scale);

/// naive_scale of the nonzero demands strictly before `test_start`.
double mase_scale(const DemandSeries& series, Date test_start);

/**
 * Size accuracy assuming perfect occurrence: |size_estimate - actual| over the
 * points whose actual demand is positive, scaled by mase_scale.
 */
double mase_I(const DemandSeries& series, Date test_start, std::span<const ForecastPoint> points);

/**
 * Same scale as mase_I, evaluated over points where demand occurred or was
 * flagged, comparing `combined` with the actual value (zeros included).
 */
double mase_II(const DemandSeries& series, Date test_start, std::span<const ForecastPoint> points);

struct SpecTerm {
    double opportunity = 0.0;  ///< alpha1 * min(y_i, Y_i - F_t)
    double stock = 0.0;        ///< alpha2 * min(f_i, F_i - Y_t)
    double weight = 0.0;       ///< t - i + 1
};

/// Every (t, i) term, i <= t, in row-major order over t then i (1-based in the weight).
std::vector<SpecTerm> spec_terms(std::span<const double> forecasts, std::span<const double> actuals,
                                 double alpha1 = 0.5, double alpha2 = 0.5);

/**
 * Stock-keeping-oriented prediction error cost:
 *   (1/n) sum_t sum_{i<=t} max(0, a1 min(y_i, Y_i - F_t), a2 min(f_i, F_i - Y_t)) (t - i + 1)
 * with Y, F cumulative actuals and forecasts. Throws InvalidInput on negative
 * values or length mismatch.
 */
double spec(std::span<const double> forecasts, std::span<const double> actuals, double alpha1 = 0.5,
            double alpha2 = 0.5);

double median_of(std::vector<double> values);

}  // namespace twofold
