#pragma once

#include <span>
#include <vector>

namespace twofold {

enum class AggregationMode { NonOverlapping, Overlapping };

/// Forecaster applied to the aggregated series (all buckets, zeros included).
enum class InnerForecaster { SES, Naive, MA3, Croston };

struct AggregationPlan {
    std::size_t bucket_length = 1;
    AggregationMode mode = AggregationMode::NonOverlapping;
    InnerForecaster inner = InnerForecaster::SES;
    double alpha = 0.1;
};

/**
 * Temporal aggregation. Non-overlapping buckets are tail-aligned: the last
 * bucket ends on the final value and an incomplete head is dropped.
 * Overlapping mode returns every sliding-window sum.
 */
std::vector<double> aggregate(std::span<const double> values, const AggregationPlan& plan);

/// Mean inter-demand interval (in periods) rounded up; 1 for fewer than two demands.
std::size_t default_bucket_length(std::span<const double> values);

/// Inner forecast of the next aggregate bucket.
double forecast_aggregate(std::span<const double> values, const AggregationPlan& plan);

/**
 * Splits `aggregate_forecast` over one bucket of daily values. The shares are
 * equal; the last day takes the remainder so the bucket sums back exactly.
 */
std::vector<double> disaggregate(double aggregate_forecast, std::size_t bucket_length);

/// Daily forecasts for `horizon_days` periods after the end of `values`.
std::vector<double> adida_forecast(std::span<const double> values, const AggregationPlan& plan,
                                   std::size_t horizon_days);

}  // namespace twofold
