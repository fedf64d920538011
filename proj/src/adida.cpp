#include "twofold/adida.hpp"

#include <cmath>

#include "twofold/errors.hpp"
#include "twofold/forecasters.hpp"

namespace twofold {

std::vector<double> aggregate(std::span<const double> values, const AggregationPlan& plan) {
    const std::size_t b = plan.bucket_length;
    if (b == 0) throw InvalidInput("bucket length must be positive");
    if (values.size() < b) {
        throw InvalidInput("series of length " + std::to_string(values.size()) + " shorter than one bucket of " +
                           std::to_string(b));
    }
    std::vector<double> out;
    if (plan.mode == AggregationMode::NonOverlapping) {
        const std::size_t head = values.size() % b;
        for (std::size_t i = head; i < values.size(); i += b) {
            double sum = 0.0;
            for (std::size_t k = 0; k < b; ++k) sum += values[i + k];
            out.push_back(sum);
        }
    } else {
        for (std::size_t i = 0; i + b <= values.size(); ++i) {
            double sum = 0.0;
            for (std::size_t k = 0; k < b; ++k) sum += values[i + k];
            out.push_back(sum);
        }
    }
    return out;
}

std::size_t default_bucket_length(std::span<const double> values) {
    long first = -1, last = -1, count = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0.0) {
            if (first < 0) first = static_cast<long>(i);
            last = static_cast<long>(i);
            ++count;
        }
    }
    if (count < 2) return 1;
    const double mean_gap = static_cast<double>(last - first) / static_cast<double>(count - 1);
    return static_cast<std::size_t>(std::ceil(mean_gap));
}

double forecast_aggregate(std::span<const double> values, const AggregationPlan& plan) {
    const auto agg = aggregate(values, plan);
    switch (plan.inner) {
        case InnerForecaster::SES: return ses(agg, plan.alpha);
        case InnerForecaster::Naive: return naive_last(agg);
        case InnerForecaster::MA3: return ma3(agg);
        case InnerForecaster::Croston: return croston(agg, {plan.alpha});
    }
    return 0.0;
}

std::vector<double> disaggregate(double aggregate_forecast, std::size_t bucket_length) {
    if (bucket_length == 0) throw InvalidInput("bucket length must be positive");
    std::vector<double> daily(bucket_length, aggregate_forecast / static_cast<double>(bucket_length));
    double head = 0.0;
    for (std::size_t k = 0; k + 1 < bucket_length; ++k) head += daily[k];
    daily.back() = aggregate_forecast - head;
    return daily;
}

std::vector<double> adida_forecast(std::span<const double> values, const AggregationPlan& plan,
                                   std::size_t horizon_days) {
    const auto bucket = disaggregate(forecast_aggregate(values, plan), plan.bucket_length);
    std::vector<double> out(horizon_days);
    for (std::size_t d = 0; d < horizon_days; ++d) out[d] = bucket[d % bucket.size()];
    return out;
}

}  // namespace twofold
