#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twofold/demand.hpp"
#include "twofold/forest.hpp"
#include "twofold/occurrence.hpp"
#include "twofold/taxonomy.hpp"

namespace twofold {

/// Size features for one (series, target), from nonzero demands up to target - horizon.
struct SizeFeatureRow {
    std::size_t series = 0;
    Date target;
    int horizon = 0;

    double last_demand_size = 0.0;
    double mean_last3 = 0.0;
    double median_past = 0.0;
    double mfv_past = 0.0;
    double ses_past = 0.0;

    double target_size = 0.0;  ///< actual value on target (0 when no demand or unknown)
    bool label_known = false;

    static constexpr std::size_t kWidth = 5;
    std::array<double, kWidth> values() const {
        return {last_demand_size, mean_last3, median_past, mfv_past, ses_past};
    }
    bool operator==(const SizeFeatureRow&) const = default;
};

FeatureSchema size_schema();

/// Empty when no demand precedes the origin.
std::optional<SizeFeatureRow> size_row(const DemandSeries& series, const DemandHistory& history, std::size_t index,
                                       Date target, int horizon, double alpha);

/**
 * Rows for weekday targets with at least one prior demand. With
 * `demand_only` set, only targets with actual demand are kept (training rows).
 */
std::vector<SizeFeatureRow> extract_size_features(std::span<const DemandSeries> series, std::span<const Date> targets,
                                                  int horizon, double alpha, bool demand_only = false,
                                                  ExtractionReport* report = nullptr);

FeatureMatrix to_matrix(std::span<const SizeFeatureRow> rows);

/// R2 (one regressor per demand group) or R3 (one global regressor).
class ScopedRegressor {
public:
    ModelScope scope() const { return scope_; }
    /// Clipped below at the smallest positive training size.
    double predict(const SizeFeatureRow& row, DemandGroup group) const;

    friend ScopedRegressor fit_ensemble(std::span<const SizeFeatureRow>, std::span<const DemandGroup>, ModelScope,
                                        const ForestParams&);

private:
    ModelScope scope_ = ModelScope::Global;
    std::optional<TreeEnsembleRegressor> global_;
    std::array<std::optional<TreeEnsembleRegressor>, 2> by_group_;
    double floor_ = 0.0;
};

/// Trains on rows with a known positive target. Throws InvalidInput when empty.
ScopedRegressor fit_ensemble(std::span<const SizeFeatureRow> rows, std::span<const DemandGroup> groups,
                             ModelScope scope, const ForestParams& params);

enum class SizeMethod { Naive, MA3, MFV, SES, RAND };

std::string to_string(SizeMethod m);

/// Local (R1) estimate from a nonzero-size history. Throws NoForecast when empty.
double estimate_size(SizeMethod method, std::span<const double> history, double alpha = 0.1, std::uint64_t seed = 0);

}  // namespace twofold
