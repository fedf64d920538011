#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "twofold/boosting.hpp"
#include "twofold/demand.hpp"
#include "twofold/history.hpp"
#include "twofold/taxonomy.hpp"

namespace twofold {

/// Category code for "no demand seen yet" in dow_last_demand.
inline constexpr int kNoDemandDow = 7;

/**
 * Occurrence features for one (series, target date) pair. Every feature is
 * computed from data on or before origin = target - horizon.
 */
struct OccurrenceFeatureRow {
    std::size_t series = 0;
    Date target;
    int horizon = 0;

    double weekdays_since_last_demand = 0.0;  ///< weekdays in (last demand, target]; series age without demand
    int dow_last_demand = kNoDemandDow;       ///< 0 = Monday .. 6 = Sunday, 7 = none
    int dow_target = 0;
    double mean_interdemand_interval = 0.0;     ///< calendar days; series age when fewer than two demands
    double mean_recent_intervals_global = 0.0;  ///< mean over all series of their latest interval
    double size_skew = 0.0;
    double size_kurtosis = 0.0;  ///< excess kurtosis
    /// Invented (not among the enumerated features): share of past demands on the target's weekday.
    double target_dow_share = 0.0;

    bool label = false;
    bool label_known = false;

    static constexpr std::size_t kWidth = 8;
    std::array<double, kWidth> values() const;
    bool operator==(const OccurrenceFeatureRow&) const = default;
};

FeatureSchema occurrence_schema();

struct ExtractionReport {
    std::size_t rows = 0;
    std::size_t skipped = 0;  ///< insufficient history (or no prior demand, for size rows)
    std::size_t non_weekday = 0;
};

/// Precomputed per-series histories plus the cross-series recent-interval curve.
class OccurrenceFeatureExtractor {
public:
    explicit OccurrenceFeatureExtractor(std::span<const DemandSeries> series);

    /// Empty when origin precedes the series start.
    std::optional<OccurrenceFeatureRow> row(std::size_t series, Date target, int horizon) const;

    double global_recent_interval(Date origin) const;
    const DemandHistory& history(std::size_t series) const { return histories_[series]; }
    std::size_t size() const { return series_.size(); }

private:
    std::span<const DemandSeries> series_;
    std::vector<DemandHistory> histories_;
    Date first_day_;
    std::vector<double> recent_mean_;  // indexed by days since first_day_
};

/// One row per (series, weekday target); non-weekday targets and short histories are skipped.
std::vector<OccurrenceFeatureRow> extract_occurrence_features(std::span<const DemandSeries> series,
                                                              std::span<const Date> targets, int horizon,
                                                              ExtractionReport* report = nullptr);

FeatureMatrix to_matrix(std::span<const OccurrenceFeatureRow> rows);

enum class ModelScope { PerDemandType, Global };

/// C1 (one model per demand group) or C2 (one global model).
class ScopedClassifier {
public:
    ModelScope scope() const { return scope_; }
    std::vector<double> predict(std::span<const OccurrenceFeatureRow> rows, std::span<const DemandGroup> groups) const;
    const BoostedClassifier& model(DemandGroup g) const;
    const BoostedClassifier& global() const;

    friend ScopedClassifier fit_boosted(std::span<const OccurrenceFeatureRow>, std::span<const DemandGroup>,
                                        ModelScope, const BoostParams&);

private:
    ModelScope scope_ = ModelScope::Global;
    std::optional<BoostedClassifier> global_;
    std::array<std::optional<BoostedClassifier>, 2> by_group_;
};

/// `groups` is indexed by OccurrenceFeatureRow::series. Rows with unknown labels are ignored.
ScopedClassifier fit_boosted(std::span<const OccurrenceFeatureRow> rows, std::span<const DemandGroup> groups,
                             ModelScope scope, const BoostParams& params);

/// Scores in (0,1); empty input gives empty output.
std::vector<double> predict_occurrence(const BoostedClassifier& model, std::span<const OccurrenceFeatureRow> rows);

/// Two-state demand/no-demand chain with add-one smoothed transitions.
struct MarkovOccurrence {
    double p01 = 0.5;  ///< P(demand | no demand before)
    double p11 = 0.5;  ///< P(demand | demand before)

    /// Throws InvalidInput for fewer than two periods.
    static MarkovOccurrence fit(std::span<const double> values);

    /// P(demand `steps` periods after a period in state `demand_now`).
    double probability(bool demand_now, int steps) const;
    double stationary() const;
};

struct MlpParams {
    int hidden = 5;
    int epochs = 500;
    double learning_rate = 0.1;
    /// Most recent training targets kept per series.
    std::size_t window = 130;
    std::uint64_t seed = 0;
};

/// The four hybrid-network inputs, measured at origin = target - horizon.
struct HybridInputs {
    double last_size = 0.0;         ///< demand in the origin period
    double gap_last_two = 0.0;      ///< periods between the last two demands
    double since_last_demand = 0.0; ///< periods from last demand to target
    double since_last_zero = 0.0;   ///< periods from the latest zero-demand period to target

    std::array<double, 4> values() const { return {last_size, gap_last_two, since_last_demand, since_last_zero}; }
};

/// Throws NoForecast when fewer than two demands precede the origin.
HybridInputs hybrid_inputs(const DemandSeries& series, const DemandHistory& history, Date target, int horizon);

/// One-hidden-layer network (logistic hidden units, linear output) trained per series.
class HybridMLP {
public:
    struct Prediction {
        bool flag;
        double raw;
    };

    /// Trains on weekday targets before `train_before`. Throws NoForecast when the
    /// series has fewer than two demands or no usable training rows.
    static HybridMLP fit(const DemandSeries& series, Date train_before, int horizon, const MlpParams& params);

    Prediction predict(const HybridInputs& inputs) const;

    std::span<const double> weights() const { return weights_; }

private:
    int hidden_ = 0;
    std::array<double, 4> mean_{};
    std::array<double, 4> scale_{};
    double target_scale_ = 1.0;
    std::vector<double> weights_;  // hidden x (4 + 1), then hidden + 1 output weights
};

}  // namespace twofold
