#pragma once

#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "twofold/demand.hpp"
#include "twofold/pipeline.hpp"

namespace twofold {

/// Rolling-origin split: the final `test_days` of the span cut into contiguous folds.
struct SplitPlan {
    int horizon = 14;
    DateRange test;
    std::vector<DateRange> folds;

    /// Labels strictly before this date may be used to fit fold `k`.
    Date train_before(std::size_t k) const { return folds.at(k).first - Days{horizon}; }

    /// Throws InvalidInput when the span leaves no training data before the first fold.
    static SplitPlan rolling(DateRange span, int horizon, int test_days = 182, int n_folds = 6);
};

enum class ExperimentKind { Pipeline, Baseline };

/// Resolved experiment id: `C{1,2}R1-{NAIVE,MA3,MFV,SES,RAND}`, `C{1,2}R{2,3}-ML`,
/// `ORACLE-R1-<size>`, or a baseline name (CROSTON, SBA, TSB, ADIDA, WILLEMAIN, NASIRI).
struct ExperimentSpec {
    std::string id;
    ExperimentKind kind = ExperimentKind::Pipeline;
    ClassifierId classifier = ClassifierId::C2;
    SizeMethodId size = SizeMethodId::SES;
    BaselineMethod baseline = BaselineMethod::Croston;

    /// Case-insensitive. Throws ConfigError on unknown ids.
    static ExperimentSpec parse(const std::string& id);
    /// Whether the inner loop tunes a smoothing constant for this experiment.
    bool uses_smoothing() const;
};

/// The 14 proposed models followed by the six literature baselines.
std::vector<std::string> default_matrix_ids();

struct EvaluationOptions {
    PipelineConfig base;
    std::vector<int> horizons{14, 56};
    int test_days = 182;
    int n_folds = 6;
    /// Inner-loop grid for alpha (and TSB beta); empty disables selection.
    std::vector<double> smoothing_grid{0.05, 0.1, 0.2, 0.3, 0.5};
    int inner_days = 30;
};

inline constexpr double kNotAvailable = std::numeric_limits<double>::quiet_NaN();

struct MetricReport {
    std::string id;
    int horizon = 0;
    double auc_roc = kNotAvailable;
    /// AUC of the baseline's implied occurrence belief (1/p, p, frequency).
    double auc_implied = kNotAvailable;
    double auc_lumpy = kNotAvailable;
    double auc_intermittent = kNotAvailable;
    double mase_I = kNotAvailable;
    double mase_II = kNotAvailable;
    std::vector<double> spec_per_series;
    double spec_median = kNotAvailable;

    std::size_t points = 0;
    std::size_t positives = 0;
    std::size_t flagged = 0;
    std::size_t mase_I_series = 0;
    std::size_t mase_II_series = 0;
    std::size_t mase_excluded = 0;  ///< series with a zero or undefined scale
    std::vector<double> alpha_by_fold;
    std::vector<double> beta_by_fold;
    /// Non-empty when the run failed; metrics are then unavailable.
    std::string error;
};

/**
 * Runs experiments over one series set. Prepared features and fitted
 * occurrence / size models are cached per (horizon, fold), so a matrix that
 * shares a classifier across size methods fits it once.
 */
class Evaluator {
public:
    Evaluator(std::span<const DemandSeries> series, EvaluationOptions options);
    ~Evaluator();
    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    /// Pooled out-of-sample forecasts, one chronological sequence per series.
    std::vector<std::vector<ForecastPoint>> predictions(const ExperimentSpec& spec, int horizon);
    MetricReport run(const ExperimentSpec& spec, int horizon);

    const SplitPlan& plan(int horizon);
    const PipelineData& data(int horizon);
    std::span<const DemandSeries> series() const { return series_; }
    const EvaluationOptions& options() const { return options_; }

private:
    struct HorizonState;
    HorizonState& state(int horizon);
    SmoothingParams select_smoothing(const ExperimentSpec& spec, HorizonState& st, std::size_t fold);
    std::shared_ptr<const OccurrenceStage> occurrence(HorizonState& st, ClassifierId id, std::size_t fold);
    std::shared_ptr<const SizeStage> size_stage(HorizonState& st, SizeMethodId id, std::size_t fold,
                                                const SmoothingParams& smoothing);
    std::vector<std::vector<ForecastPoint>> fold_forecast(const ExperimentSpec& spec, HorizonState& st,
                                                          std::size_t fold, const SmoothingParams& smoothing);

    std::span<const DemandSeries> series_;
    EvaluationOptions options_;
    std::map<int, std::unique_ptr<HorizonState>> states_;
};

/// Scores pooled forecasts against the series. `groups` indexes series.
MetricReport score_predictions(std::span<const DemandSeries> series, std::span<const DemandGroup> groups,
                               const SplitPlan& plan, std::span<const std::vector<ForecastPoint>> predictions);

MetricReport run_experiment(const ExperimentSpec& spec, std::span<const DemandSeries> series, int horizon,
                            const EvaluationOptions& options);

struct Table5Row {
    std::string model;  ///< C1 or C2
    std::map<int, std::pair<double, double>> auc_by_horizon;  ///< horizon -> (lumpy, intermittent)
};

struct EvaluationReport {
    std::vector<int> horizons;
    std::vector<MetricReport> rows;  ///< one per (spec, horizon), spec-major
    std::vector<Table5Row> table5;
};

/// Failures are recorded per row and the matrix continues. Empty specs give an empty report.
EvaluationReport run_matrix(std::span<const ExperimentSpec> specs, std::span<const DemandSeries> series,
                            const EvaluationOptions& options);

/// Wide table: one row per spec, AUC / MASE_I / MASE_II / SPEC_median per horizon.
std::string table4_csv(const EvaluationReport& report);
/// Two rows (C1, C2) x lumpy / intermittent AUC per horizon.
std::string table5_csv(const EvaluationReport& report);
/// Long format with diagnostics; one line per (spec, horizon).
std::string results_csv(const EvaluationReport& report, const std::string& run_tag);
std::string results_csv_header();
/// Aligned plain-text rendering of both tables.
std::string render_text(const EvaluationReport& report);

}  // namespace twofold
