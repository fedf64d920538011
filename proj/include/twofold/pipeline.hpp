#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twofold/demand.hpp"
#include "twofold/forecasters.hpp"
#include "twofold/forest.hpp"
#include "twofold/occurrence.hpp"
#include "twofold/size.hpp"
#include "twofold/taxonomy.hpp"

namespace twofold {

/// C1 = boosted per demand type, C2 = boosted global, Oracle = true labels (diagnostics only).
enum class ClassifierId { C1, C2, Markov, HybridMLP, Oracle };
enum class SizeMethodId { Naive, MA3, MFV, SES, RAND, R2, R3 };

std::string to_string(ClassifierId id);
std::string to_string(SizeMethodId id);

struct PipelineConfig {
    ClassifierId classifier = ClassifierId::C2;
    SizeMethodId size = SizeMethodId::SES;
    double threshold = 0.5;
    int horizon = 14;
    SmoothingParams smoothing;
    BoostParams boost;
    ForestParams forest;
    MlpParams mlp;
    TaxonomyOptions taxonomy;
    std::uint64_t seed = 0;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

/**
 * Features and demand-type groups for one series set and horizon, shared by
 * every model fitted on it. Groups are assigned from data strictly before
 * `group_cutoff`.
 */
class PipelineData {
public:
    PipelineData(std::span<const DemandSeries> series, int horizon, Date group_cutoff, std::span<const Date> targets,
                 const PipelineConfig& config);

    std::span<const DemandSeries> series() const { return series_; }
    int horizon() const { return horizon_; }
    std::span<const DemandGroup> groups() const { return groups_; }
    const OccurrenceFeatureExtractor& extractor() const { return extractor_; }
    std::span<const OccurrenceFeatureRow> occurrence_rows() const { return occurrence_rows_; }
    std::span<const SizeFeatureRow> size_rows() const { return size_rows_; }

    const OccurrenceFeatureRow* occurrence_row(std::size_t series, Date target) const;
    const SizeFeatureRow* size_row(std::size_t series, Date target) const;

private:
    std::span<const DemandSeries> series_;
    int horizon_;
    std::vector<DemandGroup> groups_;
    OccurrenceFeatureExtractor extractor_;
    std::vector<OccurrenceFeatureRow> occurrence_rows_;
    std::vector<SizeFeatureRow> size_rows_;
    std::vector<std::vector<int>> occurrence_index_;  // per series, by day offset
    std::vector<std::vector<int>> size_index_;
};

/// Occurrence half of the pipeline, fitted on labels strictly before `train_before`.
class OccurrenceStage {
public:
    struct Output {
        double score = 0.0;
        bool flag = false;
    };

    static OccurrenceStage fit(ClassifierId id, const PipelineConfig& config, const PipelineData& data,
                               Date train_before);

    Output predict(const PipelineData& data, std::size_t series, Date target) const;

    ClassifierId id() const { return id_; }
    Date train_before() const { return train_before_; }
    const ScopedClassifier* boosted() const { return boosted_ ? &*boosted_ : nullptr; }

private:
    Output markov_output(const PipelineData& data, std::size_t series, Date target) const;

    ClassifierId id_ = ClassifierId::C2;
    double threshold_ = 0.5;
    Date train_before_;
    std::optional<ScopedClassifier> boosted_;
    std::vector<std::optional<MarkovOccurrence>> markov_;
    std::vector<std::optional<HybridMLP>> mlp_;
};

/// Size half of the pipeline.
class SizeStage {
public:
    static SizeStage fit(SizeMethodId id, const PipelineConfig& config, const PipelineData& data, Date train_before);

    /// 0 when the series has no demand before the origin.
    double estimate(const PipelineData& data, std::size_t series, Date target) const;

    SizeMethodId id() const { return id_; }

private:
    SizeMethodId id_ = SizeMethodId::SES;
    double alpha_ = 0.1;
    std::uint64_t seed_ = 0;
    std::optional<ScopedRegressor> regressor_;
};

/// Occurrence stage composed with a size stage: combined = flag ? size : 0.
class FittedPipeline {
public:
    FittedPipeline(PipelineConfig config, std::shared_ptr<const OccurrenceStage> occurrence,
                   std::shared_ptr<const SizeStage> size);

    static FittedPipeline fit(const PipelineConfig& config, const PipelineData& data, Date train_before);

    /**
     * One ForecastPoint sequence per series (weekday targets only, in the
     * given order). Throws LeakageError when a target's origin precedes data
     * used in fitting.
     */
    std::vector<std::vector<ForecastPoint>> forecast(const PipelineData& data, std::span<const Date> targets) const;

    const PipelineConfig& config() const { return config_; }

private:
    PipelineConfig config_;
    std::shared_ptr<const OccurrenceStage> occurrence_;
    std::shared_ptr<const SizeStage> size_;
};

/// Fits on every label strictly before min(target) - horizon, then forecasts.
std::vector<std::vector<ForecastPoint>> forecast(const PipelineConfig& config, std::span<const DemandSeries> series,
                                                 std::span<const Date> targets);

enum class BaselineMethod { Croston, SBA, TSB, ADIDA, Willemain, Hybrid };

std::string to_string(BaselineMethod m);

/**
 * Literature baselines. Croston/SBA/TSB/ADIDA run their recursion up to each
 * target's origin; size_estimate is the point forecast and implied_score the
 * method's occurrence belief (1/p, p or demand frequency). The flag applies the
 * pipeline's rule to that belief (implied >= threshold) and occurrence_score is
 * the resulting 0/1 decision. Willemain = Markov occurrence x jittered
 * bootstrap size; Hybrid = per-series network occurrence x SES size.
 */
std::vector<std::vector<ForecastPoint>> forecast_baseline(BaselineMethod method, const PipelineConfig& config,
                                                          const PipelineData& data, std::span<const Date> targets,
                                                          Date train_before);

}  // namespace twofold
