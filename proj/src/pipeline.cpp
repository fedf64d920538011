#include "twofold/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twofold/adida.hpp"
#include "twofold/errors.hpp"
#include "twofold/seed.hpp"

namespace twofold {

std::string to_string(ClassifierId id) {
    switch (id) {
        case ClassifierId::C1: return "C1";
        case ClassifierId::C2: return "C2";
        case ClassifierId::Markov: return "MARKOV";
        case ClassifierId::HybridMLP: return "MLP";
        case ClassifierId::Oracle: return "ORACLE";
    }
    return "?";
}

std::string to_string(SizeMethodId id) {
    switch (id) {
        case SizeMethodId::Naive: return "NAIVE";
        case SizeMethodId::MA3: return "MA3";
        case SizeMethodId::MFV: return "MFV";
        case SizeMethodId::SES: return "SES";
        case SizeMethodId::RAND: return "RAND";
        case SizeMethodId::R2: return "R2";
        case SizeMethodId::R3: return "R3";
    }
    return "?";
}

std::string to_string(BaselineMethod m) {
    switch (m) {
        case BaselineMethod::Croston: return "CROSTON";
        case BaselineMethod::SBA: return "SBA";
        case BaselineMethod::TSB: return "TSB";
        case BaselineMethod::ADIDA: return "ADIDA";
        case BaselineMethod::Willemain: return "WILLEMAIN";
        case BaselineMethod::Hybrid: return "NASIRI";
    }
    return "?";
}

void PipelineConfig::validate() const {
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
    if (horizon <= 0) throw ConfigError("horizon must be positive");
    if (!(smoothing.alpha > 0.0 && smoothing.alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!(smoothing.beta > 0.0 && smoothing.beta <= 1.0)) throw ConfigError("beta must lie in (0, 1]");
    if (boost.rounds <= 0) throw ConfigError("boost rounds must be positive");
    if (!(boost.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (boost.focal_gamma < 0.0) throw ConfigError("focal gamma must be non-negative");
    if (forest.n_trees <= 0) throw ConfigError("forest needs at least one tree");
    if (mlp.hidden <= 0 || mlp.epochs <= 0) throw ConfigError("network needs hidden units and epochs");
}

namespace {

SizeMethod local_method(SizeMethodId id) {
    switch (id) {
        case SizeMethodId::Naive: return SizeMethod::Naive;
        case SizeMethodId::MA3: return SizeMethod::MA3;
        case SizeMethodId::MFV: return SizeMethod::MFV;
        case SizeMethodId::SES: return SizeMethod::SES;
        case SizeMethodId::RAND: return SizeMethod::RAND;
        default: break;
    }
    throw InvalidInput("size method " + to_string(id) + " is not a local estimator");
}

std::uint64_t day_number(Date d) { return static_cast<std::uint64_t>(d.time_since_epoch().count()); }

void check_index(const PipelineData& data, std::size_t series) {
    if (series >= data.series().size()) throw InvalidInput("series index out of range");
}

}  // namespace

PipelineData::PipelineData(std::span<const DemandSeries> series, int horizon, Date group_cutoff,
                           std::span<const Date> targets, const PipelineConfig& config)
    : series_(series), horizon_(horizon), extractor_(series) {
    if (horizon <= 0) throw InvalidInput("horizon must be positive");
    groups_.reserve(series.size());
    for (const auto& s : series) {
        if (group_cutoff <= s.start()) {
            groups_.push_back(DemandGroup::Intermittent);
        } else {
            groups_.push_back(demand_group(s.truncated(std::min(s.end(), group_cutoff - Days{1})), config.taxonomy));
        }
    }
    occurrence_index_.resize(series.size());
    size_index_.resize(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const DemandSeries& s = series[i];
        occurrence_index_[i].assign(s.size(), -1);
        size_index_[i].assign(s.size(), -1);
        const DemandHistory& history = extractor_.history(i);
        for (Date t : targets) {
            if (!Calendar::is_evaluation_day(t) || !s.covers(t)) continue;
            auto& oslot = occurrence_index_[i][s.index_of(t)];
            if (oslot >= 0) continue;
            if (auto r = extractor_.row(i, t, horizon)) {
                oslot = static_cast<int>(occurrence_rows_.size());
                occurrence_rows_.push_back(*r);
            }
            if (auto r = twofold::size_row(s, history, i, t, horizon, config.smoothing.alpha)) {
                size_index_[i][s.index_of(t)] = static_cast<int>(size_rows_.size());
                size_rows_.push_back(*r);
            }
        }
    }
}

const OccurrenceFeatureRow* PipelineData::occurrence_row(std::size_t series, Date target) const {
    const DemandSeries& s = series_[series];
    if (!s.covers(target)) return nullptr;
    const int k = occurrence_index_[series][s.index_of(target)];
    return k < 0 ? nullptr : &occurrence_rows_[static_cast<std::size_t>(k)];
}

const SizeFeatureRow* PipelineData::size_row(std::size_t series, Date target) const {
    const DemandSeries& s = series_[series];
    if (!s.covers(target)) return nullptr;
    const int k = size_index_[series][s.index_of(target)];
    return k < 0 ? nullptr : &size_rows_[static_cast<std::size_t>(k)];
}

OccurrenceStage OccurrenceStage::fit(ClassifierId id, const PipelineConfig& config, const PipelineData& data,
                                     Date train_before) {
    OccurrenceStage stage;
    stage.id_ = id;
    stage.threshold_ = config.threshold;
    stage.train_before_ = train_before;
    const auto series = data.series();
    switch (id) {
        case ClassifierId::C1:
        case ClassifierId::C2: {
            std::vector<OccurrenceFeatureRow> train;
            for (const auto& r : data.occurrence_rows()) {
                if (r.label_known && r.target < train_before) train.push_back(r);
            }
            stage.boosted_ = fit_boosted(train, data.groups(),
                                         id == ClassifierId::C1 ? ModelScope::PerDemandType : ModelScope::Global,
                                         config.boost);
            break;
        }
        case ClassifierId::HybridMLP: {
            stage.mlp_.resize(series.size());
            for (std::size_t i = 0; i < series.size(); ++i) {
                MlpParams p = config.mlp;
                p.seed = derive_seed(config.mlp.seed ^ config.seed, {i});
                try {
                    stage.mlp_[i] = HybridMLP::fit(series[i], train_before, data.horizon(), p);
                } catch (const NoForecast&) {
                }
            }
            [[fallthrough]];
        }
        case ClassifierId::Markov: {
            stage.markov_.resize(series.size());
            for (std::size_t i = 0; i < series.size(); ++i) {
                const DemandSeries& s = series[i];
                if (train_before <= s.start() + Days{1}) continue;
                const auto n = std::min(s.size(), s.index_of(train_before - Days{1}) + 1);
                stage.markov_[i] = MarkovOccurrence::fit(s.values().first(n));
            }
            break;
        }
        case ClassifierId::Oracle: break;
    }
    return stage;
}

OccurrenceStage::Output OccurrenceStage::markov_output(const PipelineData& data, std::size_t series,
                                                       Date target) const {
    const auto& chain = markov_[series];
    const DemandSeries& s = data.series()[series];
    const Date origin = target - Days{data.horizon()};
    if (!chain || !s.covers(origin)) return {};
    const double p = chain->probability(s.at(origin) > 0.0, data.horizon());
    return {p, p >= threshold_};
}

OccurrenceStage::Output OccurrenceStage::predict(const PipelineData& data, std::size_t series, Date target) const {
    check_index(data, series);
    switch (id_) {
        case ClassifierId::C1:
        case ClassifierId::C2: {
            const auto* row = data.occurrence_row(series, target);
            if (!row) return {};
            const double p = boosted_->model(data.groups()[series]).predict_row(row->values());
            return {p, p >= threshold_};
        }
        case ClassifierId::Markov: return markov_output(data, series, target);
        case ClassifierId::HybridMLP: {
            if (const auto& net = mlp_[series]) {
                const DemandSeries& s = data.series()[series];
                try {
                    const auto in = hybrid_inputs(s, data.extractor().history(series), target, data.horizon());
                    const auto pred = net->predict(in);
                    return {pred.raw, pred.flag};
                } catch (const NoForecast&) {
                }
            }
            return markov_output(data, series, target);
        }
        case ClassifierId::Oracle: {
            const DemandSeries& s = data.series()[series];
            if (!s.covers(target)) throw NoForecast("oracle labels unavailable for " + format_date(target));
            const bool demand = s.at(target) > 0.0;
            return {demand ? 1.0 : 0.0, demand};
        }
    }
    return {};
}

SizeStage SizeStage::fit(SizeMethodId id, const PipelineConfig& config, const PipelineData& data, Date train_before) {
    SizeStage stage;
    stage.id_ = id;
    stage.alpha_ = config.smoothing.alpha;
    stage.seed_ = config.seed;
    if (id == SizeMethodId::R2 || id == SizeMethodId::R3) {
        std::vector<SizeFeatureRow> train;
        for (const auto& r : data.size_rows()) {
            if (r.label_known && r.target < train_before && r.target_size > 0.0) train.push_back(r);
        }
        stage.regressor_ = fit_ensemble(train, data.groups(),
                                        id == SizeMethodId::R2 ? ModelScope::PerDemandType : ModelScope::Global,
                                        config.forest);
    }
    return stage;
}

double SizeStage::estimate(const PipelineData& data, std::size_t series, Date target) const {
    check_index(data, series);
    if (regressor_) {
        const auto* row = data.size_row(series, target);
        return row ? regressor_->predict(*row, data.groups()[series]) : 0.0;
    }
    const auto sizes = data.extractor().history(series).sizes_until(target - Days{data.horizon()});
    if (sizes.empty()) return 0.0;
    return estimate_size(local_method(id_), sizes, alpha_, derive_seed(seed_, {series, day_number(target)}));
}

FittedPipeline::FittedPipeline(PipelineConfig config, std::shared_ptr<const OccurrenceStage> occurrence,
                               std::shared_ptr<const SizeStage> size)
    : config_(std::move(config)), occurrence_(std::move(occurrence)), size_(std::move(size)) {
    if (!occurrence_ || !size_) throw InvalidInput("pipeline needs both stages");
}

FittedPipeline FittedPipeline::fit(const PipelineConfig& config, const PipelineData& data, Date train_before) {
    config.validate();
    if (config.horizon != data.horizon()) throw InvalidInput("config horizon differs from prepared data");
    return FittedPipeline(
        config, std::make_shared<OccurrenceStage>(OccurrenceStage::fit(config.classifier, config, data, train_before)),
        std::make_shared<SizeStage>(SizeStage::fit(config.size, config, data, train_before)));
}

std::vector<std::vector<ForecastPoint>> FittedPipeline::forecast(const PipelineData& data,
                                                                 std::span<const Date> targets) const {
    const Date last_label = occurrence_->train_before() - Days{1};
    for (Date t : targets) {
        if (t - Days{data.horizon()} < last_label) {
            throw LeakageError("target " + format_date(t) + " has origin before the last training label " +
                               format_date(last_label));
        }
    }
    std::vector<std::vector<ForecastPoint>> out(data.series().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (Date t : targets) {
            if (!Calendar::is_evaluation_day(t)) continue;
            const auto occ = occurrence_->predict(data, i, t);
            const double size = size_->estimate(data, i, t);
            out[i].push_back(make_point(t, occ.score, occ.flag, size));
        }
    }
    return out;
}

std::vector<std::vector<ForecastPoint>> forecast(const PipelineConfig& config, std::span<const DemandSeries> series,
                                                 std::span<const Date> targets) {
    if (targets.empty()) return std::vector<std::vector<ForecastPoint>>(series.size());
    const Date first = *std::min_element(targets.begin(), targets.end());
    const Date train_before = first - Days{config.horizon};
    std::vector<Date> all;
    if (!series.empty()) {
        Date lo = series.front().start(), hi = series.front().end();
        for (const auto& s : series) {
            lo = std::min(lo, s.start());
            hi = std::max(hi, s.end());
        }
        for (Date d = lo; d < train_before && d <= hi; d += Days{1}) all.push_back(d);
    }
    all.insert(all.end(), targets.begin(), targets.end());
    const PipelineData data(series, config.horizon, train_before, all, config);
    return FittedPipeline::fit(config, data, train_before).forecast(data, targets);
}

namespace {

std::vector<std::vector<ForecastPoint>> two_stage_baseline(ClassifierId occ, SizeMethodId size,
                                                           const PipelineConfig& config, const PipelineData& data,
                                                           std::span<const Date> targets, Date train_before) {
    PipelineConfig c = config;
    c.classifier = occ;
    c.size = size;
    c.horizon = data.horizon();
    return FittedPipeline::fit(c, data, train_before).forecast(data, targets);
}

double frequency_until(std::span<const double> values, std::size_t n) {
    if (n == 0) return 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) k += values[i] > 0.0;
    return static_cast<double>(k) / static_cast<double>(n);
}

}  // namespace

std::vector<std::vector<ForecastPoint>> forecast_baseline(BaselineMethod method, const PipelineConfig& config,
                                                          const PipelineData& data, std::span<const Date> targets,
                                                          Date train_before) {
    switch (method) {
        case BaselineMethod::Willemain:
            return two_stage_baseline(ClassifierId::Markov, SizeMethodId::RAND, config, data, targets, train_before);
        case BaselineMethod::Hybrid:
            return two_stage_baseline(ClassifierId::HybridMLP, SizeMethodId::SES, config, data, targets,
                                      train_before);
        default: break;
    }
    const int h = data.horizon();
    for (Date t : targets) {
        if (t - Days{h} < train_before - Days{1}) {
            throw LeakageError("target " + format_date(t) + " has origin before the fitting window ends");
        }
    }
    const auto series = data.series();
    std::vector<std::vector<ForecastPoint>> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const DemandSeries& s = series[i];
        const auto values = s.values();
        std::vector<double> path, occ_path;
        const std::size_t init =
            train_before > s.start() ? std::min(s.size(), static_cast<std::size_t>(days_between(s.start(), train_before)))
                                     : 0;
        const CrostonOptions co{config.smoothing.alpha};
        const TsbOptions to{config.smoothing.alpha, config.smoothing.beta};
        std::size_t bucket = 1;
        switch (method) {
            case BaselineMethod::Croston:
            case BaselineMethod::SBA:
                path = croston_path(values, co);
                occ_path = croston_occurrence_path(values, co);
                break;
            case BaselineMethod::TSB:
                path = tsb_path(values, to, std::max<std::size_t>(init, 1));
                occ_path = tsb_occurrence_path(values, to, std::max<std::size_t>(init, 1));
                break;
            case BaselineMethod::ADIDA:
                bucket = default_bucket_length(values.first(init));
                break;
            default: break;
        }
        const double shrink = method == BaselineMethod::SBA ? 1.0 - config.smoothing.alpha / 2.0 : 1.0;
        for (Date t : targets) {
            if (!Calendar::is_evaluation_day(t)) continue;
            const Date origin = t - Days{h};
            if (!s.covers(origin)) {
                out[i].push_back(make_point(t, 0.0, false, 0.0));
                continue;
            }
            const std::size_t k = s.index_of(origin);
            double f = std::numeric_limits<double>::quiet_NaN();
            double implied = std::numeric_limits<double>::quiet_NaN();
            if (method == BaselineMethod::ADIDA) {
                AggregationPlan plan;
                plan.bucket_length = bucket;
                plan.alpha = config.smoothing.alpha;
                if (k + 1 >= bucket) f = adida_forecast(values.first(k + 1), plan, static_cast<std::size_t>(h)).back();
                implied = frequency_until(values, k + 1);
            } else {
                f = path[k] * shrink;
                implied = occ_path[k];
            }
            const bool flag = std::isfinite(implied) && implied >= config.threshold;
            ForecastPoint p = make_point(t, flag ? 1.0 : 0.0, flag, std::isfinite(f) ? f : 0.0);
            p.implied_score = implied;
            out[i].push_back(p);
        }
    }
    return out;
}

}  // namespace twofold
