#include "twofold/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "twofold/errors.hpp"
#include "twofold/metrics.hpp"

namespace twofold {

SplitPlan SplitPlan::rolling(DateRange span, int horizon, int test_days, int n_folds) {
    if (horizon <= 0) throw InvalidInput("horizon must be positive");
    if (test_days <= 0 || n_folds <= 0 || n_folds > test_days) throw InvalidInput("invalid fold geometry");
    if (span.length() <= test_days + horizon) {
        throw InvalidInput("span of " + std::to_string(span.length()) + " days leaves no training data before a " +
                           std::to_string(test_days) + "-day test window at horizon " + std::to_string(horizon));
    }
    SplitPlan plan;
    plan.horizon = horizon;
    plan.test = {span.last - Days{test_days - 1}, span.last};
    long start = 0;
    for (int k = 0; k < n_folds; ++k) {
        const long end = static_cast<long>(test_days) * (k + 1) / n_folds;
        plan.folds.push_back({plan.test.first + Days{start}, plan.test.first + Days{end - 1}});
        start = end;
    }
    return plan;
}

namespace {

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

SizeMethodId parse_local_size(const std::string& name, const std::string& id) {
    if (name == "NAIVE") return SizeMethodId::Naive;
    if (name == "MA3" || name == "MA(3)") return SizeMethodId::MA3;
    if (name == "MFV") return SizeMethodId::MFV;
    if (name == "SES") return SizeMethodId::SES;
    if (name == "RAND") return SizeMethodId::RAND;
    throw ConfigError("unknown experiment id '" + id + "'");
}

}  // namespace

ExperimentSpec ExperimentSpec::parse(const std::string& raw) {
    const std::string id = upper(raw);
    ExperimentSpec spec;
    spec.id = id;
    static const std::pair<const char*, BaselineMethod> baselines[] = {
        {"CROSTON", BaselineMethod::Croston}, {"SBA", BaselineMethod::SBA},
        {"TSB", BaselineMethod::TSB},         {"ADIDA", BaselineMethod::ADIDA},
        {"WILLEMAIN", BaselineMethod::Willemain}, {"NASIRI", BaselineMethod::Hybrid},
    };
    for (const auto& [name, method] : baselines) {
        if (id == name) {
            spec.kind = ExperimentKind::Baseline;
            spec.baseline = method;
            return spec;
        }
    }
    if (id.rfind("ORACLE-R1-", 0) == 0) {
        spec.classifier = ClassifierId::Oracle;
        spec.size = parse_local_size(id.substr(10), raw);
        return spec;
    }
    // C{1,2}R{1,2,3}-<method>
    if (id.size() < 6 || id[0] != 'C' || id[2] != 'R' || id[4] != '-') {
        throw ConfigError("unknown experiment id '" + raw + "'");
    }
    if (id[1] == '1') {
        spec.classifier = ClassifierId::C1;
    } else if (id[1] == '2') {
        spec.classifier = ClassifierId::C2;
    } else {
        throw ConfigError("unknown experiment id '" + raw + "'");
    }
    const std::string method = id.substr(5);
    if (id[3] == '1') {
        spec.size = parse_local_size(method, raw);
    } else if ((id[3] == '2' || id[3] == '3') && method == "ML") {
        spec.size = id[3] == '2' ? SizeMethodId::R2 : SizeMethodId::R3;
    } else {
        throw ConfigError("unknown experiment id '" + raw + "'");
    }
    return spec;
}

bool ExperimentSpec::uses_smoothing() const {
    if (kind == ExperimentKind::Baseline) return baseline != BaselineMethod::Willemain;
    return size == SizeMethodId::SES;
}

std::vector<std::string> default_matrix_ids() {
    return {"C1R1-NAIVE", "C1R1-MA3", "C1R1-SES", "C1R1-MFV", "C1R1-RAND", "C1R2-ML", "C1R3-ML",
            "C2R1-NAIVE", "C2R1-MA3", "C2R1-SES", "C2R1-MFV", "C2R1-RAND", "C2R2-ML", "C2R3-ML",
            "CROSTON",    "SBA",      "TSB",      "ADIDA",    "WILLEMAIN", "NASIRI"};
}

struct Evaluator::HorizonState {
    SplitPlan plan;
    std::unique_ptr<PipelineData> data;
    std::vector<std::vector<Date>> fold_targets;
    std::map<std::pair<ClassifierId, std::size_t>, std::shared_ptr<const OccurrenceStage>> occurrence;
    std::map<std::pair<SizeMethodId, std::size_t>, std::shared_ptr<const SizeStage>> size;
    std::map<std::pair<std::string, std::size_t>, SmoothingParams> smoothing;
};

Evaluator::Evaluator(std::span<const DemandSeries> series, EvaluationOptions options)
    : series_(series), options_(std::move(options)) {
    if (series_.empty()) throw InvalidInput("evaluation needs at least one series");
    options_.base.validate();
}

Evaluator::~Evaluator() = default;

Evaluator::HorizonState& Evaluator::state(int horizon) {
    auto it = states_.find(horizon);
    if (it != states_.end()) return *it->second;

    auto st = std::make_unique<HorizonState>();
    DateRange span{series_.front().start(), series_.front().end()};
    for (const auto& s : series_) {
        span.first = std::min(span.first, s.start());
        span.last = std::max(span.last, s.end());
    }
    st->plan = SplitPlan::rolling(span, horizon, options_.test_days, options_.n_folds);
    PipelineConfig cfg = options_.base;
    cfg.horizon = horizon;
    const auto all = Calendar::evaluation_days(span);
    // Demand-type groups only see data no newer than the earliest test origin.
    st->data = std::make_unique<PipelineData>(series_, horizon, st->plan.test.first - Days{horizon}, all, cfg);
    for (const auto& fold : st->plan.folds) st->fold_targets.push_back(Calendar::evaluation_days(fold));
    return *states_.emplace(horizon, std::move(st)).first->second;
}

const SplitPlan& Evaluator::plan(int horizon) { return state(horizon).plan; }
const PipelineData& Evaluator::data(int horizon) { return *state(horizon).data; }

std::shared_ptr<const OccurrenceStage> Evaluator::occurrence(HorizonState& st, ClassifierId id, std::size_t fold) {
    auto& slot = st.occurrence[{id, fold}];
    if (!slot) {
        PipelineConfig cfg = options_.base;
        cfg.horizon = st.plan.horizon;
        slot = std::make_shared<OccurrenceStage>(
            OccurrenceStage::fit(id, cfg, *st.data, st.plan.train_before(fold)));
    }
    return slot;
}

std::shared_ptr<const SizeStage> Evaluator::size_stage(HorizonState& st, SizeMethodId id, std::size_t fold,
                                                       const SmoothingParams& smoothing) {
    PipelineConfig cfg = options_.base;
    cfg.horizon = st.plan.horizon;
    cfg.smoothing = smoothing;
    if (id != SizeMethodId::R2 && id != SizeMethodId::R3) {
        return std::make_shared<SizeStage>(SizeStage::fit(id, cfg, *st.data, st.plan.train_before(fold)));
    }
    auto& slot = st.size[{id, fold}];
    if (!slot) slot = std::make_shared<SizeStage>(SizeStage::fit(id, cfg, *st.data, st.plan.train_before(fold)));
    return slot;
}

SmoothingParams Evaluator::select_smoothing(const ExperimentSpec& spec, HorizonState& st, std::size_t fold) {
    const auto& grid = options_.smoothing_grid;
    if (grid.empty() || !spec.uses_smoothing()) return options_.base.smoothing;

    const bool size_ses = spec.kind == ExperimentKind::Pipeline || spec.baseline == BaselineMethod::Hybrid;
    const std::string family = size_ses ? "SES" : to_string(spec.baseline);
    auto cached = st.smoothing.find({family, fold});
    if (cached != st.smoothing.end()) return cached->second;

    const int h = st.plan.horizon;
    const Date train_before = st.plan.train_before(fold);
    const Date inner_first = train_before - Days{options_.inner_days};
    const auto targets = Calendar::evaluation_days({inner_first, train_before - Days{1}});
    const PipelineData& data = *st.data;
    const auto series = data.series();

    std::vector<SmoothingParams> candidates;
    const bool tune_beta = !size_ses && spec.baseline == BaselineMethod::TSB;
    for (double a : grid) {
        if (tune_beta) {
            for (double b : grid) candidates.push_back({a, b});
        } else {
            candidates.push_back({a, options_.base.smoothing.beta});
        }
    }

    SmoothingParams best = options_.base.smoothing;
    double best_err = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        double err = 0.0;
        if (size_ses) {
            // Size error at validation demand dates, as MASE_I would see it.
            for (std::size_t i = 0; i < series.size(); ++i) {
                const DemandSeries& s = series[i];
                for (Date t : targets) {
                    if (!s.covers(t) || s.at(t) <= 0.0) continue;
                    const auto sizes = data.extractor().history(i).sizes_until(t - Days{h});
                    if (!sizes.empty()) err += std::abs(ses(sizes, c.alpha) - s.at(t));
                }
            }
        } else {
            PipelineConfig cfg = options_.base;
            cfg.horizon = h;
            cfg.smoothing = c;
            const auto points = forecast_baseline(spec.baseline, cfg, data, targets, inner_first - Days{h});
            for (std::size_t i = 0; i < series.size(); ++i) {
                for (const auto& p : points[i]) err += std::abs(p.combined - series[i].at(p.date));
            }
        }
        if (err < best_err) {
            best_err = err;
            best = c;
        }
    }
    st.smoothing[{family, fold}] = best;
    return best;
}

std::vector<std::vector<ForecastPoint>> Evaluator::fold_forecast(const ExperimentSpec& spec, HorizonState& st,
                                                                 std::size_t fold, const SmoothingParams& smoothing) {
    PipelineConfig cfg = options_.base;
    cfg.horizon = st.plan.horizon;
    cfg.smoothing = smoothing;
    const auto& targets = st.fold_targets[fold];
    if (spec.kind == ExperimentKind::Pipeline) {
        cfg.classifier = spec.classifier;
        cfg.size = spec.size;
        const FittedPipeline pipe(cfg, occurrence(st, spec.classifier, fold),
                                  size_stage(st, spec.size, fold, smoothing));
        return pipe.forecast(*st.data, targets);
    }
    switch (spec.baseline) {
        case BaselineMethod::Willemain:
            return FittedPipeline(cfg, occurrence(st, ClassifierId::Markov, fold),
                                  size_stage(st, SizeMethodId::RAND, fold, smoothing))
                .forecast(*st.data, targets);
        case BaselineMethod::Hybrid:
            return FittedPipeline(cfg, occurrence(st, ClassifierId::HybridMLP, fold),
                                  size_stage(st, SizeMethodId::SES, fold, smoothing))
                .forecast(*st.data, targets);
        default:
            return forecast_baseline(spec.baseline, cfg, *st.data, targets, st.plan.train_before(fold));
    }
}

std::vector<std::vector<ForecastPoint>> Evaluator::predictions(const ExperimentSpec& spec, int horizon) {
    HorizonState& st = state(horizon);
    std::vector<std::vector<ForecastPoint>> pooled(series_.size());
    for (std::size_t k = 0; k < st.plan.folds.size(); ++k) {
        const auto smoothing = select_smoothing(spec, st, k);
        auto points = fold_forecast(spec, st, k, smoothing);
        for (std::size_t i = 0; i < pooled.size(); ++i) {
            pooled[i].insert(pooled[i].end(), points[i].begin(), points[i].end());
        }
    }
    return pooled;
}

MetricReport Evaluator::run(const ExperimentSpec& spec, int horizon) {
    MetricReport report;
    try {
        const auto preds = predictions(spec, horizon);
        HorizonState& st = state(horizon);
        report = score_predictions(series_, st.data->groups(), st.plan, preds);
        if (spec.uses_smoothing() && !options_.smoothing_grid.empty()) {
            for (std::size_t k = 0; k < st.plan.folds.size(); ++k) {
                const auto s = select_smoothing(spec, st, k);
                report.alpha_by_fold.push_back(s.alpha);
                if (spec.kind == ExperimentKind::Baseline && spec.baseline == BaselineMethod::TSB) {
                    report.beta_by_fold.push_back(s.beta);
                }
            }
        }
    } catch (const Error& e) {
        report = MetricReport{};
        report.error = e.kind() + ": " + e.what();
    }
    report.id = spec.id;
    report.horizon = horizon;
    return report;
}

namespace {

double safe_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    try {
        return auc_roc(scores, labels);
    } catch (const UndefinedMetric&) {
        return kNotAvailable;
    }
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return kNotAvailable;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

MetricReport score_predictions(std::span<const DemandSeries> series, std::span<const DemandGroup> groups,
                               const SplitPlan& plan, std::span<const std::vector<ForecastPoint>> predictions) {
    if (predictions.size() != series.size() || groups.size() != series.size()) {
        throw InvalidInput("predictions, groups and series differ in count");
    }
    MetricReport r;
    std::vector<double> scores, implied;
    std::vector<std::uint8_t> labels;
    std::array<std::vector<double>, 2> group_scores;
    std::array<std::vector<std::uint8_t>, 2> group_labels;
    bool any_implied = false;
    std::vector<double> mase_one, mase_two;

    for (std::size_t i = 0; i < series.size(); ++i) {
        const DemandSeries& s = series[i];
        const auto& pts = predictions[i];
        std::vector<double> f, y;
        for (const auto& p : pts) {
            const double actual = s.at(p.date);
            const std::uint8_t label = actual > 0.0;
            scores.push_back(p.occurrence_score);
            labels.push_back(label);
            any_implied = any_implied || std::isfinite(p.implied_score);
            implied.push_back(std::isfinite(p.implied_score) ? p.implied_score : 0.0);
            const std::size_t g = groups[i] == DemandGroup::Lumpy ? 0 : 1;
            group_scores[g].push_back(p.occurrence_score);
            group_labels[g].push_back(label);
            r.positives += label;
            r.flagged += p.occurrence_flag;
            f.push_back(p.combined);
            y.push_back(actual);
        }
        r.points += pts.size();
        if (!f.empty()) r.spec_per_series.push_back(spec(f, y));

        try {
            (void)mase_scale(s, plan.test.first);
        } catch (const UndefinedMetric&) {
            ++r.mase_excluded;
            continue;
        }
        try {
            mase_one.push_back(mase_I(s, plan.test.first, pts));
        } catch (const UndefinedMetric&) {
        }
        try {
            mase_two.push_back(mase_II(s, plan.test.first, pts));
        } catch (const UndefinedMetric&) {
        }
    }
    r.auc_roc = safe_auc(scores, labels);
    if (any_implied) r.auc_implied = safe_auc(implied, labels);
    r.auc_lumpy = safe_auc(group_scores[0], group_labels[0]);
    r.auc_intermittent = safe_auc(group_scores[1], group_labels[1]);
    r.mase_I = mean_of(mase_one);
    r.mase_II = mean_of(mase_two);
    r.mase_I_series = mase_one.size();
    r.mase_II_series = mase_two.size();
    if (!r.spec_per_series.empty()) r.spec_median = median_of(r.spec_per_series);
    return r;
}

MetricReport run_experiment(const ExperimentSpec& spec, std::span<const DemandSeries> series, int horizon,
                            const EvaluationOptions& options) {
    Evaluator ev(series, options);
    return ev.run(spec, horizon);
}

EvaluationReport run_matrix(std::span<const ExperimentSpec> specs, std::span<const DemandSeries> series,
                            const EvaluationOptions& options) {
    EvaluationReport report;
    if (specs.empty()) return report;
    report.horizons = options.horizons;
    Evaluator ev(series, options);
    for (const auto& spec : specs) {
        for (int h : options.horizons) report.rows.push_back(ev.run(spec, h));
    }
    for (ClassifierId id : {ClassifierId::C1, ClassifierId::C2}) {
        Table5Row row;
        row.model = to_string(id);
        ExperimentSpec spec;
        spec.id = row.model + "R1-NAIVE";
        spec.classifier = id;
        spec.size = SizeMethodId::Naive;
        for (int h : options.horizons) {
            const MetricReport m = ev.run(spec, h);
            row.auc_by_horizon[h] = {m.auc_lumpy, m.auc_intermittent};
        }
        report.table5.push_back(row);
    }
    return report;
}

namespace {

std::string num(double v, int digits = 6) {
    if (!std::isfinite(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

const MetricReport* find_row(const EvaluationReport& report, const std::string& id, int h) {
    for (const auto& r : report.rows) {
        if (r.id == id && r.horizon == h) return &r;
    }
    return nullptr;
}

std::vector<std::string> row_ids(const EvaluationReport& report) {
    std::vector<std::string> ids;
    for (const auto& r : report.rows) {
        if (std::find(ids.begin(), ids.end(), r.id) == ids.end()) ids.push_back(r.id);
    }
    return ids;
}

std::string join_values(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + num(v[i], 4);
    return s;
}

std::vector<std::vector<std::string>> table4_cells(const EvaluationReport& report) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"model"};
    for (int h : report.horizons) {
        const std::string sfx = "_h" + std::to_string(h);
        for (const char* c : {"auc_roc", "mase_I", "mase_II", "spec_median"}) header.push_back(c + sfx);
    }
    cells.push_back(header);
    for (const auto& id : row_ids(report)) {
        std::vector<std::string> row{id};
        for (int h : report.horizons) {
            const MetricReport* m = find_row(report, id, h);
            if (!m || !m->error.empty()) {
                row.insert(row.end(), 4, "NA");
                continue;
            }
            row.push_back(num(m->auc_roc, 4));
            row.push_back(num(m->mase_I, 4));
            row.push_back(num(m->mase_II, 4));
            row.push_back(num(m->spec_median, 4));
        }
        cells.push_back(row);
    }
    return cells;
}

std::vector<std::vector<std::string>> table5_cells(const EvaluationReport& report) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"model"};
    for (int h : report.horizons) {
        header.push_back("auc_lumpy_h" + std::to_string(h));
        header.push_back("auc_intermittent_h" + std::to_string(h));
    }
    cells.push_back(header);
    for (const auto& row : report.table5) {
        std::vector<std::string> r{row.model};
        for (int h : report.horizons) {
            const auto it = row.auc_by_horizon.find(h);
            r.push_back(it == row.auc_by_horizon.end() ? "NA" : num(it->second.first, 4));
            r.push_back(it == row.auc_by_horizon.end() ? "NA" : num(it->second.second, 4));
        }
        cells.push_back(r);
    }
    return cells;
}

std::string to_csv(const std::vector<std::vector<std::string>>& cells) {
    std::string out;
    for (const auto& row : cells) {
        for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + row[j];
        out += '\n';
    }
    return out;
}

std::string aligned(const std::vector<std::vector<std::string>>& cells) {
    std::vector<std::size_t> width;
    for (const auto& row : cells) {
        width.resize(std::max(width.size(), row.size()), 0);
        for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
    }
    std::string out;
    for (const auto& row : cells) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            const std::string pad(width[j] - row[j].size(), ' ');
            out += j == 0 ? row[j] + pad : "  " + pad + row[j];
        }
        out += '\n';
    }
    return out;
}

}  // namespace

std::string table4_csv(const EvaluationReport& report) { return to_csv(table4_cells(report)); }
std::string table5_csv(const EvaluationReport& report) { return to_csv(table5_cells(report)); }

std::string results_csv_header() {
    return "run,id,horizon,auc_roc,auc_implied,auc_lumpy,auc_intermittent,mase_I,mase_II,spec_median,points,"
           "positives,flagged,mase_I_series,mase_II_series,mase_excluded,alpha_by_fold,beta_by_fold,error\n";
}

std::string results_csv(const EvaluationReport& report, const std::string& run_tag) {
    std::ostringstream out;
    for (const auto& r : report.rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out << run_tag << ',' << r.id << ',' << r.horizon << ',' << num(r.auc_roc) << ',' << num(r.auc_implied)
            << ',' << num(r.auc_lumpy) << ',' << num(r.auc_intermittent) << ',' << num(r.mase_I) << ','
            << num(r.mase_II) << ',' << num(r.spec_median) << ',' << r.points << ',' << r.positives << ','
            << r.flagged << ',' << r.mase_I_series << ',' << r.mase_II_series << ',' << r.mase_excluded << ','
            << join_values(r.alpha_by_fold) << ',' << join_values(r.beta_by_fold) << ',' << err << '\n';
    }
    return out.str();
}

std::string render_text(const EvaluationReport& report) {
    std::string out = "Overall results\n" + aligned(table4_cells(report));
    if (!report.table5.empty()) out += "\nAUC ROC by demand type\n" + aligned(table5_cells(report));
    bool header = false;
    for (const auto& r : report.rows) {
        if (r.error.empty()) continue;
        if (!header) out += "\nFailed runs\n";
        header = true;
        out += r.id + " h=" + std::to_string(r.horizon) + ": " + r.error + '\n';
    }
    return out;
}

}  // namespace twofold
