#include "twofold/size.hpp"

#include <algorithm>

#include "twofold/errors.hpp"
#include "twofold/forecasters.hpp"

namespace twofold {

FeatureSchema size_schema() {
    return {{"last_demand_size", FeatureKind::Numeric},
            {"mean_last3", FeatureKind::Numeric},
            {"median_past", FeatureKind::Numeric},
            {"mfv_past", FeatureKind::Numeric},
            {"ses_past", FeatureKind::Numeric}};
}

std::optional<SizeFeatureRow> size_row(const DemandSeries& series, const DemandHistory& history, std::size_t index,
                                       Date target, int horizon, double alpha) {
    const Date origin = target - Days{horizon};
    if (origin < series.start()) return std::nullopt;
    const auto sizes = history.sizes_until(origin);
    if (sizes.empty()) return std::nullopt;
    SizeFeatureRow r;
    r.series = index;
    r.target = target;
    r.horizon = horizon;
    r.last_demand_size = naive_last(sizes);
    r.mean_last3 = ma3(sizes);
    r.median_past = median(sizes);
    r.mfv_past = mfv(sizes);
    r.ses_past = ses(sizes, alpha);
    r.label_known = series.covers(target);
    r.target_size = r.label_known ? series.at(target) : 0.0;
    return r;
}

std::vector<SizeFeatureRow> extract_size_features(std::span<const DemandSeries> series, std::span<const Date> targets,
                                                  int horizon, double alpha, bool demand_only,
                                                  ExtractionReport* report) {
    std::vector<SizeFeatureRow> rows;
    ExtractionReport local;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const DemandHistory history(series[i]);
        for (Date t : targets) {
            if (!Calendar::is_evaluation_day(t)) {
                ++local.non_weekday;
                continue;
            }
            if (demand_only && !(series[i].covers(t) && series[i].at(t) > 0.0)) continue;
            if (auto r = size_row(series[i], history, i, t, horizon, alpha)) {
                rows.push_back(*r);
            } else {
                ++local.skipped;
            }
        }
    }
    local.rows = rows.size();
    if (report) *report = local;
    return rows;
}

FeatureMatrix to_matrix(std::span<const SizeFeatureRow> rows) {
    FeatureMatrix m(size_schema());
    for (const auto& r : rows) m.add_row(r.values());
    return m;
}

namespace {

std::size_t group_index(DemandGroup g) { return g == DemandGroup::Lumpy ? 0 : 1; }

}  // namespace

ScopedRegressor fit_ensemble(std::span<const SizeFeatureRow> rows, std::span<const DemandGroup> groups,
                             ModelScope scope, const ForestParams& params) {
    ScopedRegressor reg;
    reg.scope_ = scope;
    auto fit_subset = [&](std::optional<DemandGroup> only) -> std::optional<TreeEnsembleRegressor> {
        FeatureMatrix x(size_schema());
        std::vector<double> y;
        for (const auto& r : rows) {
            if (!r.label_known || r.target_size <= 0.0) continue;
            if (only && groups[r.series] != *only) continue;
            x.add_row(r.values());
            y.push_back(r.target_size);
        }
        if (y.empty()) return std::nullopt;
        return TreeEnsembleRegressor::fit(x, y, params);
    };
    double floor = 0.0;
    for (const auto& r : rows) {
        if (r.label_known && r.target_size > 0.0 && (floor == 0.0 || r.target_size < floor)) floor = r.target_size;
    }
    if (floor == 0.0) throw InvalidInput("cannot fit size regressor: no rows with positive target");
    reg.floor_ = floor;
    if (scope == ModelScope::Global) {
        reg.global_ = fit_subset(std::nullopt);
    } else {
        for (auto g : {DemandGroup::Lumpy, DemandGroup::Intermittent}) reg.by_group_[group_index(g)] = fit_subset(g);
        // A group without training demand borrows the pooled model.
        if (!reg.by_group_[0] || !reg.by_group_[1]) reg.global_ = fit_subset(std::nullopt);
    }
    return reg;
}

double ScopedRegressor::predict(const SizeFeatureRow& row, DemandGroup group) const {
    const auto v = row.values();
    const TreeEnsembleRegressor* model = nullptr;
    if (scope_ == ModelScope::PerDemandType && by_group_[group_index(group)]) {
        model = &*by_group_[group_index(group)];
    } else if (global_) {
        model = &*global_;
    }
    if (!model) throw NotFitted("size regressor not fitted");
    return std::max(model->predict_row(v), floor_);
}

std::string to_string(SizeMethod m) {
    switch (m) {
        case SizeMethod::Naive: return "NAIVE";
        case SizeMethod::MA3: return "MA3";
        case SizeMethod::MFV: return "MFV";
        case SizeMethod::SES: return "SES";
        case SizeMethod::RAND: return "RAND";
    }
    return "?";
}

double estimate_size(SizeMethod method, std::span<const double> history, double alpha, std::uint64_t seed) {
    switch (method) {
        case SizeMethod::Naive: return naive_last(history);
        case SizeMethod::MA3: return ma3(history);
        case SizeMethod::MFV: return mfv(history);
        case SizeMethod::SES: return ses(history, alpha);
        case SizeMethod::RAND: return rand_jitter(history, seed);
    }
    throw InvalidInput("unknown size method");
}

}  // namespace twofold
