#include "twofold/taxonomy.hpp"

#include <cmath>

#include "twofold/errors.hpp"

namespace twofold {

std::string to_string(Quadrant q) {
    switch (q) {
        case Quadrant::Smooth: return "Smooth";
        case Quadrant::Erratic: return "Erratic";
        case Quadrant::Intermittent: return "Intermittent";
        case Quadrant::Lumpy: return "Lumpy";
    }
    return "?";
}

std::string to_string(Schema2 s) { return s == Schema2::R ? "R" : "C+R"; }

std::string to_string(DemandGroup g) { return g == DemandGroup::Lumpy ? "lumpy" : "intermittent"; }

double adi(const DemandSeries& series, PeriodGrid grid) {
    long periods = 0;
    long buckets = 0;
    const auto v = series.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (grid == PeriodGrid::Weekdays && !is_weekday(series.date_at(i))) continue;
        ++periods;
        if (v[i] > 0.0) ++buckets;
    }
    if (buckets == 0) throw UndefinedPattern("ADI undefined: series " + to_string(series.key()) + " has no demand");
    return static_cast<double>(periods) / static_cast<double>(buckets);
}

double cv2(std::span<const double> nonzero, StdKind kind) {
    if (nonzero.empty()) throw UndefinedPattern("CV2 undefined without demand");
    const double n = static_cast<double>(nonzero.size());
    double mean = 0.0;
    for (double x : nonzero) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : nonzero) ss += (x - mean) * (x - mean);
    if (ss == 0.0) return 0.0;
    const double var = kind == StdKind::Population ? ss / n : (n > 1 ? ss / (n - 1) : 0.0);
    return var / (mean * mean);
}

double cv2(const DemandSeries& series, StdKind kind) {
    const auto sizes = nonzero_sizes(series);
    if (sizes.empty()) throw UndefinedPattern("CV2 undefined: series " + to_string(series.key()) + " has no demand");
    return cv2(sizes, kind);
}

PatternProfile classify_profile(double adi_value, double cv2_value, const TaxonomyOptions& opts) {
    PatternProfile p;
    p.adi = adi_value;
    p.cv2 = cv2_value;
    const bool irregular = adi_value >= opts.adi_cutoff;
    const bool variable = cv2_value >= opts.cv2_cutoff;
    if (irregular) {
        p.quadrant = variable ? Quadrant::Lumpy : Quadrant::Intermittent;
    } else {
        p.quadrant = variable ? Quadrant::Erratic : Quadrant::Smooth;
    }
    p.schema2 = irregular ? Schema2::C_plus_R : Schema2::R;
    return p;
}

PatternProfile classify(const DemandSeries& series, const TaxonomyOptions& opts) {
    return classify_profile(adi(series, opts.grid), cv2(series, opts.std_kind), opts);
}

DemandGroup demand_group(const DemandSeries& series, const TaxonomyOptions& opts) {
    const auto sizes = nonzero_sizes(series);
    if (sizes.empty()) return DemandGroup::Intermittent;
    return cv2(sizes, opts.std_kind) >= opts.cv2_cutoff ? DemandGroup::Lumpy : DemandGroup::Intermittent;
}

}  // namespace twofold
