#pragma once

#include <span>
#include <string>

#include "twofold/demand.hpp"

namespace twofold {

enum class Quadrant { Smooth, Erratic, Intermittent, Lumpy };
enum class Schema2 { R, C_plus_R };

std::string to_string(Quadrant q);
std::string to_string(Schema2 s);

/// Which days count as periods in the ADI numerator.
enum class PeriodGrid { CalendarDays, Weekdays };

enum class StdKind { Population, Sample };

struct PatternProfile {
    double adi = 0.0;
    double cv2 = 0.0;
    Quadrant quadrant = Quadrant::Smooth;
    Schema2 schema2 = Schema2::R;
};

struct TaxonomyOptions {
    double adi_cutoff = 1.32;
    double cv2_cutoff = 0.49;
    PeriodGrid grid = PeriodGrid::CalendarDays;
    StdKind std_kind = StdKind::Population;
};

/// Total periods over periods with positive demand. Throws UndefinedPattern on an
/// all-zero series.
double adi(const DemandSeries& series, PeriodGrid grid = PeriodGrid::CalendarDays);

/// Squared coefficient of variation of the nonzero sizes.
double cv2(std::span<const double> nonzero, StdKind kind = StdKind::Population);
double cv2(const DemandSeries& series, StdKind kind = StdKind::Population);

/// Applies the cutoffs; ties go to the irregular / variable side.
PatternProfile classify_profile(double adi_value, double cv2_value, const TaxonomyOptions& opts = {});
PatternProfile classify(const DemandSeries& series, const TaxonomyOptions& opts = {});

/// Coarse grouping used by the per-demand-type models.
enum class DemandGroup { Lumpy, Intermittent };
std::string to_string(DemandGroup g);

/// Lumpy when cv2 >= cutoff; series without demand fall in Intermittent.
DemandGroup demand_group(const DemandSeries& series, const TaxonomyOptions& opts = {});

}  // namespace twofold
