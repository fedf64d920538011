#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "twofold/demand.hpp"

namespace twofold {

/**
 * Synthetic demand with planted structure. Each series has a set of admitted
 * weekdays and either a regular cadence or geometric gaps over those days, so
 * day-of-week and interval features carry signal. ADI targets are on the
 * weekday grid; sizes are lognormal with a target CV2, rounded to integers.
 */
struct SyntheticSpec {
    std::size_t n_series = 516;
    Date start = make_date(2018, 1, 1);
    int span_days = 1095;
    double lumpy_fraction = 0.095;

    /// Lognormal ADI targets; lumpy series are sparser than the rest.
    double adi_median = 45.0;
    double adi_sigma = 0.9;
    double lumpy_adi_median = 66.0;
    double lumpy_adi_sigma = 0.9;
    double adi_min = 1.4;
    double adi_max = 261.0;

    double lumpy_cv2_median = 1.1;
    double lumpy_cv2_sigma = 0.6;
    double lumpy_cv2_min = 0.5;
    double lumpy_cv2_max = 4.8;
    double steady_cv2_median = 0.05;
    double steady_cv2_sigma = 0.8;
    double steady_cv2_max = 0.45;

    double size_median_min = 2.0;
    double size_median_max = 60.0;

    /// Share of series on a fixed cadence; the rest draw geometric gaps.
    double regularity = 0.5;
    double adi_tolerance = 0.2;
    std::uint64_t seed = 42;

    /// Throws InvalidInput on infeasible targets.
    void validate() const;
};

/// Planted parameters of one series, plus what was realized.
struct SeriesTruth {
    double target_adi = 0.0;
    double target_cv2 = 0.0;
    std::array<bool, 5> admitted{};  ///< Monday .. Friday
    bool regular = false;
    bool lumpy = false;
    double size_median = 0.0;
    double realized_adi = 0.0;
};

struct SyntheticData {
    DateRange span;
    std::vector<DemandSeries> series;
    std::vector<SeriesTruth> truth;

    /// Share of (series, weekday) cells with demand.
    double positive_rate() const;
};

/// Parameters for a single generated series.
struct SeriesPlan {
    double target_adi = 4.0;
    double target_cv2 = 0.0;
    std::array<bool, 5> admitted{true, true, true, true, true};
    bool regular = false;
    double size_median = 10.0;
    double adi_tolerance = 0.2;
};

/**
 * One series over `span`. Throws InvalidInput when the target ADI is below 1
 * or below 5 / (admitted weekdays), which the admission set cannot reach.
 */
DemandSeries generate_series(SeriesKey key, DateRange span, const SeriesPlan& plan, std::uint64_t seed);

/// Reproducible under `spec.seed`; per-series seeds are derived from it.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace twofold
