#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "twofold/date.hpp"

namespace twofold {

struct SeriesKey {
    std::string material;
    std::string client;

    auto operator<=>(const SeriesKey&) const = default;
    bool operator==(const SeriesKey&) const = default;
};

std::string to_string(const SeriesKey& key);

/// One shipment observation, before gridding.
struct DemandRecord {
    Date date;
    SeriesKey key;
    double quantity = 0.0;
};

/// Inclusive calendar-day range.
struct DateRange {
    Date first;
    Date last;

    long length() const { return days_between(first, last) + 1; }
    bool contains(Date d) const { return d >= first && d <= last; }
};

struct DatedValue {
    Date date;
    double value;

    bool operator==(const DatedValue&) const = default;
};

/**
 * Daily-gridded demand history for one (material, client) key.
 *
 * Every calendar day in [start, end] has a value; days without records hold 0.
 * Immutable once constructed.
 */
class DemandSeries {
public:
    DemandSeries(SeriesKey key, Date start, std::vector<double> values);

    const SeriesKey& key() const { return key_; }
    Date start() const { return start_; }
    Date end() const { return start_ + Days{static_cast<long>(values_.size()) - 1}; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

    bool covers(Date d) const { return d >= start_ && d <= end(); }
    std::size_t index_of(Date d) const { return static_cast<std::size_t>(days_between(start_, d)); }
    Date date_at(std::size_t i) const { return start_ + Days{static_cast<long>(i)}; }
    double at(Date d) const { return values_[index_of(d)]; }

    /// Copy holding only the days up to and including `last`.
    DemandSeries truncated(Date last) const;

    bool operator==(const DemandSeries&) const = default;

private:
    SeriesKey key_;
    Date start_;
    std::vector<double> values_;
};

/// Strictly positive entries of `series`, in date order.
std::vector<DatedValue> nonzero_view(const DemandSeries& series);

/// Only the sizes of nonzero_view, in date order.
std::vector<double> nonzero_sizes(const DemandSeries& series);

/**
 * Grids raw records into one series per key over `span`, summing same-key
 * same-day quantities. Output is ordered by key. Throws InvalidInput naming the
 * offending record index on negative quantities or dates outside the span.
 */
std::vector<DemandSeries> build_series(std::span<const DemandRecord> records, DateRange span);

/// Flattens series back into records (one per positive day).
std::vector<DemandRecord> to_records(std::span<const DemandSeries> series);

/// Weekend days stay in the stored grid but never become prediction targets.
struct Calendar {
    static bool is_evaluation_day(Date d) { return is_weekday(d); }
    static std::vector<Date> evaluation_days(DateRange range);
};

/// Per-date output of any forecaster in this library.
struct ForecastPoint {
    Date date;
    /// Probability in [0,1] for classifiers; raw output for the hybrid network.
    double occurrence_score = 0.0;
    bool occurrence_flag = false;
    double size_estimate = 0.0;
    /// Always occurrence_flag ? size_estimate : 0.
    double combined = 0.0;
    /// Occurrence belief implied by a statistical baseline (NaN when not applicable).
    double implied_score = std::numeric_limits<double>::quiet_NaN();
};

ForecastPoint make_point(Date date, double score, bool flag, double size);

}  // namespace twofold
