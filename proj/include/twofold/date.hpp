#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace twofold {

using Date = std::chrono::sys_days;
using Days = std::chrono::days;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD). Throws InvalidInput.
Date parse_date(std::string_view text);
std::string format_date(Date d);

Date make_date(int year, unsigned month, unsigned day);

/// Monday = 0 ... Sunday = 6.
int day_of_week(Date d);

inline bool is_weekday(Date d) { return day_of_week(d) < 5; }

/// Number of weekdays in the half-open range (from, to]. Zero when to <= from.
long weekdays_between(Date from, Date to);

/// Calendar days from `a` to `b` (b - a).
inline long days_between(Date a, Date b) { return (b - a).count(); }

}  // namespace twofold
