#include "twofold/date.hpp"

#include <charconv>
#include <cstdio>

#include "twofold/errors.hpp"

namespace twofold {

namespace {

bool parse_fixed(std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Date make_date(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
        throw InvalidInput("invalid calendar date " + std::to_string(year) + "-" +
                           std::to_string(month) + "-" + std::to_string(day));
    }
    return Date{ymd};
}

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw InvalidInput("date is not YYYY-MM-DD: '" + std::string(text) + "'");
    }
    int y = 0, m = 0, d = 0;
    if (!parse_fixed(text.substr(0, 4), y) || !parse_fixed(text.substr(5, 2), m) ||
        !parse_fixed(text.substr(8, 2), d) || m < 1 || d < 1) {
        throw InvalidInput("date is not YYYY-MM-DD: '" + std::string(text) + "'");
    }
    return make_date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string format_date(Date d) {
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

int day_of_week(Date d) {
    return static_cast<int>(std::chrono::weekday{d}.iso_encoding()) - 1;
}

long weekdays_between(Date from, Date to) {
    const long span = days_between(from, to);
    if (span <= 0) return 0;
    const long full_weeks = span / 7;
    long count = full_weeks * 5;
    // Remaining days follow `from` + 7 * full_weeks.
    int dow = day_of_week(from);
    for (long i = 0; i < span % 7; ++i) {
        dow = (dow + 1) % 7;
        if (dow < 5) ++count;
    }
    return count;
}

}  // namespace twofold
