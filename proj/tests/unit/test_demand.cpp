#include <doctest.h>

#include <random>

#include "twofold/demand.hpp"
#include "twofold/errors.hpp"

using namespace twofold;

namespace {
Date d(int y, unsigned m, unsigned day) { return make_date(y, m, day); }
}  // namespace

TEST_CASE("dates parse strictly and format back") {
    CHECK(format_date(parse_date("2020-02-29")) == "2020-02-29");
    CHECK_THROWS_AS(parse_date("2021-02-29"), InvalidInput);
    CHECK_THROWS_AS(parse_date("2020-1-01"), InvalidInput);
    CHECK_THROWS_AS(parse_date("2020-01-01x"), InvalidInput);
    CHECK(day_of_week(d(2024, 1, 1)) == 0);  // a Monday
    CHECK(day_of_week(d(2024, 1, 7)) == 6);
    CHECK(weekdays_between(d(2024, 1, 5), d(2024, 1, 8)) == 1);  // Fri -> Mon
    CHECK(weekdays_between(d(2024, 1, 8), d(2024, 1, 8)) == 0);
}

TEST_CASE("same-key same-day records are summed") {
    std::vector<DemandRecord> r{{d(2020, 1, 2), {"A", "X"}, 3}, {d(2020, 1, 2), {"A", "X"}, 2}};
    auto s = build_series(r, {d(2020, 1, 1), d(2020, 1, 3)});
    REQUIRE(s.size() == 1);
    CHECK(std::vector<double>(s[0].values().begin(), s[0].values().end()) == std::vector<double>{0, 5, 0});
}

TEST_CASE("keys split into equal-length series; empty input gives nothing") {
    std::vector<DemandRecord> r{{d(2020, 1, 1), {"A", "X"}, 1}, {d(2020, 1, 3), {"A", "X"}, 2}, {d(2020, 1, 5), {"B", "Y"}, 4}};
    DateRange span{d(2020, 1, 1), d(2020, 1, 5)};
    auto s = build_series(r, span);
    REQUIRE(s.size() == 2);
    CHECK(s[0].size() == 5);
    CHECK(s[1].size() == 5);
    CHECK(s[0].key() < s[1].key());
    CHECK(build_series(std::vector<DemandRecord>{}, span).empty());
}

TEST_CASE("zero-filled series for a key with no demand in the window") {
    DemandSeries s({"A", "X"}, d(2020, 1, 1), std::vector<double>(5, 0.0));
    CHECK(nonzero_view(s).empty());
    CHECK(s.size() == 5);
}

TEST_CASE("build_series rejects negative quantities and out-of-span dates") {
    DateRange span{d(2020, 1, 1), d(2020, 1, 3)};
    std::vector<DemandRecord> neg{{d(2020, 1, 1), {"A", "X"}, 1}, {d(2020, 1, 2), {"A", "X"}, -1}};
    CHECK_THROWS_WITH_AS(build_series(neg, span), doctest::Contains("1"), InvalidInput);
    std::vector<DemandRecord> out{{d(2020, 1, 4), {"A", "X"}, 1}};
    CHECK_THROWS_AS(build_series(out, span), InvalidInput);
}

TEST_CASE("nonzero_view keeps order and only positive entries") {
    DemandSeries s({"A", "X"}, d(2020, 1, 1), {0, 3, 0, 6});
    auto v = nonzero_view(s);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == DatedValue{d(2020, 1, 2), 3});
    CHECK(v[1] == DatedValue{d(2020, 1, 4), 6});
    DemandSeries dense({"A", "X"}, d(2020, 1, 1), {1, 2, 3});
    CHECK(nonzero_view(dense).size() == 3);
}

TEST_CASE("property: mass conservation, idempotence, nonzero count") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> day(0, 59), key(0, 3);
    std::uniform_real_distribution<double> qty(0.0, 10.0);
    const DateRange span{d(2021, 3, 1), d(2021, 3, 1) + Days{59}};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<DemandRecord> r;
        double total[4] = {0, 0, 0, 0};
        for (int i = 0; i < 40; ++i) {
            const int k = key(rng);
            const double q = trial % 3 == 0 ? 0.0 : qty(rng);
            r.push_back({span.first + Days{day(rng)}, {"M" + std::to_string(k), "C"}, q});
            total[k] += q;
        }
        auto series = build_series(r, span);
        for (const auto& s : series) {
            const int k = s.key().material[1] - '0';
            double sum = 0.0;
            std::size_t positive = 0;
            for (double v : s.values()) {
                sum += v;
                positive += v > 0.0;
            }
            CHECK(sum == doctest::Approx(total[k]).epsilon(1e-12));
            CHECK(nonzero_view(s).size() == positive);
        }
        auto again = build_series(to_records(series), span);
        for (const auto& s : again) {
            auto it = std::find_if(series.begin(), series.end(), [&](const DemandSeries& o) { return o.key() == s.key(); });
            REQUIRE(it != series.end());
            CHECK(*it == s);
        }
    }
}

TEST_CASE("truncation and calendar helpers") {
    DemandSeries s({"A", "X"}, d(2024, 1, 1), {1, 2, 3, 4, 5, 6, 7});
    auto t = s.truncated(d(2024, 1, 3));
    CHECK(t.size() == 3);
    CHECK(t.end() == d(2024, 1, 3));
    CHECK(Calendar::evaluation_days({d(2024, 1, 1), d(2024, 1, 7)}).size() == 5);
    auto p = make_point(d(2024, 1, 1), 0.9, true, 12);
    CHECK(p.combined == 12);
    auto q = make_point(d(2024, 1, 1), 0.1, false, 12);
    CHECK(q.combined == 0);
}
