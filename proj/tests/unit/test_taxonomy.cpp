#include <doctest.h>

#include <algorithm>
#include <random>

#include "twofold/errors.hpp"
#include "twofold/taxonomy.hpp"

using namespace twofold;

namespace {
DemandSeries series(std::vector<double> v, Date start = make_date(2024, 1, 1)) {
    return DemandSeries({"A", "X"}, start, std::move(v));
}
}  // namespace

TEST_CASE("adi counts total periods over demand periods") {
    CHECK(adi(series(std::vector<double>(10, 1.0))) == 1.0);
    std::vector<double> v(12, 0.0);
    v[1] = v[5] = v[9] = 2.0;
    CHECK(adi(series(v)) == 4.0);
    CHECK_THROWS_AS(adi(series(std::vector<double>(5, 0.0))), UndefinedPattern);
}

TEST_CASE("one demand day in a weekday year gives the observed maximum 261") {
    // 2024-01-01 is a Monday; 365 calendar days of 2024 hold 261 weekdays.
    std::vector<double> v(365, 0.0);
    v[10] = 3.0;
    CHECK(adi(series(v), PeriodGrid::Weekdays) == 261.0);
    CHECK(adi(series(v), PeriodGrid::CalendarDays) == 365.0);
}

TEST_CASE("cv2 over nonzero sizes with population std") {
    const std::vector<double> flat{5, 5, 5}, two{2, 4}, one{7};
    CHECK(cv2(flat) == 0.0);
    CHECK(cv2(two) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(cv2(one) == 0.0);
    CHECK(cv2(two, StdKind::Sample) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(cv2(series({0, 2, 0, 4})) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK_THROWS_AS(cv2(std::vector<double>{}), UndefinedPattern);
    CHECK_THROWS_AS(cv2(series({0, 0})), UndefinedPattern);
}

TEST_CASE("quadrants from the median table profiles") {
    auto lumpy = classify_profile(37.29, 1.10);
    CHECK(lumpy.quadrant == Quadrant::Lumpy);
    CHECK(lumpy.schema2 == Schema2::C_plus_R);
    auto inter = classify_profile(25.26, 0.05);
    CHECK(inter.quadrant == Quadrant::Intermittent);
    CHECK(inter.schema2 == Schema2::C_plus_R);
    auto smooth = classify_profile(1.0, 0.0);
    CHECK(smooth.quadrant == Quadrant::Smooth);
    CHECK(smooth.schema2 == Schema2::R);
    CHECK(classify_profile(1.0, 0.8).quadrant == Quadrant::Erratic);
}

TEST_CASE("ties on a cutoff go to the irregular or variable side") {
    CHECK(classify_profile(1.32, 0.1).quadrant == Quadrant::Intermittent);
    CHECK(classify_profile(1.0, 0.49).quadrant == Quadrant::Erratic);
    CHECK(classify_profile(1.32, 0.49).quadrant == Quadrant::Lumpy);
}

TEST_CASE("demand groups split on the cv2 cutoff") {
    CHECK(demand_group(series({0, 1, 0, 9})) == DemandGroup::Lumpy);
    CHECK(demand_group(series({0, 5, 0, 5})) == DemandGroup::Intermittent);
    CHECK(demand_group(series({0, 0, 0})) == DemandGroup::Intermittent);
}

TEST_CASE("property: scale invariance, position invariance, schema agreement") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> size(0.5, 40.0), scale(0.01, 100.0);
    std::bernoulli_distribution demand(0.2);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> v(60, 0.0);
        for (auto& x : v) x = demand(rng) ? size(rng) : 0.0;
        v[static_cast<std::size_t>(trial % 60)] = size(rng);
        const auto base = classify(series(v));

        const double c = scale(rng);
        std::vector<double> scaled = v;
        for (auto& x : scaled) x *= c;
        const auto s = classify(series(scaled));
        CHECK(s.adi == base.adi);
        CHECK(s.cv2 == doctest::Approx(base.cv2).epsilon(1e-9));
        CHECK(s.schema2 == base.schema2);
        // Labels can only flip when cv2 sits within rounding of the cutoff.
        if (std::abs(base.cv2 - 0.49) > 1e-9) CHECK(s.quadrant == base.quadrant);

        std::vector<double> moved = v;
        std::shuffle(moved.begin(), moved.end(), rng);
        CHECK(adi(series(moved)) == base.adi);

        const bool irregular = base.quadrant == Quadrant::Intermittent || base.quadrant == Quadrant::Lumpy;
        CHECK(irregular == (base.schema2 == Schema2::C_plus_R));
    }
}
