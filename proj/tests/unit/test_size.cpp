#include <doctest.h>

#include <random>

#include "twofold/errors.hpp"
#include "twofold/history.hpp"
#include "twofold/size.hpp"

using namespace twofold;

namespace {
const Date kStart = make_date(2024, 1, 1);

SizeFeatureRow row_for(const std::vector<double>& v, Date target, int h = 14, double alpha = 0.5) {
    const DemandSeries s({"A", "X"}, kStart, v);
    const DemandHistory hist(s);
    auto r = size_row(s, hist, 0, target, h, alpha);
    REQUIRE(r.has_value());
    return *r;
}
}  // namespace

TEST_CASE("size features from a two-demand history") {
    std::vector<double> v(40, 0.0);
    v[2] = 4;
    v[9] = 8;
    const auto r = row_for(v, kStart + Days{30});
    CHECK(r.last_demand_size == 8);
    CHECK(r.mean_last3 == 6);
    CHECK(r.median_past == 6);
    CHECK(r.ses_past == 6);
    CHECK(r.mfv_past == 4);
}

TEST_CASE("single demand gives every feature that size") {
    std::vector<double> v(40, 0.0);
    v[3] = 5;
    const auto r = row_for(v, kStart + Days{30});
    for (double x : r.values()) CHECK(x == 5);
}

TEST_CASE("zero days between demands do not change features") {
    std::vector<double> a(60, 0.0), b(60, 0.0);
    a[1] = 3, a[2] = 7, a[4] = 2;
    b[1] = 3, b[10] = 7, b[20] = 2;
    CHECK(row_for(a, kStart + Days{45}).values() == row_for(b, kStart + Days{45}).values());
}

TEST_CASE("targets without prior demand are skipped") {
    const std::vector<DemandSeries> set{DemandSeries({"A", "X"}, kStart, std::vector<double>(60, 0.0))};
    ExtractionReport report;
    const std::vector<Date> targets{kStart + Days{30}, kStart + Days{31}};
    CHECK(extract_size_features(set, targets, 14, 0.1, false, &report).empty());
    CHECK(report.skipped == 2);
}

TEST_CASE("R1 estimators delegate and reproduce") {
    const std::vector<double> h{10, 20};
    CHECK(estimate_size(SizeMethod::SES, h, 0.5) == 15);
    CHECK(estimate_size(SizeMethod::Naive, h) == 20);
    CHECK(estimate_size(SizeMethod::MA3, h) == 15);
    CHECK(estimate_size(SizeMethod::MFV, h) == 10);
    CHECK(estimate_size(SizeMethod::RAND, h, 0.1, 77) == estimate_size(SizeMethod::RAND, h, 0.1, 77));
    CHECK_THROWS_AS(estimate_size(SizeMethod::SES, std::vector<double>{}), NoForecast);
}

TEST_CASE("property: R1 estimates scale with sizes and are positive") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> size(0.5, 100.0), scale(0.1, 20.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> h(static_cast<std::size_t>(trial % 9 + 1));
        for (auto& x : h) x = size(rng);
        const double c = scale(rng);
        std::vector<double> scaled = h;
        for (auto& x : scaled) x *= c;
        for (auto m : {SizeMethod::Naive, SizeMethod::MA3, SizeMethod::MFV, SizeMethod::SES}) {
            const double base = estimate_size(m, h, 0.3);
            CHECK(base > 0);
            CHECK(estimate_size(m, scaled, 0.3) == doctest::Approx(c * base).epsilon(1e-12));
        }
    }
}

TEST_CASE("ensemble regressor replays its training rows and stays positive") {
    std::vector<DemandSeries> set;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> size(1.0, 30.0);
    std::bernoulli_distribution demand(0.2);
    for (int s = 0; s < 6; ++s) {
        std::vector<double> v(200, 0.0);
        for (auto& x : v) x = demand(rng) ? std::round(size(rng)) : 0.0;
        set.emplace_back(SeriesKey{"M" + std::to_string(s), "C"}, kStart, v);
    }
    std::vector<Date> targets;
    for (Date d = kStart + Days{30}; d < kStart + Days{200}; d += Days{1}) targets.push_back(d);
    const auto rows = extract_size_features(set, targets, 14, 0.1, true);
    REQUIRE(!rows.empty());
    std::vector<DemandGroup> groups(set.size(), DemandGroup::Intermittent);
    ForestParams p;
    p.n_trees = 1;
    p.max_depth = 0;
    p.bootstrap = false;
    const auto model = fit_ensemble(rows, groups, ModelScope::Global, p);
    // Identical feature vectors may carry different labels; those replay to their mean.
    for (const auto& r : rows) {
        double sum = 0, n = 0;
        for (const auto& o : rows)
            if (o.values() == r.values()) sum += o.target_size, ++n;
        CHECK(model.predict(r, DemandGroup::Intermittent) == doctest::Approx(sum / n).epsilon(1e-12));
    }
    p.n_trees = 20;
    p.bootstrap = true;
    const auto forest = fit_ensemble(rows, groups, ModelScope::Global, p);
    for (const auto& r : extract_size_features(set, targets, 14, 0.1)) CHECK(forest.predict(r, DemandGroup::Intermittent) > 0);
    CHECK_THROWS_AS(fit_ensemble(std::vector<SizeFeatureRow>{}, groups, ModelScope::Global, p), InvalidInput);
}
