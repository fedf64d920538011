#include <doctest.h>

#include <cmath>
#include <random>

#include "twofold/errors.hpp"
#include "twofold/metrics.hpp"
#include "twofold/occurrence.hpp"
#include "twofold/synthetic.hpp"

using namespace twofold;

namespace {

const Date kStart = make_date(2024, 1, 1);  // Monday

// Demand on every Monday with the given sizes cycling.
DemandSeries mondays(std::size_t days, std::vector<double> sizes = {5.0}, std::string key = "A") {
    std::vector<double> v(days, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < days; i += 7) v[i] = sizes[k++ % sizes.size()];
    return DemandSeries({key, "X"}, kStart, std::move(v));
}

std::vector<Date> weekdays(Date from, Date to) {
    std::vector<Date> out;
    for (Date d = from; d <= to; d += Days{1})
        if (is_weekday(d)) out.push_back(d);
    return out;
}

// Weekdays in (last demand on or before origin, target], computed by walking the calendar.
double since_reference(const DemandSeries& s, Date target, int horizon) {
    const Date origin = target - Days{horizon};
    Date last = s.start() - Days{1};
    for (Date d = origin; d >= s.start(); d -= Days{1}) {
        if (s.at(d) > 0) {
            last = d;
            break;
        }
    }
    double count = 0;
    for (Date d = last + Days{1}; d <= target; d += Days{1}) count += is_weekday(d);
    return count;
}

}  // namespace

TEST_CASE("planted Monday demand is visible in the features") {
    const std::vector<DemandSeries> set{mondays(120)};
    const Date target = kStart + Days{98};  // a Monday
    auto rows = extract_occurrence_features(set, std::vector<Date>{target}, 14);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].dow_target == 0);
    CHECK(rows[0].dow_last_demand == 0);
    CHECK(rows[0].label);
    CHECK(rows[0].label_known);
    CHECK(rows[0].target_dow_share == 1.0);
    CHECK(rows[0].size_skew == 0.0);
    CHECK(rows[0].mean_interdemand_interval == 7.0);
}

TEST_CASE("weekend targets and short histories are skipped and counted") {
    const std::vector<DemandSeries> set{mondays(60)};
    ExtractionReport report;
    const std::vector<Date> targets{kStart + Days{5}, kStart + Days{7}, kStart + Days{30}};
    auto rows = extract_occurrence_features(set, targets, 14, &report);
    CHECK(rows.size() == 1);
    CHECK(report.non_weekday == 1);
    CHECK(report.skipped == 1);
}

TEST_CASE("horizon shift moves weekdays_since_last_demand to the last visible demand") {
    std::mt19937_64 rng(12);
    std::bernoulli_distribution demand(0.08);
    std::vector<double> v(400, 0.0);
    for (auto& x : v) x = demand(rng) ? 3.0 : 0.0;
    const std::vector<DemandSeries> set{DemandSeries({"A", "X"}, kStart, v)};
    const auto targets = weekdays(kStart + Days{120}, kStart + Days{399});
    for (int h : {14, 56}) {
        for (const auto& r : extract_occurrence_features(set, targets, h)) {
            CHECK(r.weekdays_since_last_demand == since_reference(set[0], r.target, h));
        }
    }
}

TEST_CASE("leakage audit: truncating at the origin reproduces every row") {
    SyntheticSpec spec;
    spec.n_series = 12;
    spec.span_days = 500;
    const auto data = generate_synthetic(spec);
    const auto targets = weekdays(data.span.first + Days{100}, data.span.last);
    for (int h : {14, 56}) {
        const auto rows = extract_occurrence_features(data.series, targets, h);
        std::size_t checked = 0;
        for (std::size_t i = 0; i < rows.size(); i += 37) {
            const auto& r = rows[i];
            const Date origin = r.target - Days{h};
            std::vector<DemandSeries> cut;
            for (const auto& s : data.series) cut.push_back(s.truncated(origin));
            const OccurrenceFeatureExtractor ex(cut);
            const auto again = ex.row(r.series, r.target, h);
            REQUIRE(again.has_value());
            CHECK(again->values() == r.values());
            ++checked;
        }
        CHECK(checked > 50);
    }
}

TEST_CASE("boosted classifier learns a planted weekday and replays deterministically") {
    std::vector<DemandSeries> set;
    std::mt19937_64 rng(5);
    std::bernoulli_distribution keep(0.8);
    for (int s = 0; s < 20; ++s) {
        std::vector<double> v(300, 0.0);
        for (std::size_t i = 0; i < v.size(); i += 7) v[i] = keep(rng) ? 4.0 + s % 3 : 0.0;
        set.emplace_back(SeriesKey{"M" + std::to_string(s), "C"}, kStart, v);
    }
    const auto targets = weekdays(kStart + Days{60}, kStart + Days{299});
    const auto rows = extract_occurrence_features(set, targets, 14);
    std::vector<DemandGroup> groups(set.size(), DemandGroup::Intermittent);
    BoostParams p;
    p.rounds = 30;
    const auto model = fit_boosted(rows, groups, ModelScope::Global, p);
    const auto scores = model.predict(rows, groups);
    double monday = 0, friday = 0, nm = 0, nf = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].dow_target == 0) monday += scores[i], ++nm;
        if (rows[i].dow_target == 4) friday += scores[i], ++nf;
    }
    CHECK(monday / nm > friday / nf);
    CHECK(model.predict(rows, groups) == scores);
    CHECK(predict_occurrence(model.global(), std::span<const OccurrenceFeatureRow>{}).empty());
    CHECK(&model.model(DemandGroup::Lumpy) == &model.global());
    CHECK_THROWS_WITH_AS(fit_boosted(rows, groups, ModelScope::PerDemandType, p), doctest::Contains("lumpy"),
                         InvalidInput);
}

TEST_CASE("class imbalance below 6% still fits") {
    SyntheticSpec spec;
    spec.n_series = 30;
    spec.span_days = 400;
    const auto data = generate_synthetic(spec);
    CHECK(data.positive_rate() < 0.06);
    const auto rows = extract_occurrence_features(data.series, weekdays(data.span.first + Days{60}, data.span.last), 14);
    std::vector<DemandGroup> groups(data.series.size(), DemandGroup::Intermittent);
    BoostParams p;
    p.rounds = 10;
    CHECK_NOTHROW(fit_boosted(rows, groups, ModelScope::Global, p));
}

TEST_CASE("markov chain estimates and matrix-power oracle") {
    std::vector<double> alt(200);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0 ? 1.0 : 0.0;
    const auto m = MarkovOccurrence::fit(alt);
    CHECK(m.p01 > 0.98);
    CHECK(m.p11 < 0.02);
    CHECK(MarkovOccurrence::fit(std::vector<double>(100, 2.0)).p11 > 0.98);
    CHECK_THROWS_AS(MarkovOccurrence::fit(std::vector<double>{1.0}), InvalidInput);

    MarkovOccurrence c{0.15, 0.4};
    // Explicit 2x2 matrix powers, rows = current state (0 none, 1 demand).
    double a[2][2] = {{1 - c.p01, c.p01}, {1 - c.p11, c.p11}};
    double pw[2][2] = {{1, 0}, {0, 1}};
    for (int step = 1; step <= 60; ++step) {
        double next[2][2];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) next[i][j] = pw[i][0] * a[0][j] + pw[i][1] * a[1][j];
        std::copy(&next[0][0], &next[0][0] + 4, &pw[0][0]);
        CHECK(c.probability(false, step) == doctest::Approx(pw[0][1]).epsilon(1e-12));
        CHECK(c.probability(true, step) == doctest::Approx(pw[1][1]).epsilon(1e-12));
    }
    CHECK(c.probability(false, 60) == doctest::Approx(c.stationary()).epsilon(1e-12));
}

TEST_CASE("hybrid network: seeded weights, positive output flags demand") {
    std::vector<double> v(400, 0.0);
    for (std::size_t i = 0; i < v.size(); i += 3) v[i] = 6.0 + static_cast<double>(i % 4);
    const DemandSeries s({"A", "X"}, kStart, v);
    MlpParams p;
    p.epochs = 50;
    p.seed = 3;
    const auto a = HybridMLP::fit(s, kStart + Days{300}, 14, p);
    const auto b = HybridMLP::fit(s, kStart + Days{300}, 14, p);
    CHECK(std::vector<double>(a.weights().begin(), a.weights().end()) ==
          std::vector<double>(b.weights().begin(), b.weights().end()));
    const DemandHistory hist(s);
    for (Date t = kStart + Days{310}; t < kStart + Days{390}; t += Days{1}) {
        const auto out = a.predict(hybrid_inputs(s, hist, t, 14));
        CHECK(out.flag == (out.raw > 0.0));
    }
    const DemandSeries sparse({"A", "X"}, kStart, std::vector<double>(100, 0.0));
    CHECK_THROWS_AS(HybridMLP::fit(sparse, kStart + Days{90}, 14, p), NoForecast);
}

TEST_CASE("per-series constant scores are uninformative on a label-balanced set") {
    // Every series shares one occurrence rate, so a constant score per series carries no signal.
    std::mt19937_64 rng(14);
    std::bernoulli_distribution demand(0.05);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    for (int s = 0; s < 400; ++s) {
        const double constant = score(rng);
        for (int t = 0; t < 200; ++t) {
            scores.push_back(constant);
            labels.push_back(demand(rng));
        }
    }
    const double auc = auc_roc(scores, labels);
    CHECK(auc >= 0.45);
    CHECK(auc <= 0.55);
}
