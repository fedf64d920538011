#include <doctest.h>

#include <sstream>

#include "twofold/errors.hpp"
#include "twofold/evaluation.hpp"
#include "twofold/synthetic.hpp"
#include "twofold/taxonomy.hpp"

using namespace twofold;

namespace {

SyntheticData tiny(std::uint64_t seed = 5) {
    SyntheticSpec spec;
    spec.n_series = 24;
    spec.span_days = 600;
    spec.lumpy_fraction = 0.25;
    spec.seed = seed;
    return generate_synthetic(spec);
}

EvaluationOptions fast_options() {
    EvaluationOptions o;
    o.base.boost.rounds = 10;
    o.base.forest.n_trees = 8;
    o.base.mlp.epochs = 10;
    o.test_days = 60;
    o.n_folds = 2;
    o.smoothing_grid = {0.1, 0.3};
    return o;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("rolling split keeps the horizon gap between training and test") {
    const DateRange span{make_date(2020, 1, 1), make_date(2022, 12, 31)};
    for (int h : {14, 56}) {
        const auto plan = SplitPlan::rolling(span, h, 182, 6);
        CHECK(plan.folds.size() == 6);
        CHECK(plan.test.last == span.last);
        CHECK(plan.test.length() == 182);
        for (std::size_t k = 0; k < plan.folds.size(); ++k) {
            CHECK(plan.train_before(k) + Days{h} <= plan.folds[k].first);
            if (k > 0) CHECK(plan.folds[k].first == plan.folds[k - 1].last + Days{1});
        }
    }
    CHECK_THROWS_AS(SplitPlan::rolling({make_date(2020, 1, 1), make_date(2020, 3, 1)}, 56, 182, 6), InvalidInput);
}

TEST_CASE("experiment ids") {
    const auto a = ExperimentSpec::parse("c2r1-ses");
    CHECK(a.kind == ExperimentKind::Pipeline);
    CHECK(a.classifier == ClassifierId::C2);
    CHECK(a.size == SizeMethodId::SES);
    CHECK(ExperimentSpec::parse("C1R3-ML").size == SizeMethodId::R3);
    CHECK(ExperimentSpec::parse("ORACLE-R1-NAIVE").classifier == ClassifierId::Oracle);
    CHECK(ExperimentSpec::parse("TSB").kind == ExperimentKind::Baseline);
    CHECK(ExperimentSpec::parse("NASIRI").baseline == BaselineMethod::Hybrid);
    CHECK_THROWS_AS(ExperimentSpec::parse("C3R1-SES"), ConfigError);
    CHECK_THROWS_AS(ExperimentSpec::parse("C1R2-SES"), ConfigError);
    const auto ids = default_matrix_ids();
    CHECK(ids.size() == 20);
    for (const auto& id : ids) CHECK_NOTHROW(ExperimentSpec::parse(id));
}

TEST_CASE("synthetic generator: ADI, constant sizes, reproducibility") {
    SeriesPlan plan;
    plan.target_adi = 4.0;
    const DateRange span{make_date(2024, 1, 1), make_date(2024, 1, 1) + Days{1399}};  // 1000 weekdays
    const auto s = generate_series({"A", "X"}, span, plan, 7);
    const auto demand_days = nonzero_view(s).size();
    CHECK(demand_days >= 208);  // realized ADI held within +-20% of target
    CHECK(demand_days <= 313);
    // Expected count over many draws: 1000 weekdays / ADI 4.
    double total = 0;
    for (std::uint64_t seed = 100; seed < 160; ++seed) total += static_cast<double>(nonzero_view(generate_series({"A", "X"}, span, plan, seed)).size());
    CHECK(total / 60.0 == doctest::Approx(250.0).epsilon(0.03));
    for (const auto& dv : nonzero_view(s)) CHECK(is_weekday(dv.date));
    for (double x : nonzero_sizes(s)) CHECK(x == nonzero_sizes(s)[0]);
    CHECK(generate_series({"A", "X"}, span, plan, 7) == s);

    plan.target_adi = 0.5;
    CHECK_THROWS_AS(generate_series({"A", "X"}, span, plan, 7), InvalidInput);
    plan.target_adi = 2.0;
    plan.admitted = {true, false, false, false, false};
    CHECK_THROWS_AS(generate_series({"A", "X"}, span, plan, 7), InvalidInput);
}

TEST_CASE("synthetic set: realized ADI within tolerance, admitted weekdays only") {
    SyntheticSpec spec;
    spec.n_series = 80;
    const auto data = generate_synthetic(spec);
    CHECK(data.positive_rate() < 0.06);
    for (std::size_t i = 0; i < data.series.size(); ++i) {
        const auto& t = data.truth[i];
        CHECK(std::abs(t.realized_adi - t.target_adi) <= 0.2 * t.target_adi + 1e-9);
        for (const auto& dv : nonzero_view(data.series[i])) CHECK(t.admitted[static_cast<std::size_t>(day_of_week(dv.date))]);
    }
    const auto again = generate_synthetic(spec);
    CHECK(again.series == data.series);
    spec.adi_min = 0.5;
    CHECK_THROWS_AS(generate_synthetic(spec), InvalidInput);
}

TEST_CASE("matrix shape, table shapes and empty input") {
    const auto data = tiny();
    const auto opts = fast_options();
    std::vector<ExperimentSpec> specs;
    for (const char* id : {"C1R1-NAIVE", "C2R1-SES", "C2R3-ML", "CROSTON", "WILLEMAIN"}) specs.push_back(ExperimentSpec::parse(id));
    const auto report = run_matrix(specs, data.series, opts);
    CHECK(report.rows.size() == specs.size() * 2);
    for (const auto& r : report.rows) CHECK_MESSAGE(r.error.empty(), r.id, ": ", r.error);
    const auto t4 = table4_csv(report);
    CHECK(count_lines(t4) == specs.size() + 1);
    CHECK(t4.rfind("model,auc_roc_h14,mase_I_h14,mase_II_h14,spec_median_h14,auc_roc_h56", 0) == 0);
    const auto t5 = table5_csv(report);
    CHECK(count_lines(t5) == 3);
    std::istringstream lines(t5);
    std::string header;
    std::getline(lines, header);
    CHECK(std::count(header.begin(), header.end(), ',') == 4);
    CHECK(t5.find("\nC1,") != std::string::npos);
    CHECK(t5.find("\nC2,") != std::string::npos);

    const auto empty = run_matrix(std::vector<ExperimentSpec>{}, data.series, opts);
    CHECK(empty.rows.empty());
    CHECK(empty.table5.empty());
}

TEST_CASE("oracle substitution gives MASE_II = MASE_I; croston headline AUC is one half") {
    const auto data = tiny(8);
    auto opts = fast_options();
    opts.horizons = {14};
    Evaluator ev(data.series, opts);
    for (const char* id : {"ORACLE-R1-SES", "ORACLE-R1-NAIVE", "ORACLE-R1-MFV"}) {
        const auto r = ev.run(ExperimentSpec::parse(id), 14);
        CHECK(r.auc_roc == 1.0);
        CHECK(std::abs(r.mase_II - r.mase_I) <= 1e-12);
    }
    const auto cro = ev.run(ExperimentSpec::parse("CROSTON"), 14);
    CHECK(cro.error.empty());
    CHECK(cro.auc_roc >= 0.45);
    CHECK(cro.auc_roc <= 0.55);
}

TEST_CASE("runs are deterministic") {
    const auto data = tiny(9);
    auto opts = fast_options();
    opts.horizons = {14};
    std::vector<ExperimentSpec> specs{ExperimentSpec::parse("C2R1-RAND"), ExperimentSpec::parse("NASIRI"),
                                      ExperimentSpec::parse("TSB")};
    const auto a = run_matrix(specs, data.series, opts);
    const auto b = run_matrix(specs, data.series, opts);
    CHECK(results_csv(a, "x") == results_csv(b, "x"));
    CHECK(render_text(a) == render_text(b));
}
