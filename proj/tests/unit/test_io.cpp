#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "twofold/errors.hpp"
#include "twofold/io.hpp"
#include "twofold/occurrence.hpp"
#include "twofold/size.hpp"

using namespace twofold;

TEST_CASE("demand csv parsing") {
    std::istringstream ok("date,material,client,quantity\n2024-01-02,A,X,3\n2024-01-03,A,X,2.5\n2024-01-02,B,Y,0\n");
    const auto good = parse_demand_csv(ok);
    CHECK(good.records.size() == 3);
    CHECK(good.errors.empty());
    CHECK(good.records[1].quantity == 2.5);

    std::istringstream neg("date,material,client,quantity\n2024-01-02,A,X,3\n2024-01-03,A,X,-1\n");
    const auto bad = parse_demand_csv(neg);
    CHECK(bad.records.size() == 1);
    REQUIRE(bad.errors.size() == 1);
    CHECK(bad.errors[0].line == 3);

    std::istringstream junk("date,material,client,quantity\n2024-13-02,A,X,3\n2024-01-02,A,X\n2024-01-02,A,X,abc\n");
    CHECK(parse_demand_csv(junk).errors.size() == 3);

    std::istringstream header_only("date,material,client,quantity\n");
    CHECK(parse_demand_csv(header_only).records.empty());

    std::istringstream wrong("day,material,client,quantity\n");
    CHECK_THROWS_AS(parse_demand_csv(wrong), InvalidInput);
    CHECK_THROWS_AS(load_csv("/nonexistent/demand.csv"), InvalidInput);
}

TEST_CASE("csv round trip is a fixed point") {
    std::vector<DemandRecord> records{{make_date(2024, 1, 2), {"A", "X"}, 0.1},
                                      {make_date(2024, 1, 9), {"A", "X"}, 1.0 / 3.0},
                                      {make_date(2024, 1, 3), {"B", "Y"}, 12}};
    std::ostringstream first;
    write_csv(first, records);
    std::istringstream in(first.str());
    const auto parsed = parse_demand_csv(in);
    REQUIRE(parsed.errors.empty());
    std::ostringstream second;
    write_csv(second, parsed.records);
    CHECK(first.str() == second.str());
    CHECK(parsed.records[1].quantity == 1.0 / 3.0);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(12) == "12");
}

TEST_CASE("config parsing, ranges and environment override") {
    std::istringstream text("# comment\nseed = 9\nhorizons = 14\nboost.rounds = 25\nexperiments = C2R1-SES, TSB\n");
    auto config = Config::parse(text);
    auto run = load_run_config(config);
    CHECK(run.evaluation.base.seed == 9);
    CHECK(run.evaluation.horizons == std::vector<int>{14});
    CHECK(run.evaluation.base.boost.rounds == 25);
    CHECK(run.experiments == std::vector<std::string>{"C2R1-SES", "TSB"});
    CHECK(run.synthetic.seed == 9);

    ::setenv("TWOFOLD_BOOST_ROUNDS", "40", 1);
    config.apply_environment();
    ::unsetenv("TWOFOLD_BOOST_ROUNDS");
    CHECK(load_run_config(config).evaluation.base.boost.rounds == 40);
    CHECK(config_digest(load_run_config(config)) != config_digest(run));

    auto bad = config;
    bad.set("threshold", "1.5");
    CHECK_THROWS_WITH_AS(load_run_config(bad), doctest::Contains("threshold"), ConfigError);
    auto unknown = config;
    unknown.set("boost.depth", "3");
    CHECK_THROWS_WITH_AS(load_run_config(unknown), doctest::Contains("boost.depth"), ConfigError);
    auto horizon = config;
    horizon.set("horizons", "14, x");
    CHECK_THROWS_AS(load_run_config(horizon), ConfigError);
    auto id = config;
    id.set("experiments", "C9R1-SES");
    CHECK_THROWS_AS(load_run_config(id), ConfigError);

    std::istringstream malformed("seed 9\n");
    CHECK_THROWS_AS(Config::parse(malformed), ConfigError);
}

TEST_CASE("model files carry the schema hash") {
    FeatureMatrix x(occurrence_schema());
    std::vector<std::uint8_t> y;
    for (int i = 0; i < 200; ++i) {
        std::array<double, OccurrenceFeatureRow::kWidth> row{static_cast<double>(i % 11), static_cast<double>(i % 7),
                                                             static_cast<double>(i % 5), 7, 9, 0, 0, 0.2};
        x.add_row(row);
        y.push_back(i % 11 == 3);
    }
    BoostParams p;
    p.rounds = 5;
    const auto model = BoostedClassifier::fit(x, y, p);
    std::stringstream file;
    save_model(file, model);
    CHECK(file.str().rfind("twofold-model 1\nkind boosted-classifier\n", 0) == 0);
    std::stringstream copy(file.str());
    CHECK(load_classifier(copy, occurrence_schema()).predict(x) == model.predict(x));
    std::stringstream wrong(file.str());
    CHECK_THROWS_AS(load_classifier(wrong, size_schema()), SchemaMismatch);
    std::stringstream kind(file.str());
    CHECK_THROWS_AS(load_regressor(kind, occurrence_schema()), InvalidInput);
    std::stringstream garbage("not a model\n");
    CHECK_THROWS_AS(load_classifier(garbage, occurrence_schema()), InvalidInput);

    FeatureMatrix sx(size_schema());
    std::vector<double> target;
    for (int i = 0; i < 50; ++i) {
        sx.add_row(std::array<double, SizeFeatureRow::kWidth>{double(i), double(i % 3), 4, 5, 6});
        target.push_back(i % 9 + 1);
    }
    ForestParams fp;
    fp.n_trees = 3;
    const auto forest = TreeEnsembleRegressor::fit(sx, target, fp);
    std::stringstream ffile;
    save_model(ffile, forest);
    CHECK(load_regressor(ffile, size_schema()).predict(sx) == forest.predict(sx));
}

TEST_CASE("forecast and label csv layouts") {
    const std::vector<DemandSeries> series{DemandSeries({"A", "X"}, make_date(2024, 1, 5), {2, 0, 0, 1})};
    std::ostringstream labels;
    write_labels_csv(labels, series);
    CHECK(labels.str() == "date,material,client,occurrence\n2024-01-05,A,X,1\n2024-01-08,A,X,1\n");
    std::vector<std::vector<ForecastPoint>> preds{{make_point(make_date(2024, 1, 8), 0.75, true, 2.5)}};
    std::ostringstream out;
    write_forecast_csv(out, series, preds);
    CHECK(out.str() == "date,key,score,flag,size,combined\n2024-01-08,A/X,0.75,1,2.5,2.5\n");
}
