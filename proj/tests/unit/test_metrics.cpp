#include <doctest.h>

#include <cmath>
#include <random>

#include "twofold/errors.hpp"
#include "twofold/forecasters.hpp"
#include "twofold/metrics.hpp"

using namespace twofold;

namespace {

using Vec = std::vector<double>;
const Date kStart = make_date(2024, 1, 1);

// The double sum evaluated term by term with freshly summed prefixes.
double spec_brute_force(const Vec& f, const Vec& y, double a1, double a2) {
    const std::size_t n = f.size();
    double total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        double F_t = 0.0, Y_t = 0.0;
        for (std::size_t k = 0; k <= t; ++k) F_t += f[k], Y_t += y[k];
        for (std::size_t i = 0; i <= t; ++i) {
            double Y_i = 0.0, F_i = 0.0;
            for (std::size_t j = 0; j <= i; ++j) Y_i += y[j], F_i += f[j];
            const double opp = a1 * std::min(y[i], Y_i - F_t);
            const double stock = a2 * std::min(f[i], F_i - Y_t);
            total += std::max({0.0, opp, stock}) * static_cast<double>(t - i + 1);
        }
    }
    return total / static_cast<double>(n);
}

Vec sparse(std::mt19937_64& rng, std::size_t n, double rate) {
    std::bernoulli_distribution hit(rate);
    std::uniform_real_distribution<double> size(0.0, 20.0);
    Vec v(n, 0.0);
    for (auto& x : v) x = hit(rng) ? size(rng) : 0.0;
    return v;
}

ForecastPoint point(Date d, bool flag, double size) { return make_point(d, flag ? 1.0 : 0.0, flag, size); }

}  // namespace

TEST_CASE("auc examples") {
    const Vec s{0.1, 0.2, 0.3, 0.4};
    const std::vector<std::uint8_t> l{0, 0, 1, 1};
    CHECK(auc_roc(s, l) == 1.0);
    CHECK(auc_roc(Vec(4, 0.7), l) == 0.5);
    CHECK(auc_roc(Vec{0.4, 0.3, 0.2, 0.1}, l) == 0.0);
    CHECK_THROWS_AS(auc_roc(s, std::vector<std::uint8_t>(4, 1)), UndefinedMetric);
}

TEST_CASE("auc equals the pairwise win rate and ignores monotone transforms") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> coarse(0, 9);
    std::bernoulli_distribution label(0.3);
    for (int trial = 0; trial < 50; ++trial) {
        Vec s(80);
        std::vector<std::uint8_t> l(80);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = coarse(rng), l[i] = label(rng);
        l[0] = 1, l[1] = 0;
        double wins = 0, pairs = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < s.size(); ++j)
                if (l[i] && !l[j]) wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0, ++pairs;
        CHECK(auc_roc(s, l) == doctest::Approx(wins / pairs).epsilon(1e-12));
        Vec t = s;
        for (auto& x : t) x = std::exp(3 * x) - 2;
        CHECK(auc_roc(t, l) == auc_roc(s, l));
    }
}

TEST_CASE("random scores give auc near one half") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0, 1);
    std::bernoulli_distribution label(0.5);
    Vec s(10000);
    std::vector<std::uint8_t> l(10000);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = u(rng), l[i] = label(rng);
    CHECK(std::abs(auc_roc(s, l) - 0.5) <= 0.02);
}

TEST_CASE("mase examples") {
    CHECK(mase(Vec{11, 11, 11}, Vec{10, 12, 11}, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(mase(Vec{1, 2}, Vec{1, 2}, 3.0) == 0.0);
    const Vec train{3, 8, 2, 9, 4};
    const double scale = naive_scale(train);
    CHECK(mase(Vec(train.begin(), train.end() - 1), Vec(train.begin() + 1, train.end()), scale) == 1.0);
    CHECK_THROWS_AS(naive_scale(Vec{5, 5, 5}), UndefinedMetric);
    CHECK_THROWS_AS(naive_scale(Vec{5}), UndefinedMetric);
    CHECK_THROWS_AS(mase(Vec{1}, Vec{1}, 0.0), UndefinedMetric);
}

TEST_CASE("mase is scale free") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 50), c(0.01, 100);
    for (int trial = 0; trial < 200; ++trial) {
        Vec train(10), f(6), y(6);
        for (auto& x : train) x = u(rng);
        for (auto& x : f) x = u(rng);
        for (auto& x : y) x = u(rng);
        const double base = mase(f, y, naive_scale(train));
        const double k = c(rng);
        for (auto* v : {&train, &f, &y})
            for (auto& x : *v) x *= k;
        CHECK(mase(f, y, naive_scale(train)) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("mase_I on the compressed [3,6,3,6] series with alpha-1 SES") {
    // Demands on days 0, 2 (training) and 4, 6 (test).
    const DemandSeries s({"A", "X"}, kStart, {3, 0, 6, 0, 3, 0, 6});
    const Date test = kStart + Days{4};
    const Vec history{3, 6, 3};
    std::vector<ForecastPoint> pts{point(kStart + Days{4}, true, ses(std::span(history).first(2), 1.0)),
                                   point(kStart + Days{5}, false, 0.0),
                                   point(kStart + Days{6}, true, ses(history, 1.0))};
    // Errors |6-3| and |3-6| over a naive scale of |6-3|.
    CHECK(mase_I(s, test, pts) == 1.0);
    CHECK(mase_II(s, test, pts) == 1.0);
}

TEST_CASE("mase_II counts false alarms and misses on the union set") {
    const DemandSeries s({"A", "X"}, kStart, {2, 0, 6, 0, 4, 0, 0, 5});
    const Date test = kStart + Days{4};  // scale |6-2| = 4
    std::vector<ForecastPoint> perfect{point(kStart + Days{4}, true, 4), point(kStart + Days{5}, false, 9),
                                       point(kStart + Days{6}, false, 9), point(kStart + Days{7}, true, 5)};
    CHECK(mase_I(s, test, perfect) == 0.0);
    CHECK(mase_II(s, test, perfect) == 0.0);

    auto alarm = perfect;
    alarm[1] = point(kStart + Days{5}, true, 3);  // flags a no-demand day with size 3
    CHECK(mase_II(s, test, alarm) == doctest::Approx(3.0 / 3.0 / 4.0).epsilon(1e-15));
    auto miss = perfect;
    miss[3] = point(kStart + Days{7}, false, 5);  // misses a demand of 5
    CHECK(mase_II(s, test, miss) == doctest::Approx(5.0 / 2.0 / 4.0).epsilon(1e-15));
    CHECK(mase_I(s, test, miss) == 0.0);
}

TEST_CASE("spec examples") {
    const Vec y{0, 3, 0, 5};
    CHECK(spec(y, y) == 0.0);
    // Zero forecast: opportunity cost a1 * y_i weighted by delay.
    const Vec zero(4, 0.0);
    CHECK(spec(zero, y) == doctest::Approx(0.5 * (3 * (1 + 2 + 3) + 5 * 1) / 4.0).epsilon(1e-15));
    const Vec f{1, 1, 4, 0};
    CHECK(spec(f, y) == doctest::Approx(spec_brute_force(f, y, 0.5, 0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(spec(Vec{-1}, Vec{1}), InvalidInput);
    CHECK_THROWS_AS(spec(Vec{1, 2}, Vec{1}), InvalidInput);
}

TEST_CASE("property: spec matches the brute-force sum, is one-sided and non-negative") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> a(0.1, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = static_cast<std::size_t>(trial % 25 + 1);
        const Vec f = sparse(rng, n, 0.4), y = sparse(rng, n, 0.3);
        const double a1 = a(rng), a2 = a(rng);
        const double got = spec(f, y, a1, a2);
        const double want = spec_brute_force(f, y, a1, a2);
        CHECK(got >= 0.0);
        CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
        for (const auto& t : spec_terms(f, y, a1, a2)) CHECK(!(t.opportunity > 0.0 && t.stock > 0.0));
    }
}

TEST_CASE("median") {
    CHECK(median_of({3, 1, 2}) == 2);
    CHECK(median_of({4, 1, 2, 3}) == 2.5);
    CHECK_THROWS_AS(median_of({}), UndefinedMetric);
}
