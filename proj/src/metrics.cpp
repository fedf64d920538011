#include "twofold/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twofold/errors.hpp"

namespace twofold {

double auc_roc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size()) throw InvalidInput("scores and labels differ in length");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double positives = 0.0, rank_sum = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]]) {
                positives += 1.0;
                rank_sum += avg_rank;
            }
        }
        i = j;
    }
    const double negatives = static_cast<double>(n) - positives;
    if (positives == 0.0 || negatives == 0.0) throw UndefinedMetric("AUC ROC needs both classes");
    return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

double naive_scale(std::span<const double> training) {
    if (training.size() < 2) throw UndefinedMetric("MASE scale needs at least two training values");
    double sum = 0.0;
    for (std::size_t i = 1; i < training.size(); ++i) sum += std::abs(training[i] - training[i - 1]);
    const double scale = sum / static_cast<double>(training.size() - 1);
    if (scale == 0.0) throw UndefinedMetric("MASE scale is zero (constant training series)");
    return scale;
}

double mase(std::span<const double> forecasts, std::span<const double> actuals, double scale) {
    if (forecasts.size() != actuals.size()) throw InvalidInput("forecasts and actuals differ in length");
    if (forecasts.empty()) throw UndefinedMetric("MASE over an empty evaluation set");
    if (!(scale > 0.0)) throw UndefinedMetric("MASE scale must be positive");
    double sum = 0.0;
    for (std::size_t i = 0; i < forecasts.size(); ++i) sum += std::abs(forecasts[i] - actuals[i]);
    return sum / static_cast<double>(forecasts.size()) / scale;
}

double mase_scale(const DemandSeries& series, Date test_start) {
    std::vector<double> train;
    for (const auto& [date, value] : nonzero_view(series)) {
        if (date < test_start) train.push_back(value);
    }
    return naive_scale(train);
}

double mase_I(const DemandSeries& series, Date test_start, std::span<const ForecastPoint> points) {
    std::vector<double> f, y;
    for (const auto& p : points) {
        const double actual = series.at(p.date);
        if (actual > 0.0) {
            f.push_back(p.size_estimate);
            y.push_back(actual);
        }
    }
    if (y.empty()) throw UndefinedMetric("MASE_I: no demand in the evaluation points");
    return mase(f, y, mase_scale(series, test_start));
}

double mase_II(const DemandSeries& series, Date test_start, std::span<const ForecastPoint> points) {
    std::vector<double> f, y;
    for (const auto& p : points) {
        const double actual = series.at(p.date);
        if (actual > 0.0 || p.occurrence_flag) {
            f.push_back(p.combined);
            y.push_back(actual);
        }
    }
    if (y.empty()) throw UndefinedMetric("MASE_II: no demand and no flagged points");
    return mase(f, y, mase_scale(series, test_start));
}

namespace {

void check_spec_inputs(std::span<const double> f, std::span<const double> y) {
    if (f.size() != y.size()) throw InvalidInput("SPEC: forecasts and actuals differ in length");
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < 0.0 || y[i] < 0.0) throw InvalidInput("SPEC: negative value at position " + std::to_string(i));
    }
}

template <class Visit>
void for_each_term(std::span<const double> f, std::span<const double> y, double a1, double a2, Visit visit) {
    const std::size_t n = f.size();
    std::vector<double> F(n + 1, 0.0), Y(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        F[i + 1] = F[i] + f[i];
        Y[i + 1] = Y[i] + y[i];
    }
    for (std::size_t t = 1; t <= n; ++t) {
        for (std::size_t i = 1; i <= t; ++i) {
            SpecTerm term;
            term.opportunity = a1 * std::min(y[i - 1], Y[i] - F[t]);
            term.stock = a2 * std::min(f[i - 1], F[i] - Y[t]);
            term.weight = static_cast<double>(t - i + 1);
            visit(term);
        }
    }
}

}  // namespace

std::vector<SpecTerm> spec_terms(std::span<const double> forecasts, std::span<const double> actuals, double alpha1,
                                 double alpha2) {
    check_spec_inputs(forecasts, actuals);
    std::vector<SpecTerm> out;
    out.reserve(forecasts.size() * (forecasts.size() + 1) / 2);
    for_each_term(forecasts, actuals, alpha1, alpha2, [&](const SpecTerm& t) { out.push_back(t); });
    return out;
}

double spec(std::span<const double> forecasts, std::span<const double> actuals, double alpha1, double alpha2) {
    check_spec_inputs(forecasts, actuals);
    if (forecasts.empty()) throw UndefinedMetric("SPEC over an empty series");
    double total = 0.0;
    for_each_term(forecasts, actuals, alpha1, alpha2, [&](const SpecTerm& t) {
        total += std::max({0.0, t.opportunity, t.stock}) * t.weight;
    });
    return total / static_cast<double>(forecasts.size());
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw UndefinedMetric("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace twofold
