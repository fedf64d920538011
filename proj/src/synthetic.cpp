#include "twofold/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "twofold/errors.hpp"
#include "twofold/seed.hpp"
#include "twofold/taxonomy.hpp"

namespace twofold {

void SyntheticSpec::validate() const {
    if (n_series == 0) throw InvalidInput("synthetic spec needs at least one series");
    if (span_days < 14) throw InvalidInput("synthetic span must cover at least two weeks");
    if (!(lumpy_fraction >= 0.0 && lumpy_fraction <= 1.0)) throw InvalidInput("lumpy_fraction must lie in [0, 1]");
    if (!(adi_min >= 1.0)) throw InvalidInput("ADI targets must be >= 1");
    if (!(adi_max >= adi_min)) throw InvalidInput("adi_max must be >= adi_min");
    if (!(adi_median > 0.0) || adi_sigma < 0.0 || !(lumpy_adi_median > 0.0) || lumpy_adi_sigma < 0.0) throw InvalidInput("ADI distribution parameters out of range");
    if (!(lumpy_cv2_min >= 0.0 && lumpy_cv2_max >= lumpy_cv2_min)) throw InvalidInput("lumpy CV2 range invalid");
    if (!(steady_cv2_max >= 0.0)) throw InvalidInput("steady CV2 range invalid");
    if (!(size_median_min >= 1.0 && size_median_max >= size_median_min)) throw InvalidInput("size median range invalid");
    if (!(regularity >= 0.0 && regularity <= 1.0)) throw InvalidInput("regularity must lie in [0, 1]");
    if (!(adi_tolerance > 0.0 && adi_tolerance < 1.0)) throw InvalidInput("adi_tolerance must lie in (0, 1)");
}

double SyntheticData::positive_rate() const {
    std::size_t cells = 0, positives = 0;
    for (const auto& s : series) {
        const auto v = s.values();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!is_weekday(s.date_at(i))) continue;
            ++cells;
            positives += v[i] > 0.0;
        }
    }
    return cells ? static_cast<double>(positives) / static_cast<double>(cells) : 0.0;
}

namespace {

struct Draw {
    std::vector<std::size_t> events;  // indices into the admitted-day list
    double error = 0.0;
};

// Demand events over the admitted days with mean gap `gap` (in admitted days).
std::vector<std::size_t> draw_events(std::size_t n_days, double gap, bool regular, std::mt19937_64& rng) {
    std::vector<std::size_t> events;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double pos = std::floor(unit(rng) * gap);
    if (regular) {
        for (; pos < static_cast<double>(n_days); pos += gap) events.push_back(static_cast<std::size_t>(pos));
        return events;
    }
    // 1 + Geometric(1/gap) has mean `gap`.
    const double q = 1.0 / gap;
    std::geometric_distribution<long> geo(std::min(q, 1.0));
    for (auto p = static_cast<std::size_t>(pos); p < n_days; p += 1 + static_cast<std::size_t>(geo(rng))) {
        events.push_back(p);
    }
    return events;
}

}  // namespace

DemandSeries generate_series(SeriesKey key, DateRange span, const SeriesPlan& plan, std::uint64_t seed) {
    if (!(plan.target_adi >= 1.0)) throw InvalidInput("target ADI must be >= 1");
    if (!(plan.target_cv2 >= 0.0)) throw InvalidInput("target CV2 must be >= 0");
    const auto k = std::count(plan.admitted.begin(), plan.admitted.end(), true);
    if (k == 0) throw InvalidInput("admission set is empty");
    if (plan.target_adi < 5.0 / static_cast<double>(k)) {
        throw InvalidInput("target ADI " + std::to_string(plan.target_adi) + " unreachable with " + std::to_string(k) +
                           " admitted weekdays");
    }
    if (span.length() <= 0) throw InvalidInput("empty span");

    std::vector<std::size_t> admitted_days;  // offsets from span.first
    std::size_t weekdays = 0;
    for (long d = 0; d < span.length(); ++d) {
        const Date date = span.first + Days{d};
        const int dow = day_of_week(date);
        if (dow >= 5) continue;
        ++weekdays;
        if (plan.admitted[static_cast<std::size_t>(dow)]) admitted_days.push_back(static_cast<std::size_t>(d));
    }
    if (admitted_days.empty()) throw InvalidInput("span contains no admitted weekday");

    const double gap = plan.target_adi * static_cast<double>(k) / 5.0;
    auto realized_error = [&](std::size_t n_events) {
        if (n_events == 0) return std::numeric_limits<double>::infinity();
        const double adi = static_cast<double>(weekdays) / static_cast<double>(n_events);
        return std::abs(adi / plan.target_adi - 1.0);
    };

    // Resample until the realized ADI lands inside the tolerance; keep the closest.
    Draw best;
    best.error = std::numeric_limits<double>::infinity();
    for (std::uint64_t attempt = 0; attempt < 64 && best.error > plan.adi_tolerance; ++attempt) {
        std::mt19937_64 rng(derive_seed(seed, {attempt}));
        auto events = draw_events(admitted_days.size(), gap, plan.regular, rng);
        const double err = realized_error(events.size());
        if (err < best.error) best = {std::move(events), err};
    }
    if (best.error > plan.adi_tolerance) {
        // Short spans with large ADI: fix the event count directly, evenly spaced.
        const auto wanted = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(static_cast<double>(weekdays) / plan.target_adi)));
        const std::size_t n = std::min(wanted, admitted_days.size());
        best.events.clear();
        const double step = static_cast<double>(admitted_days.size()) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) best.events.push_back(static_cast<std::size_t>(std::floor(step * (j + 0.5))));
    }

    std::vector<double> values(static_cast<std::size_t>(span.length()), 0.0);
    std::mt19937_64 rng(derive_seed(seed, {0x51ce}));
    const double sigma = std::sqrt(std::log1p(plan.target_cv2));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t e : best.events) {
        double size = plan.size_median;
        if (sigma > 0.0) size = plan.size_median * std::exp(sigma * normal(rng));
        values[admitted_days[e]] = std::max(1.0, std::round(size));
    }
    return DemandSeries(std::move(key), span.first, std::move(values));
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    SyntheticData data;
    data.span = {spec.start, spec.start + Days{spec.span_days - 1}};

    std::mt19937_64 top(splitmix64(spec.seed));
    std::vector<std::size_t> order(spec.n_series);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), top);
    const auto n_lumpy =
        static_cast<std::size_t>(std::llround(spec.lumpy_fraction * static_cast<double>(spec.n_series)));
    std::vector<bool> lumpy(spec.n_series, false);
    for (std::size_t j = 0; j < n_lumpy; ++j) lumpy[order[j]] = true;

    data.series.reserve(spec.n_series);
    data.truth.reserve(spec.n_series);
    for (std::size_t i = 0; i < spec.n_series; ++i) {
        std::mt19937_64 rng(derive_seed(spec.seed, {i, 1}));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        SeriesTruth t;
        t.lumpy = lumpy[i];
        const double adi_median = t.lumpy ? spec.lumpy_adi_median : spec.adi_median;
        const double adi_sigma = t.lumpy ? spec.lumpy_adi_sigma : spec.adi_sigma;
        t.target_adi = std::clamp(adi_median * std::exp(adi_sigma * normal(rng)), spec.adi_min, spec.adi_max);
        t.target_cv2 = t.lumpy ? std::clamp(spec.lumpy_cv2_median * std::exp(spec.lumpy_cv2_sigma * normal(rng)),
                                            spec.lumpy_cv2_min, spec.lumpy_cv2_max)
                               : std::min(spec.steady_cv2_median * std::exp(spec.steady_cv2_sigma * normal(rng)),
                                          spec.steady_cv2_max);
        t.regular = unit(rng) < spec.regularity;
        t.size_median =
            std::exp(std::log(spec.size_median_min) +
                     unit(rng) * (std::log(spec.size_median_max) - std::log(spec.size_median_min)));

        // Smallest admission set that can still reach the ADI target, up to all five days.
        const int k_min = std::clamp(static_cast<int>(std::ceil(5.0 / t.target_adi / 0.9)), 1, 5);
        std::uniform_int_distribution<int> pick_k(k_min, std::max(k_min, std::min(5, k_min + 1)));
        const int k = pick_k(rng);
        std::array<int, 5> days{0, 1, 2, 3, 4};
        std::shuffle(days.begin(), days.end(), rng);
        for (int j = 0; j < k; ++j) t.admitted[static_cast<std::size_t>(days[static_cast<std::size_t>(j)])] = true;

        char material[16], client[16];
        std::snprintf(material, sizeof material, "M%04zu", i % 279);
        std::snprintf(client, sizeof client, "C%03zu", i % 149);

        SeriesPlan plan;
        plan.target_adi = t.target_adi;
        plan.target_cv2 = t.target_cv2;
        plan.admitted = t.admitted;
        plan.regular = t.regular;
        plan.size_median = t.size_median;
        plan.adi_tolerance = spec.adi_tolerance;
        data.series.push_back(generate_series({material, client}, data.span, plan, derive_seed(spec.seed, {i, 2})));
        t.realized_adi = adi(data.series.back(), PeriodGrid::Weekdays);
        data.truth.push_back(t);
    }
    return data;
}

}  // namespace twofold
