#include "twofold/demand.hpp"

#include <algorithm>
#include <map>

#include "twofold/errors.hpp"

namespace twofold {

std::string to_string(const SeriesKey& key) { return key.material + "/" + key.client; }

DemandSeries::DemandSeries(SeriesKey key, Date start, std::vector<double> values)
    : key_(std::move(key)), start_(start), values_(std::move(values)) {
    if (values_.empty()) throw InvalidInput("series " + to_string(key_) + " has no days");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
            throw InvalidInput("series " + to_string(key_) + " has invalid quantity on " +
                               format_date(date_at(i)));
        }
    }
}

DemandSeries DemandSeries::truncated(Date last) const {
    if (last < start_) throw InvalidInput("truncation before series start");
    const std::size_t n = std::min(values_.size(), index_of(last) + 1);
    return DemandSeries(key_, start_, std::vector<double>(values_.begin(), values_.begin() + n));
}

std::vector<DatedValue> nonzero_view(const DemandSeries& series) {
    std::vector<DatedValue> out;
    const auto v = series.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 0.0) out.push_back({series.date_at(i), v[i]});
    }
    return out;
}

std::vector<double> nonzero_sizes(const DemandSeries& series) {
    std::vector<double> out;
    for (double x : series.values()) {
        if (x > 0.0) out.push_back(x);
    }
    return out;
}

std::vector<DemandSeries> build_series(std::span<const DemandRecord> records, DateRange span) {
    if (span.last < span.first) throw InvalidInput("empty date span");
    std::map<SeriesKey, std::vector<double>> grid;
    const auto len = static_cast<std::size_t>(span.length());
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (!(rec.quantity >= 0.0) || !std::isfinite(rec.quantity)) {
            throw InvalidInput("record " + std::to_string(r) + " (" + to_string(rec.key) + ", " +
                               format_date(rec.date) + ") has negative or invalid quantity");
        }
        if (!span.contains(rec.date)) {
            throw InvalidInput("record " + std::to_string(r) + " date " + format_date(rec.date) +
                               " outside span");
        }
        auto& values = grid[rec.key];
        if (values.empty()) values.assign(len, 0.0);
        values[static_cast<std::size_t>(days_between(span.first, rec.date))] += rec.quantity;
    }
    std::vector<DemandSeries> out;
    out.reserve(grid.size());
    for (auto& [key, values] : grid) out.emplace_back(key, span.first, std::move(values));
    return out;
}

std::vector<DemandRecord> to_records(std::span<const DemandSeries> series) {
    std::vector<DemandRecord> out;
    for (const auto& s : series) {
        for (const auto& [date, value] : nonzero_view(s)) out.push_back({date, s.key(), value});
    }
    return out;
}

std::vector<Date> Calendar::evaluation_days(DateRange range) {
    std::vector<Date> out;
    for (Date d = range.first; d <= range.last; d += Days{1}) {
        if (is_evaluation_day(d)) out.push_back(d);
    }
    return out;
}

ForecastPoint make_point(Date date, double score, bool flag, double size) {
    ForecastPoint p;
    p.date = date;
    p.occurrence_score = score;
    p.occurrence_flag = flag;
    p.size_estimate = size;
    p.combined = flag ? size : 0.0;
    return p;
}

}  // namespace twofold
