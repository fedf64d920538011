#pragma once

#include <span>
#include <vector>

#include "twofold/demand.hpp"

namespace twofold {

/// Demand events of one series with prefix queries by origin date.
class DemandHistory {
public:
    explicit DemandHistory(const DemandSeries& series);

    /// Number of demand events on or before `origin`.
    std::size_t count_until(Date origin) const;

    std::span<const Date> dates() const { return dates_; }
    std::span<const double> sizes() const { return sizes_; }
    std::span<const double> sizes_until(Date origin) const { return std::span(sizes_).first(count_until(origin)); }
    std::span<const Date> dates_until(Date origin) const { return std::span(dates_).first(count_until(origin)); }

private:
    std::vector<Date> dates_;
    std::vector<double> sizes_;
};

}  // namespace twofold
