#include "twofold/history.hpp"

#include <algorithm>

namespace twofold {

DemandHistory::DemandHistory(const DemandSeries& series) {
    for (const auto& [date, value] : nonzero_view(series)) {
        dates_.push_back(date);
        sizes_.push_back(value);
    }
}

std::size_t DemandHistory::count_until(Date origin) const {
    return static_cast<std::size_t>(std::upper_bound(dates_.begin(), dates_.end(), origin) - dates_.begin());
}

}  // namespace twofold
