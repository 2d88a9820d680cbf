#include "relsim/metrics/aoi.hpp"

#include "relsim/errors.hpp"

namespace relsim::metrics {

void AoiTracker::record(sim::SimTime gen_time, sim::SimTime received_at) {
    if (received_at < gen_time) {
        throw SimInvariantError("AoiTracker: reception before generation");
    }
    if (!entries_.empty() && gen_time <= entries_.back().first) {
        ++stale_dropped_;
        return;
    }
    entries_.emplace_back(gen_time, received_at);
}

std::optional<double> AoiTracker::time_average_peak_us() const {
    if (entries_.size() < 2) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < entries_.size(); ++i) {
        sum += static_cast<double>(entries_[i + 1].second - entries_[i].first);
    }
    return sum / static_cast<double>(entries_.size() - 1);
}

std::optional<double> normalize(double value, double baseline_mean) {
    if (baseline_mean <= 0.0) return std::nullopt;
    return value / baseline_mean;
}

} // namespace relsim::metrics
