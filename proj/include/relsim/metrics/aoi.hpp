#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "relsim/sim/time.hpp"

namespace relsim::metrics {

/// Reception log for the time-average peak age of information. Keeps
/// (generation, reception) pairs of completely delivered updates on the
/// freshness frontier: a completion whose generation time is not newer
/// than the newest retained one is stale and never enters.
class AoiTracker {
public:
    void record(sim::SimTime gen_time, sim::SimTime received_at);

    /// Mean over i of (r_{i+1} - g_i): the system's age immediately
    /// before each refresh. Needs at least two retained receptions.
    std::optional<double> time_average_peak_us() const;

    std::size_t size() const { return entries_.size(); }
    std::uint64_t stale_dropped() const { return stale_dropped_; }
    const std::vector<std::pair<sim::SimTime, sim::SimTime>>& entries() const { return entries_; }

private:
    std::vector<std::pair<sim::SimTime, sim::SimTime>> entries_; // (g_i, r_i), g strictly increasing
    std::uint64_t stale_dropped_ = 0;
};

/// value / baseline_mean, or nullopt when the baseline is not positive.
std::optional<double> normalize(double value, double baseline_mean);

} // namespace relsim::metrics
