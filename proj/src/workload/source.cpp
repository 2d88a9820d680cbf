#include "relsim/workload/source.hpp"

#include <algorithm>
#include <cmath>

#include "relsim/errors.hpp"

namespace relsim::workload {

sim::SimTime generation_time(const SourceModel& src, std::uint64_t k) {
    auto fps_int = static_cast<std::uint64_t>(std::llround(src.fps));
    if (fps_int > 0 && std::abs(src.fps - static_cast<double>(fps_int)) < 1e-9) {
        return k * sim::kUsPerSec / fps_int; // exact carry behaviour
    }
    return static_cast<sim::SimTime>(std::llround(static_cast<double>(k) * 1e6 / src.fps));
}

UpdateSource::UpdateSource(SourceModel model, sim::RngStream rng)
    : model_(model), rng_(std::move(rng)) {
    if (model_.fps <= 0.0) throw ConfigError("workload fps must be positive");
    if (model_.mean_size_bytes < 1) throw ConfigError("workload mean_size_bytes must be >= 1");
    if (model_.size_jitter_fraction < 0.0) {
        throw ConfigError("workload size_jitter_fraction must be >= 0");
    }
}

std::optional<UpdateSpec> UpdateSource::next() {
    sim::SimTime t = generation_time(model_, k_);
    if (t >= model_.duration_us) return std::nullopt;

    std::uint32_t size = model_.mean_size_bytes;
    if (model_.size_jitter_fraction > 0.0) {
        double mean = static_cast<double>(model_.mean_size_bytes);
        double drawn = rng_.normal(mean, model_.size_jitter_fraction * mean);
        size = static_cast<std::uint32_t>(std::max(1.0, std::round(drawn)));
    }
    return UpdateSpec{k_++, t, size};
}

std::vector<std::uint32_t> fragment_sizes(std::uint32_t size_bytes, std::uint32_t mtu_payload) {
    std::vector<std::uint32_t> sizes;
    std::uint32_t full = size_bytes / mtu_payload;
    std::uint32_t rest = size_bytes % mtu_payload;
    sizes.assign(full, mtu_payload);
    if (rest > 0) sizes.push_back(rest);
    return sizes;
}

} // namespace relsim::workload
