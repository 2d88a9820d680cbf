#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "relsim/sim/rng.hpp"
#include "relsim/sim/time.hpp"

namespace relsim::workload {

/// One application update (a video frame): generated at gen_time with
/// size_bytes of payload.
struct UpdateSpec {
    std::uint64_t update_id = 0;
    sim::SimTime gen_time = 0;
    std::uint32_t size_bytes = 0;
};

/// Periodic frame source. The source is clocked, not paced: updates are
/// generated on schedule regardless of transport backpressure.
struct SourceModel {
    double fps = 60.0;
    std::uint32_t mean_size_bytes = 16'667; // ~8 Mb/s at 60 fps
    double size_jitter_fraction = 0.2;      // relative std of the size
    sim::SimTime duration_us = 10 * sim::kUsPerSec;
};

/// Generation time of update k. Integer microseconds with the division
/// remainder carried, so e.g. 60 fps yields exactly 3 updates per
/// 50,000 us (gaps 16666, 16667, 16667).
sim::SimTime generation_time(const SourceModel& src, std::uint64_t k);

class UpdateSource {
public:
    UpdateSource(SourceModel model, sim::RngStream rng);

    /// Next update, or nullopt once gen_time would reach the duration.
    std::optional<UpdateSpec> next();

    const SourceModel& model() const { return model_; }

private:
    SourceModel model_;
    sim::RngStream rng_;
    std::uint64_t k_ = 0;
};

/// Splits an update into MTU-sized payload fragments: ceil(size/mtu)
/// fragments whose sizes sum to size_bytes, all but the last full.
std::vector<std::uint32_t> fragment_sizes(std::uint32_t size_bytes, std::uint32_t mtu_payload);

} // namespace relsim::workload
