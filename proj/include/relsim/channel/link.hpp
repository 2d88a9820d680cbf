#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relsim/channel/loss.hpp"
#include "relsim/sim/engine.hpp"
#include "relsim/sim/rng.hpp"
#include "relsim/transport/packet.hpp"

namespace relsim::channel {

/// One directional link: capacity, propagation delay with jitter, and a
/// loss process.
struct LinkProfile {
    double capacity_bps = 0.0;
    sim::SimTime base_delay_us = 0;
    sim::SimTime jitter_std_us = 0;
    LossModel loss = RandomLoss{0.0};
};

/// Named profiles from measured wireless path characteristics.
LinkProfile wifi_profile();   // 30 Mb/s, 20 +- 10 ms, 0.7 %
LinkProfile sub6_profile();   // 1100 Mb/s, 27.4 +- 6.4 ms, 0.1 %
LinkProfile mmwave_profile(); // 2500 Mb/s, 2 +- 1 ms, 0.1 %

/// Resolves "wifi" / "sub6" / "mmwave". Throws ConfigError otherwise.
LinkProfile profile_by_name(const std::string& name);

struct LinkCounters {
    std::uint64_t submitted = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped_reliable = 0;
    std::uint64_t dropped_unreliable = 0;
    std::uint64_t dropped_ack = 0;
};

/// Unbounded-FIFO directional link. Transit time is queue departure +
/// serialization + jittered propagation; arrivals are clamped
/// non-decreasing so one link never reorders. Loss is drawn per packet
/// at submission; dropped packets do not occupy the queue.
class Link {
public:
    using PacketHandler = std::function<void(const transport::Packet&)>;
    using Tap = std::function<void(const transport::Packet&, bool dropped)>;
    using DropOverride = std::function<std::optional<bool>(const transport::Packet&)>;

    Link(sim::SimEngine& engine, LinkProfile profile, sim::RngStream loss_rng,
         sim::RngStream jitter_rng);

    void set_deliver_handler(PacketHandler h) { deliver_ = std::move(h); }
    void set_drop_handler(PacketHandler h) { on_drop_ = std::move(h); }

    // Test hooks: observe every submission / script the drop decision.
    void set_tap(Tap t) { tap_ = std::move(t); }
    void set_drop_override(DropOverride o) { drop_override_ = std::move(o); }

    /// Submits a packet now. Returns the arrival time, or nullopt if the
    /// loss process dropped it. Delivery is scheduled on the engine.
    std::optional<sim::SimTime> transmit(const transport::Packet& pkt);

    sim::SimTime serialization_us(std::uint32_t size_bytes) const;

    const LinkProfile& profile() const { return profile_; }
    const LinkCounters& counters() const { return counters_; }

private:
    bool draw_drop(const transport::Packet& pkt);

    sim::SimEngine& engine_;
    LinkProfile profile_;
    sim::RngStream loss_rng_;
    sim::RngStream jitter_rng_;
    PacketHandler deliver_;
    PacketHandler on_drop_;
    Tap tap_;
    DropOverride drop_override_;
    LinkCounters counters_;
    bool ge_bad_ = false;
    sim::SimTime last_departure_us_ = 0;
    sim::SimTime last_arrival_us_ = 0;
};

} // namespace relsim::channel
