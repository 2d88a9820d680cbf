#pragma once

#include <cstdint>

#include "relsim/sim/time.hpp"

namespace relsim::transport {

/// Endpoint tunables. Sizes are QUIC-typical; the receive-buffer
/// threshold and everything else can be overridden per scenario.
struct TransportConfig {
    std::uint32_t mtu_payload_bytes = 1'200;
    std::uint32_t header_bytes = 30;
    std::uint32_t ack_packet_bytes = 40;
    std::uint32_t ping_packet_bytes = 40;

    std::uint32_t initial_cwnd_packets = 10;
    sim::SimTime initial_rtt_us = 100'000; // used until the first RTT sample

    // Unreliable pacing: cwnd/srtt refill, burst cap cwnd * fraction.
    double pacer_burst_fraction = 0.25;

    // Loss declaration: reliable-packet reordering threshold, and the
    // 9/8 * max(srtt, latest_rtt) time threshold.
    std::uint64_t reorder_packet_threshold = 3;
    std::uint32_t time_threshold_num = 9;
    std::uint32_t time_threshold_den = 8;

    // Probe when nothing ack-eliciting was sent for max(2 srtt, this).
    // The floor keeps probes away from ordinary inter-frame gaps on
    // short-RTT paths; an all-reliable sender then never probes at all.
    sim::SimTime min_probe_interval_us = 40'000;

    std::uint32_t receiver_buffer_threshold = 64;
    std::uint32_t max_ack_ranges = 32;

    std::uint32_t mss_bytes() const { return mtu_payload_bytes; }
    std::uint32_t wire_size(std::uint32_t payload_bytes) const {
        return payload_bytes + header_bytes;
    }
};

} // namespace relsim::transport
