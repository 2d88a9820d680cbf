#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "relsim/sim/time.hpp"

namespace relsim::transport {

enum class FrameKind : std::uint8_t {
    ReliableStream,   // stream data, acked and retransmitted
    UnreliableStream, // stream data flagged no-ack / no-retransmit
    Ack,              // acknowledgment ranges; never itself ack-eliciting
    Ping,             // ack-eliciting probe, no payload
};

constexpr bool is_reliable_kind(FrameKind k) {
    return k == FrameKind::ReliableStream || k == FrameKind::Ping;
}

struct PnRange {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0; // inclusive
};

/// Simulated wire unit. Reliable and unreliable frames share one packet
/// number sequence per sender; only the frame kind differs.
struct Packet {
    std::uint64_t pn = 0;
    FrameKind kind = FrameKind::ReliableStream;
    bool reliable = false;        // == is_reliable_kind(kind)
    std::uint32_t size_bytes = 0; // payload + simulated header
    sim::SimTime sent_at = 0;

    // Stream payload (data frames only).
    std::uint64_t update_id = 0;
    std::uint32_t frag_index = 0;
    std::uint32_t frag_count = 0;
    std::uint32_t payload_bytes = 0;
    sim::SimTime gen_time = 0;

    // Position in the reliable substream. Stable across retransmissions,
    // so the receiver can order reliable data without treating unreliable
    // packet-number gaps as losses.
    std::uint64_t rel_seq = 0;

    std::optional<std::uint64_t> retx_of; // pn this packet retransmits

    std::vector<PnRange> ack_ranges; // Ack frames only, ascending
};

} // namespace relsim::transport
