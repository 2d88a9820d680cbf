#pragma once

#include <cstdint>

namespace relsim::metrics {

/// Per-run transport KPIs. All counters are monotone during a run.
struct KpiCounters {
    // Sender-side wire counts. Session packet volume is their sum.
    std::uint64_t data_packets_sent = 0; // first transmissions, both classes
    std::uint64_t retransmissions = 0;
    std::uint64_t acks_sent = 0;
    std::uint64_t pings_sent = 0;

    // First-transmission split, for the reliable fraction.
    std::uint64_t reliable_data_packets = 0;
    std::uint64_t unreliable_data_packets = 0;

    // Channel ground truth (data direction); endpoints cannot see these.
    std::uint64_t drops_reliable = 0;
    std::uint64_t drops_unreliable = 0;
    std::uint64_t drops_ack = 0; // reverse direction

    // Receiver-side.
    std::uint64_t backlog_events = 0;   // arrivals held for reordering
    std::uint64_t buffer_discards = 0;  // packets flushed by the threshold
    std::uint64_t duplicates = 0;
    std::uint64_t stale_receptions = 0; // slot already skipped by a flush

    // Application-level accounting.
    std::uint64_t updates_generated = 0;
    std::uint64_t updates_delivered = 0;
    std::uint64_t updates_incomplete = 0;

    // Sender diagnostics.
    std::uint64_t sender_detected_losses = 0;
    std::uint64_t spurious_acks = 0; // acked after being declared lost
    std::uint64_t probe_overrides = 0;

    // Receiver buffer occupancy, sampled every 10 ms.
    std::uint64_t peak_buffer_occupancy = 0;

    std::uint64_t session_packet_volume() const {
        return data_packets_sent + retransmissions + acks_sent + pings_sent;
    }

    double reliable_fraction() const {
        std::uint64_t total = reliable_data_packets + unreliable_data_packets;
        return total == 0 ? 0.0
                          : static_cast<double>(reliable_data_packets) / static_cast<double>(total);
    }
};

} // namespace relsim::metrics
