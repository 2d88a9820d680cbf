#pragma once

#include <cstdint>
#include <map>

#include "relsim/channel/link.hpp"
#include "relsim/metrics/kpi.hpp"
#include "relsim/metrics/update_ledger.hpp"
#include "relsim/sim/engine.hpp"
#include "relsim/transport/config.hpp"
#include "relsim/transport/packet.hpp"

namespace relsim::transport {

/// Receiving endpoint. Unreliable packets bypass ordering and reach the
/// application immediately; reliable packets are delivered in reliable-
/// substream order, held while a predecessor is missing, and every
/// reliable reception is acknowledged at once with cumulative ranges.
/// When the hold buffer reaches its occupancy threshold it is flushed
/// wholesale and the stream skips past the highest held position.
class Receiver {
public:
    Receiver(sim::SimEngine& engine, const TransportConfig& cfg, channel::Link& ack_link,
             metrics::KpiCounters& counters, metrics::UpdateLedger& ledger);

    void on_packet(const Packet& pkt);

    std::size_t buffer_occupancy() const { return held_.size(); }
    std::uint64_t next_rel_seq() const { return next_rel_seq_; }

private:
    struct HeldFragment {
        std::uint64_t update_id = 0;
        std::uint32_t frag_index = 0;
        sim::SimTime gen_time = 0;
    };

    void on_reliable_data(const Packet& pkt);
    void flush_if_threshold();
    void insert_ack_range(std::uint64_t pn);
    void send_ack();

    sim::SimEngine& engine_;
    TransportConfig cfg_;
    channel::Link& ack_link_;
    metrics::KpiCounters& counters_;
    metrics::UpdateLedger& ledger_;

    std::uint64_t next_rel_seq_ = 0;
    std::map<std::uint64_t, HeldFragment> held_; // keyed by rel_seq

    std::map<std::uint64_t, std::uint64_t> ack_ranges_; // lo -> hi, disjoint
    std::uint64_t ack_pn_ = 0;                          // server-side packet sequence
};

} // namespace relsim::transport
