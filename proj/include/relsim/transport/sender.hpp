#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "relsim/channel/link.hpp"
#include "relsim/metrics/kpi.hpp"
#include "relsim/policy/policy.hpp"
#include "relsim/sim/alarm.hpp"
#include "relsim/sim/engine.hpp"
#include "relsim/sim/rng.hpp"
#include "relsim/transport/config.hpp"
#include "relsim/transport/congestion.hpp"
#include "relsim/transport/loss_stats.hpp"
#include "relsim/transport/packet.hpp"
#include "relsim/transport/rtt.hpp"
#include "relsim/workload/source.hpp"

namespace relsim::transport {

/// Sending endpoint: fragments updates, asks the policy for a per-packet
/// reliability verdict, runs the shared packet-number space, congestion
/// control, loss detection, retransmission of reliable data and probing.
class Sender {
public:
    Sender(sim::SimEngine& engine, const TransportConfig& cfg, channel::Link& data_link,
           policy::ReliabilityPolicy& policy, sim::RngStream policy_rng,
           metrics::KpiCounters& counters);

    /// Fragments the update, gives every fragment its verdict and queues
    /// it. Nothing is dropped at the sender: reliable fragments wait for
    /// window, unreliable for pacing tokens.
    void send_update(const workload::UpdateSpec& update);

    /// Handles an arriving ACK packet (reverse-link delivery).
    void on_ack_packet(const Packet& ack);

    const RttEstimator& rtt() const { return rtt_; }
    const LossStats& loss_stats() const { return stats_; }
    const CongestionController& congestion() const { return cc_; }
    std::uint64_t bytes_in_flight() const { return bytes_in_flight_; }

    /// Recomputes bytes_in_flight from the outstanding records and throws
    /// on mismatch. Runs at every event boundary.
    void audit_in_flight() const;

private:
    struct PendingFragment {
        std::uint64_t update_id = 0;
        std::uint32_t frag_index = 0;
        std::uint32_t frag_count = 0;
        std::uint32_t payload_bytes = 0;
        sim::SimTime gen_time = 0;
        std::optional<std::uint64_t> rel_seq; // assigned at first wire send
        std::optional<std::uint64_t> retx_of;
    };

    struct SentRecord {
        std::uint64_t pn = 0;
        std::uint64_t rel_wire_idx = 0; // index among reliable wire sends
        std::uint32_t wire_bytes = 0;
        sim::SimTime sent_at = 0;
        bool is_ping = false;
        bool acked = false;
        bool lost = false;
        PendingFragment frag; // payload for retransmission; empty for pings
    };

    void pump();
    void send_reliable(PendingFragment frag);
    void send_unreliable(const PendingFragment& frag);
    void send_ping();
    void detect_losses();
    void on_loss_alarm();
    void on_probe_alarm();
    void on_pacer_alarm();
    void arm_loss_alarm();
    void arm_probe_alarm();
    sim::SimTime probe_interval() const;
    sim::SimTime loss_time_threshold() const;
    sim::SimTime srtt_or_initial() const;
    policy::Verdict next_verdict();
    void validate_ack_ranges(const std::vector<PnRange>& ranges) const;

    sim::SimEngine& engine_;
    TransportConfig cfg_;
    channel::Link& link_;
    policy::ReliabilityPolicy& policy_;
    sim::RngStream policy_rng_;
    metrics::KpiCounters& counters_;

    RttEstimator rtt_;
    LossStats stats_;
    CongestionController cc_;
    Pacer pacer_;

    std::deque<PendingFragment> reliable_q_;
    std::deque<PendingFragment> unreliable_q_;

    std::uint64_t next_pn_ = 0;
    std::uint64_t next_rel_seq_ = 0;
    std::uint64_t rel_wire_count_ = 0;
    std::uint64_t bytes_in_flight_ = 0;

    std::map<std::uint64_t, SentRecord> records_; // reliable pns only
    std::set<std::uint64_t> outstanding_;         // unacked, not declared lost
    std::set<std::uint64_t> lost_unacked_;        // declared lost, ack still possible
    std::vector<std::uint64_t> unreliable_pns_;   // ascending, for ACK validation

    std::optional<std::uint64_t> largest_acked_pn_;
    std::uint64_t largest_acked_rel_idx_ = 0;
    std::uint64_t cc_recovery_end_pn_ = 0; // one cwnd reduction per window

    sim::SimTime last_ack_eliciting_sent_ = 0;
    bool probe_override_pending_ = false;
    // Generation position of the newest fragment in the reliable
    // substream; guards probe flips against reordering the substream.
    std::optional<std::pair<std::uint64_t, std::uint32_t>> last_rel_key_;

    sim::Alarm loss_alarm_;
    sim::Alarm probe_alarm_;
    sim::Alarm pacer_alarm_;
};

} // namespace relsim::transport
