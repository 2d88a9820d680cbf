#include "relsim/transport/sender.hpp"

#include <algorithm>
#include <string>

#include "relsim/errors.hpp"

namespace relsim::transport {

Sender::Sender(sim::SimEngine& engine, const TransportConfig& cfg, channel::Link& data_link,
               policy::ReliabilityPolicy& policy, sim::RngStream policy_rng,
               metrics::KpiCounters& counters)
    : engine_(engine),
      cfg_(cfg),
      link_(data_link),
      policy_(policy),
      policy_rng_(std::move(policy_rng)),
      counters_(counters),
      cc_(cfg),
      pacer_(cfg),
      loss_alarm_(engine, [this] { on_loss_alarm(); }),
      probe_alarm_(engine, [this] { on_probe_alarm(); }),
      pacer_alarm_(engine, [this] { on_pacer_alarm(); }) {
    arm_probe_alarm();
}

sim::SimTime Sender::srtt_or_initial() const {
    return rtt_.has_sample() ? rtt_.srtt() : cfg_.initial_rtt_us;
}

sim::SimTime Sender::probe_interval() const {
    if (!rtt_.has_sample()) return cfg_.min_probe_interval_us;
    return std::max<sim::SimTime>(2 * rtt_.srtt(), cfg_.min_probe_interval_us);
}

sim::SimTime Sender::loss_time_threshold() const {
    sim::SimTime base =
        rtt_.has_sample() ? std::max(rtt_.srtt(), rtt_.latest()) : cfg_.initial_rtt_us;
    return base * cfg_.time_threshold_num / cfg_.time_threshold_den;
}

policy::Verdict Sender::next_verdict() {
    if (probe_override_pending_) {
        probe_override_pending_ = false;
        ++counters_.probe_overrides;
        return policy::Verdict::Reliable;
    }
    policy::PolicyContext ctx{rtt_, stats_, engine_.now()};
    return policy_.decide(ctx, policy_rng_);
}

void Sender::send_update(const workload::UpdateSpec& update) {
    auto sizes = workload::fragment_sizes(update.size_bytes, cfg_.mtu_payload_bytes);
    auto count = static_cast<std::uint32_t>(sizes.size());
    for (std::uint32_t i = 0; i < count; ++i) {
        PendingFragment frag;
        frag.update_id = update.update_id;
        frag.frag_index = i;
        frag.frag_count = count;
        frag.payload_bytes = sizes[i];
        frag.gen_time = update.gen_time;
        if (next_verdict() == policy::Verdict::Reliable) {
            reliable_q_.push_back(frag);
        } else {
            unreliable_q_.push_back(frag);
        }
    }
    pump();
    audit_in_flight();
}

void Sender::pump() {
    while (!reliable_q_.empty() && cc_.can_send(bytes_in_flight_)) {
        PendingFragment frag = reliable_q_.front();
        reliable_q_.pop_front();
        send_reliable(std::move(frag));
    }
    if (unreliable_q_.empty()) return;
    pacer_.refill(engine_.now(), cc_.cwnd_bytes(), srtt_or_initial());
    while (!unreliable_q_.empty() && pacer_.can_send()) {
        send_unreliable(unreliable_q_.front());
        unreliable_q_.pop_front();
    }
    if (!unreliable_q_.empty()) {
        pacer_alarm_.set(engine_.now() +
                         pacer_.next_send_delay(cc_.cwnd_bytes(), srtt_or_initial()));
    }
}

void Sender::send_reliable(PendingFragment frag) {
    if (!frag.rel_seq) {
        frag.rel_seq = next_rel_seq_++;
        last_rel_key_ = {frag.update_id, frag.frag_index};
    }

    Packet pkt;
    pkt.pn = next_pn_++;
    pkt.kind = FrameKind::ReliableStream;
    pkt.reliable = true;
    pkt.size_bytes = cfg_.wire_size(frag.payload_bytes);
    pkt.sent_at = engine_.now();
    pkt.update_id = frag.update_id;
    pkt.frag_index = frag.frag_index;
    pkt.frag_count = frag.frag_count;
    pkt.payload_bytes = frag.payload_bytes;
    pkt.gen_time = frag.gen_time;
    pkt.rel_seq = *frag.rel_seq;
    pkt.retx_of = frag.retx_of;

    SentRecord rec;
    rec.pn = pkt.pn;
    rec.rel_wire_idx = rel_wire_count_++;
    rec.wire_bytes = pkt.size_bytes;
    rec.sent_at = pkt.sent_at;
    rec.frag = frag;
    records_.emplace(pkt.pn, rec);
    outstanding_.insert(pkt.pn);

    bytes_in_flight_ += pkt.size_bytes;
    ++stats_.packets_sent_total;
    if (frag.retx_of) {
        ++counters_.retransmissions;
    } else {
        ++counters_.data_packets_sent;
        ++counters_.reliable_data_packets;
    }
    last_ack_eliciting_sent_ = engine_.now();

    link_.transmit(pkt);
    arm_loss_alarm();
    arm_probe_alarm();
}

void Sender::send_unreliable(const PendingFragment& frag) {
    Packet pkt;
    pkt.pn = next_pn_++;
    pkt.kind = FrameKind::UnreliableStream;
    pkt.reliable = false;
    pkt.size_bytes = cfg_.wire_size(frag.payload_bytes);
    pkt.sent_at = engine_.now();
    pkt.update_id = frag.update_id;
    pkt.frag_index = frag.frag_index;
    pkt.frag_count = frag.frag_count;
    pkt.payload_bytes = frag.payload_bytes;
    pkt.gen_time = frag.gen_time;

    unreliable_pns_.push_back(pkt.pn);
    ++stats_.packets_sent_total;
    ++stats_.packets_sent_unreliable;
    ++counters_.data_packets_sent;
    ++counters_.unreliable_data_packets;
    pacer_.on_sent(pkt.size_bytes);

    link_.transmit(pkt);
}

void Sender::send_ping() {
    Packet pkt;
    pkt.pn = next_pn_++;
    pkt.kind = FrameKind::Ping;
    pkt.reliable = true;
    pkt.size_bytes = cfg_.ping_packet_bytes;
    pkt.sent_at = engine_.now();

    SentRecord rec;
    rec.pn = pkt.pn;
    rec.rel_wire_idx = rel_wire_count_++;
    rec.wire_bytes = pkt.size_bytes;
    rec.sent_at = pkt.sent_at;
    rec.is_ping = true;
    records_.emplace(pkt.pn, rec);
    outstanding_.insert(pkt.pn);

    bytes_in_flight_ += pkt.size_bytes;
    ++stats_.packets_sent_total;
    ++counters_.pings_sent;
    last_ack_eliciting_sent_ = engine_.now();

    link_.transmit(pkt);
    arm_loss_alarm();
    arm_probe_alarm();
}

void Sender::validate_ack_ranges(const std::vector<PnRange>& ranges) const {
    for (const PnRange& r : ranges) {
        if (r.lo > r.hi || r.hi >= next_pn_) {
            throw SimInvariantError("ACK names pn " + std::to_string(r.hi) +
                                    " that was never sent");
        }
        // Any overlap with the unreliable pn list is a protocol violation:
        // unreliable packets must never be acknowledged.
        auto it = std::lower_bound(unreliable_pns_.begin(), unreliable_pns_.end(), r.lo);
        if (it != unreliable_pns_.end() && *it <= r.hi) {
            throw SimInvariantError("ACK range contains unreliable pn " + std::to_string(*it));
        }
    }
}

void Sender::on_ack_packet(const Packet& ack) {
    if (ack.kind != FrameKind::Ack) {
        throw SimInvariantError("sender received a non-ACK packet");
    }
    validate_ack_ranges(ack.ack_ranges);
    sim::SimTime now = engine_.now();

    std::vector<std::uint64_t> newly_acked;
    std::vector<std::uint64_t> spurious;
    for (const PnRange& r : ack.ack_ranges) {
        for (auto it = outstanding_.lower_bound(r.lo); it != outstanding_.end() && *it <= r.hi;
             ++it) {
            newly_acked.push_back(*it);
        }
        for (auto it = lost_unacked_.lower_bound(r.lo); it != lost_unacked_.end() && *it <= r.hi;
             ++it) {
            spurious.push_back(*it);
        }
    }

    for (std::uint64_t pn : spurious) {
        // Late ACK after loss declaration: counted for the loss estimate,
        // ignored for congestion control and RTT.
        SentRecord& rec = records_.at(pn);
        rec.acked = true;
        ++stats_.reliable_acked;
        ++counters_.spurious_acks;
        lost_unacked_.erase(pn);
    }

    std::uint64_t acked_bytes = 0;
    for (std::uint64_t pn : newly_acked) {
        SentRecord& rec = records_.at(pn);
        rec.acked = true;
        bytes_in_flight_ -= rec.wire_bytes;
        acked_bytes += rec.wire_bytes;
        ++stats_.reliable_acked;
        outstanding_.erase(pn);
    }

    if (!newly_acked.empty()) {
        std::uint64_t largest = newly_acked.back();
        const SentRecord& rec = records_.at(largest);
        if (!largest_acked_pn_ || largest > *largest_acked_pn_) {
            largest_acked_pn_ = largest;
            largest_acked_rel_idx_ = rec.rel_wire_idx;
        }
        rtt_.on_sample(now - rec.sent_at);
        cc_.on_acked(acked_bytes);
    }

    policy_.on_ack(stats_);
    detect_losses();
    pump();
    audit_in_flight();
}

void Sender::detect_losses() {
    sim::SimTime now = engine_.now();
    sim::SimTime threshold = loss_time_threshold();

    // Only packets older than the largest acknowledged one are eligible:
    // later acknowledgments are the evidence of loss. The stalled-tail
    // case (no acknowledgments coming at all) is the probe alarm's job.
    std::vector<std::uint64_t> lost;
    for (std::uint64_t pn : outstanding_) {
        if (!largest_acked_pn_ || pn >= *largest_acked_pn_) break;
        const SentRecord& rec = records_.at(pn);
        bool by_reorder =
            largest_acked_rel_idx_ - rec.rel_wire_idx >= cfg_.reorder_packet_threshold;
        bool by_time = now > rec.sent_at + threshold;
        if (by_reorder || by_time) lost.push_back(pn);
    }

    bool congestion_event = false;
    for (std::uint64_t pn : lost) {
        SentRecord& rec = records_.at(pn);
        rec.lost = true;
        outstanding_.erase(pn);
        lost_unacked_.insert(pn);
        bytes_in_flight_ -= rec.wire_bytes;
        ++counters_.sender_detected_losses;
        if (pn >= cc_recovery_end_pn_) congestion_event = true;
    }
    if (congestion_event) {
        cc_.on_congestion_event();
        cc_recovery_end_pn_ = next_pn_;
    }

    // Reliable payloads go back out first; pings have nothing to resend.
    for (auto it = lost.rbegin(); it != lost.rend(); ++it) {
        SentRecord& rec = records_.at(*it);
        if (rec.is_ping) continue;
        PendingFragment again = rec.frag;
        again.retx_of = rec.pn;
        reliable_q_.push_front(again);
    }

    arm_loss_alarm();
}

void Sender::arm_loss_alarm() {
    // The oldest outstanding packet below the largest acked drives the
    // time-threshold re-check.
    if (!outstanding_.empty() && largest_acked_pn_ &&
        *outstanding_.begin() < *largest_acked_pn_) {
        const SentRecord& oldest = records_.at(*outstanding_.begin());
        loss_alarm_.set(oldest.sent_at + loss_time_threshold() + 1);
    } else {
        loss_alarm_.cancel();
    }
}

void Sender::on_loss_alarm() {
    detect_losses();
    pump();
    audit_in_flight();
}

void Sender::arm_probe_alarm() {
    sim::SimTime due = last_ack_eliciting_sent_ + probe_interval();
    if (due <= engine_.now()) due = engine_.now() + probe_interval();
    probe_alarm_.set(due);
}

void Sender::on_probe_alarm() {
    // Nothing ack-eliciting left the sender for a whole probe interval.
    if (reliable_q_.empty() && !unreliable_q_.empty()) {
        const PendingFragment& head = unreliable_q_.front();
        std::pair<std::uint64_t, std::uint32_t> key{head.update_id, head.frag_index};
        if (!last_rel_key_ || key > *last_rel_key_) {
            // Safe to pull the head into the reliable substream without
            // reordering it against fragments already sent reliably.
            PendingFragment frag = unreliable_q_.front();
            unreliable_q_.pop_front();
            ++counters_.probe_overrides;
            reliable_q_.push_front(frag);
            pump();
        } else {
            probe_override_pending_ = true;
        }
    } else if (reliable_q_.empty() && unreliable_q_.empty()) {
        send_ping();
    } else if (!reliable_q_.empty() && !cc_.can_send(bytes_in_flight_)) {
        // Reliable data is stuck behind a window full of unacknowledged
        // packets and no feedback is arriving. A ping bypasses the window
        // and elicits the cumulative ACK that unblocks loss detection.
        send_ping();
    } else {
        // Reliable data is pending and moving; the next fresh fragment is
        // forced reliable as well.
        probe_override_pending_ = true;
    }
    arm_probe_alarm();
    audit_in_flight();
}

void Sender::on_pacer_alarm() {
    pump();
    audit_in_flight();
}

void Sender::audit_in_flight() const {
    std::uint64_t sum = 0;
    for (std::uint64_t pn : outstanding_) sum += records_.at(pn).wire_bytes;
    if (sum != bytes_in_flight_) {
        throw SimInvariantError("bytes_in_flight " + std::to_string(bytes_in_flight_) +
                                " != outstanding sum " + std::to_string(sum));
    }
}

} // namespace relsim::transport
