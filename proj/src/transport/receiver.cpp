#include "relsim/transport/receiver.hpp"

#include "relsim/errors.hpp"

namespace relsim::transport {

Receiver::Receiver(sim::SimEngine& engine, const TransportConfig& cfg, channel::Link& ack_link,
                   metrics::KpiCounters& counters, metrics::UpdateLedger& ledger)
    : engine_(engine), cfg_(cfg), ack_link_(ack_link), counters_(counters), ledger_(ledger) {}

void Receiver::on_packet(const Packet& pkt) {
    switch (pkt.kind) {
    case FrameKind::UnreliableStream:
        // No ordering, no ACK: straight to the application.
        ledger_.on_fragment_delivered(pkt.update_id, pkt.frag_index, engine_.now());
        return;
    case FrameKind::ReliableStream:
        on_reliable_data(pkt);
        insert_ack_range(pkt.pn);
        send_ack();
        return;
    case FrameKind::Ping:
        insert_ack_range(pkt.pn);
        send_ack();
        return;
    case FrameKind::Ack:
        throw SimInvariantError("receiver got an ACK packet on the data direction");
    }
}

void Receiver::on_reliable_data(const Packet& pkt) {
    if (pkt.rel_seq < next_rel_seq_) {
        // Either this slot was already delivered (duplicate from a
        // spurious retransmission) or a flush skipped it (stale).
        if (ledger_.fragment_delivered(pkt.update_id, pkt.frag_index)) {
            ++counters_.duplicates;
        } else {
            ++counters_.stale_receptions;
            ledger_.on_update_dead(pkt.update_id);
        }
        return;
    }
    if (pkt.rel_seq == next_rel_seq_) {
        ledger_.on_fragment_delivered(pkt.update_id, pkt.frag_index, engine_.now());
        ++next_rel_seq_;
        auto it = held_.begin();
        while (it != held_.end() && it->first == next_rel_seq_) {
            ledger_.on_fragment_delivered(it->second.update_id, it->second.frag_index,
                                          engine_.now());
            ++next_rel_seq_;
            it = held_.erase(it);
        }
        return;
    }
    // A reliable predecessor is missing: hold for reordering.
    auto [it, inserted] =
        held_.emplace(pkt.rel_seq, HeldFragment{pkt.update_id, pkt.frag_index, pkt.gen_time});
    if (!inserted) {
        ++counters_.duplicates;
        return;
    }
    ++counters_.backlog_events;
    flush_if_threshold();
}

void Receiver::flush_if_threshold() {
    if (held_.size() < cfg_.receiver_buffer_threshold) return;
    // Occupancy reached the threshold: everything waiting is discarded
    // and the stream resumes past the highest held position.
    std::uint64_t highest = held_.rbegin()->first;
    counters_.buffer_discards += held_.size();
    for (const auto& [rel_seq, frag] : held_) ledger_.on_update_dead(frag.update_id);
    held_.clear();
    next_rel_seq_ = highest + 1;
}

void Receiver::insert_ack_range(std::uint64_t pn) {
    // Merge pn into the disjoint range set.
    auto next = ack_ranges_.upper_bound(pn);
    if (next != ack_ranges_.begin()) {
        auto prev = std::prev(next);
        if (pn <= prev->second) return; // already covered
        if (pn == prev->second + 1) {
            prev->second = pn;
            if (next != ack_ranges_.end() && next->first == pn + 1) {
                prev->second = next->second;
                ack_ranges_.erase(next);
            }
            return;
        }
    }
    if (next != ack_ranges_.end() && next->first == pn + 1) {
        auto node = ack_ranges_.extract(next);
        node.key() = pn;
        ack_ranges_.insert(std::move(node));
        return;
    }
    ack_ranges_[pn] = pn;
}

void Receiver::send_ack() {
    Packet ack;
    ack.pn = ack_pn_++;
    ack.kind = FrameKind::Ack;
    ack.reliable = false;
    ack.size_bytes = cfg_.ack_packet_bytes;
    ack.sent_at = engine_.now();

    // Newest ranges first come last: take the tail of the cumulative set.
    std::size_t take = std::min<std::size_t>(cfg_.max_ack_ranges, ack_ranges_.size());
    auto it = ack_ranges_.end();
    std::advance(it, -static_cast<std::ptrdiff_t>(take));
    for (; it != ack_ranges_.end(); ++it) ack.ack_ranges.push_back(PnRange{it->first, it->second});

    ++counters_.acks_sent;
    ack_link_.transmit(ack);
}

} // namespace relsim::transport
