#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "relsim/channel/link.hpp"
#include "relsim/errors.hpp"
#include "relsim/metrics/aoi.hpp"
#include "relsim/metrics/kpi.hpp"
#include "relsim/metrics/update_ledger.hpp"
#include "relsim/policy/policy.hpp"
#include "relsim/sim/engine.hpp"
#include "relsim/transport/receiver.hpp"
#include "relsim/transport/sender.hpp"
#include "relsim/workload/source.hpp"

using namespace relsim;
using channel::LinkProfile;
using channel::RandomLoss;
using transport::FrameKind;
using transport::Packet;
using transport::TransportConfig;

namespace {

/// Deterministic policy replaying a fixed verdict pattern (cycled).
class ScriptedPolicy final : public policy::ReliabilityPolicy {
public:
    explicit ScriptedPolicy(std::vector<policy::Verdict> pattern)
        : pattern_(std::move(pattern)) {}
    policy::Verdict decide(const policy::PolicyContext&, sim::RngStream&) override {
        return pattern_[next_++ % pattern_.size()];
    }
    std::string_view name() const override { return "scripted"; }

private:
    std::vector<policy::Verdict> pattern_;
    std::size_t next_ = 0;
};

constexpr auto R = policy::Verdict::Reliable;
constexpr auto U = policy::Verdict::Unreliable;

/// Miniature session: one sender, one receiver, two lossless-by-default
/// links, full wire and delivery logs.
struct Rig {
    sim::SimEngine eng;
    metrics::KpiCounters k;
    metrics::AoiTracker aoi;
    metrics::UpdateLedger ledger{k, aoi};
    channel::Link data;
    channel::Link ack;
    transport::Receiver recv;
    transport::Sender snd;

    struct WireEntry {
        Packet pkt;
        bool dropped;
    };
    std::vector<WireEntry> wire;   // data direction
    std::vector<Packet> acks_seen; // ack direction (submitted)
    std::vector<std::pair<std::uint64_t, std::uint32_t>> delivered;

    TransportConfig cfg;

    Rig(policy::ReliabilityPolicy& pol, TransportConfig config = {},
        LinkProfile profile = LinkProfile{100e6, 5'000, 0, RandomLoss{0.0}},
        std::uint64_t seed = 1)
        : data(eng, profile, sim::RngStream(seed, "link.data.loss"),
               sim::RngStream(seed, "link.data.jitter")),
          ack(eng, profile, sim::RngStream(seed, "link.ack.loss"),
              sim::RngStream(seed, "link.ack.jitter")),
          recv(eng, config, ack, k, ledger),
          snd(eng, config, data, pol, sim::RngStream(seed, "policy"), k),
          cfg(config) {
        data.set_deliver_handler([this](const Packet& p) { recv.on_packet(p); });
        ack.set_deliver_handler([this](const Packet& p) { snd.on_ack_packet(p); });
        data.set_drop_handler([this](const Packet& p) {
            if (p.kind == FrameKind::UnreliableStream) ledger.on_update_dead(p.update_id);
        });
        data.set_tap(
            [this](const Packet& p, bool dropped) { wire.push_back(WireEntry{p, dropped}); });
        ack.set_tap([this](const Packet& p, bool) { acks_seen.push_back(p); });
        ledger.set_delivery_tap([this](std::uint64_t id, std::uint32_t frag, sim::SimTime) {
            delivered.emplace_back(id, frag);
        });
    }

    void feed(std::uint64_t id, sim::SimTime gen_time, std::uint32_t size_bytes) {
        eng.schedule_at(gen_time, [this, id, gen_time, size_bytes] {
            auto frags = workload::fragment_sizes(size_bytes, cfg.mtu_payload_bytes);
            ledger.on_generated(id, gen_time, static_cast<std::uint32_t>(frags.size()));
            snd.send_update(workload::UpdateSpec{id, gen_time, size_bytes});
        });
    }
};

/// Probing disabled: walk-through tests about the data path only.
TransportConfig no_probe() {
    TransportConfig cfg;
    cfg.min_probe_interval_us = 1'000 * sim::kUsPerSec;
    return cfg;
}

} // namespace

TEST_CASE("a 17000-byte update fragments into 15 packets on the wire") {
    auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
    Rig rig(*vanilla, no_probe());
    rig.feed(0, 0, 17'000);
    rig.eng.run_until(sim::kUsPerSec);

    REQUIRE(rig.wire.size() == 15);
    for (std::size_t i = 0; i + 1 < rig.wire.size(); ++i) {
        CHECK(rig.wire[i].pkt.size_bytes == 1'230); // 1200 payload + 30 header
    }
    CHECK(rig.wire.back().pkt.size_bytes == 230); // 200 + header
    CHECK(rig.k.data_packets_sent == 15);
    CHECK(rig.k.updates_delivered == 1);
}

TEST_CASE("vanilla marks every wire packet reliable") {
    auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
    Rig rig(*vanilla, no_probe());
    for (std::uint64_t i = 0; i < 20; ++i) rig.feed(i, i * 1'000, 3'000);
    rig.eng.run_until(sim::kUsPerSec);
    for (const auto& e : rig.wire) {
        CHECK(e.pkt.reliable);
        CHECK(e.pkt.kind == FrameKind::ReliableStream);
    }
    CHECK(rig.k.unreliable_data_packets == 0);
}

TEST_CASE("all-unreliable with probing disabled sends zero ack-eliciting packets") {
    ScriptedPolicy never_reliable({U});
    TransportConfig cfg;
    cfg.min_probe_interval_us = 1'000 * sim::kUsPerSec; // probe never fires
    Rig rig(never_reliable, cfg);
    for (std::uint64_t i = 0; i < 20; ++i) rig.feed(i, i * 1'000, 3'000);
    rig.eng.run_until(10 * sim::kUsPerSec);

    CHECK(rig.k.reliable_data_packets == 0);
    CHECK(rig.k.acks_sent == 0);
    CHECK(rig.k.pings_sent == 0);
    CHECK(rig.acks_seen.empty());
    CHECK(rig.k.data_packets_sent == 60); // 20 updates x 3 fragments, paced out
    CHECK(rig.k.updates_delivered == 20);
}

TEST_CASE("in-order reliable arrivals deliver without backlog") {
    auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
    Rig rig(*vanilla, no_probe());
    for (std::uint64_t i = 0; i < 3; ++i) rig.feed(i, i * 100, 1'000);
    rig.eng.run_until(sim::kUsPerSec);
    CHECK(rig.k.updates_delivered == 3);
    CHECK(rig.k.backlog_events == 0);
    CHECK(rig.k.acks_sent == 3);
    CHECK(rig.delivered ==
          std::vector<std::pair<std::uint64_t, std::uint32_t>>{{0, 0}, {1, 0}, {2, 0}});
}

TEST_CASE("a reliable gap holds later packets and the retransmission heals it") {
    auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
    TransportConfig cfg;
    Rig rig(*vanilla, cfg);
    // Drop the second data packet's first transmission only.
    rig.data.set_drop_override(
        [](const Packet& p) -> std::optional<bool> { return p.pn == 1 && !p.retx_of; });
    for (std::uint64_t i = 0; i < 6; ++i) rig.feed(i, i * 200, 1'000);
    rig.eng.run_until(sim::kUsPerSec);

    CHECK(rig.k.backlog_events >= 1); // pn 2 arrived while pn 1 was missing
    CHECK(rig.k.retransmissions == 1);
    CHECK(rig.k.sender_detected_losses == 1);
    CHECK(rig.k.updates_delivered == 6);
    CHECK(rig.k.updates_incomplete == 0);
    // Application order is still generation order.
    auto sorted = rig.delivered;
    std::sort(sorted.begin(), sorted.end());
    CHECK(rig.delivered == sorted);
}

TEST_CASE("unreliable packet-number gaps do not stall the reliable stream") {
    ScriptedPolicy pattern({R, U, R});
    Rig rig(pattern, no_probe());
    for (std::uint64_t i = 0; i < 3; ++i) rig.feed(i, i * 100, 1'000);
    rig.eng.run_until(sim::kUsPerSec);

    // All three delivered, nothing ever waited for the unreliable pn.
    CHECK(rig.k.updates_delivered == 3);
    CHECK(rig.k.backlog_events == 0);
    CHECK(rig.k.acks_sent == 2); // only the two reliable receptions

    // No ACK range may name the unreliable pn (pn 1).
    for (const Packet& ack : rig.acks_seen) {
        for (const auto& range : ack.ack_ranges) {
            CHECK_FALSE((range.lo <= 1 && 1 <= range.hi));
        }
    }
}

TEST_CASE("unreliable losses are invisible to the sender and never resent") {
    ScriptedPolicy never_reliable({U});
    TransportConfig cfg;
    cfg.min_probe_interval_us = 1'000 * sim::kUsPerSec;
    Rig rig(never_reliable, cfg);
    rig.data.set_drop_override([](const Packet& p) -> std::optional<bool> {
        return p.pn == 0; // kill the very first packet
    });
    for (std::uint64_t i = 0; i < 3; ++i) rig.feed(i, i * 100, 1'000);
    rig.eng.run_until(sim::kUsPerSec);

    CHECK(rig.k.retransmissions == 0);
    CHECK(rig.k.sender_detected_losses == 0);
    CHECK(rig.data.counters().dropped_unreliable == 1);
    CHECK(rig.k.updates_delivered == 2);
    rig.ledger.finalize();
    CHECK(rig.k.updates_incomplete == 1);
}

TEST_CASE("packet-threshold loss detection counts only reliable pns in the gap") {
    SUBCASE("three reliable packets past the hole declare it lost") {
        auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
        Rig rig(*vanilla);
        rig.data.set_drop_override(
            [](const Packet& p) -> std::optional<bool> { return p.pn == 0 && !p.retx_of; });
        for (std::uint64_t i = 0; i < 4; ++i) rig.feed(i, i * 100, 1'000);
        rig.eng.run_until(60'000); // ~3 RTT: enough for acks, well before timeouts

        CHECK(rig.k.sender_detected_losses == 1);
        CHECK(rig.k.retransmissions == 1);
        CHECK(rig.k.spurious_acks == 0);
        // The retransmission left promptly, long before the 9/8 RTT timer
        // (first ack lands ~10.1 ms in; the cold timer would be ~112 ms).
        const auto retx = std::find_if(rig.wire.begin(), rig.wire.end(),
                                       [](const auto& e) { return e.pkt.retx_of.has_value(); });
        REQUIRE(retx != rig.wire.end());
        CHECK(retx->pkt.sent_at < 20'000);
        CHECK(*retx->pkt.retx_of == 0);
    }
    SUBCASE("unreliable pns in the gap do not count towards the threshold") {
        ScriptedPolicy pattern({R, U, U, R, R});
        TransportConfig cfg;
        cfg.min_probe_interval_us = 1'000 * sim::kUsPerSec;
        cfg.time_threshold_num = 9'000'000; // reorder rule only in this test
        Rig rig(pattern, cfg);
        rig.data.set_drop_override(
            [](const Packet& p) -> std::optional<bool> { return p.pn == 0 && !p.retx_of; });
        for (std::uint64_t i = 0; i < 5; ++i) rig.feed(i, i * 100, 1'000);
        rig.eng.run_until(60'000);

        // pns: 0(R, dropped) 1(U) 2(U) 3(R) 4(R); acks for 3 and 4 give a
        // reliable gap of 2 < 3, so the hole is not declared lost.
        CHECK(rig.k.sender_detected_losses == 0);
        CHECK(rig.k.retransmissions == 0);
        CHECK(rig.k.backlog_events == 2); // the two held reliable successors
        CHECK(rig.k.updates_delivered == 2); // the unreliable pair went through
    }
}

TEST_CASE("buffer threshold flush walks exactly as specified") {
    auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
    TransportConfig cfg;
    cfg.receiver_buffer_threshold = 4;
    Rig rig(*vanilla, cfg);
    // Updates 2 and 3 never get through, so their successors pile up.
    rig.data.set_drop_override([](const Packet& p) -> std::optional<bool> {
        return p.update_id == 2 || p.update_id == 3;
    });
    for (std::uint64_t i = 0; i < 10; ++i) rig.feed(i, i * 100, 1'000);
    rig.eng.run_until(sim::kUsPerSec);

    // rel_seqs 0,1 delivered; 4,5,6 held; 7 arrives -> occupancy 4 -> flush,
    // next expected jumps to 8.
    CHECK(rig.k.buffer_discards == 4);
    CHECK(rig.k.backlog_events >= 4);
    CHECK(rig.recv.next_rel_seq() >= 8);
    rig.ledger.finalize();
    CHECK(rig.k.updates_incomplete >= 4); // the four flushed updates died
    // Updates 8 and 9 resumed normal delivery after the jump.
    std::set<std::uint64_t> completed;
    for (const auto& [id, frag] : rig.delivered) completed.insert(id);
    CHECK(completed.count(8) == 1);
    CHECK(completed.count(9) == 1);
    // Discarded fragments produced no AoI receptions: only 0,1 then 8,9.
    CHECK(rig.aoi.size() == 4);
}

TEST_CASE("in-order traffic never trips the threshold") {
    auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
    TransportConfig cfg;
    cfg.receiver_buffer_threshold = 64;
    Rig rig(*vanilla, cfg);
    for (std::uint64_t i = 0; i < 100; ++i) rig.feed(i, i * 500, 2'500);
    rig.eng.run_until(sim::kUsPerSec);
    CHECK(rig.k.buffer_discards == 0);
    CHECK(rig.k.backlog_events == 0);
    CHECK(rig.k.updates_delivered == 100);
}

TEST_CASE("probing keeps measurements alive under an all-unreliable policy") {
    ScriptedPolicy never_reliable({U});
    Rig rig(never_reliable); // default 40 ms probe floor
    for (std::uint64_t i = 0; i < 200; ++i) rig.feed(i, i * 2'000, 1'000);
    rig.eng.run_until(500 * sim::kUsPerMs);

    // Probe overrides forced some packets into the reliable class, so the
    // sender did get RTT samples.
    CHECK(rig.k.probe_overrides > 0);
    CHECK(rig.k.reliable_data_packets > 0);
    CHECK(rig.k.acks_sent > 0);
    CHECK(rig.snd.rtt().has_sample());

    // During active sending, ack-eliciting sends appear at least every
    // probe interval (40 ms floor here, rtt ~10.2 ms).
    std::vector<sim::SimTime> reliable_sends;
    for (const auto& e : rig.wire) {
        if (e.pkt.reliable) reliable_sends.push_back(e.pkt.sent_at);
    }
    REQUIRE(reliable_sends.size() >= 5);
    for (std::size_t i = 0; i + 1 < reliable_sends.size(); ++i) {
        CHECK(reliable_sends[i + 1] - reliable_sends[i] <= 45'000);
    }
}

TEST_CASE("vanilla never needs probe overrides") {
    auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
    Rig rig(*vanilla);
    for (std::uint64_t i = 0; i < 50; ++i) rig.feed(i, i * 2'000, 1'000);
    rig.eng.run_until(200 * sim::kUsPerMs);
    CHECK(rig.k.probe_overrides == 0);
}

TEST_CASE("an idle sender pings every probe interval and re-arms") {
    auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
    Rig rig(*vanilla);
    rig.feed(0, 0, 1'000);
    rig.eng.run_until(500 * sim::kUsPerMs); // long idle tail
    CHECK(rig.k.pings_sent >= 2);
    for (const auto& e : rig.wire) {
        if (e.pkt.kind == FrameKind::Ping) CHECK(e.pkt.size_bytes == 40);
    }
}

TEST_CASE("late acks after a loss declaration are spurious: counted, ignored by cc") {
    auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
    Rig rig(*vanilla, no_probe());
    rig.ack.set_drop_override([](const Packet&) -> std::optional<bool> { return true; });
    for (std::uint64_t i = 0; i < 5; ++i) rig.feed(i, i * 100, 1'000);
    rig.eng.run_until(50'000); // all data delivered, every real ack dropped

    // A crafted ACK for pns 2..4 only: the reliable gap of 4 declares
    // pns 0 and 1 lost even though they arrived.
    Packet partial;
    partial.kind = FrameKind::Ack;
    partial.size_bytes = 40;
    partial.ack_ranges = {transport::PnRange{2, 4}};
    rig.snd.on_ack_packet(partial);
    CHECK(rig.k.sender_detected_losses == 2);
    double cwnd_after_loss = rig.snd.congestion().cwnd_bytes();

    // Their late coverage arrives afterwards: spurious, no cc change.
    Packet late;
    late.kind = FrameKind::Ack;
    late.size_bytes = 40;
    late.ack_ranges = {transport::PnRange{0, 4}};
    rig.snd.on_ack_packet(late);
    CHECK(rig.k.spurious_acks == 2);
    CHECK(rig.snd.congestion().cwnd_bytes() == cwnd_after_loss);
    CHECK(rig.snd.loss_stats().reliable_acked == 5);

    // The needless retransmissions land as duplicates, delivered once.
    rig.eng.run_until(200'000);
    CHECK(rig.k.duplicates == 2);
    CHECK(rig.k.updates_delivered == 5);
    auto unique = rig.delivered;
    std::sort(unique.begin(), unique.end());
    CHECK(std::adjacent_find(unique.begin(), unique.end()) == unique.end());
}

TEST_CASE("an ack naming an unreliable pn is a protocol violation") {
    ScriptedPolicy pattern({R, U});
    Rig rig(pattern, no_probe());
    for (std::uint64_t i = 0; i < 2; ++i) rig.feed(i, i * 100, 1'000);
    rig.eng.run_until(50'000); // pn 0 reliable, pn 1 unreliable

    Packet bogus;
    bogus.kind = FrameKind::Ack;
    bogus.size_bytes = 40;
    bogus.ack_ranges = {transport::PnRange{0, 1}};
    CHECK_THROWS_AS(rig.snd.on_ack_packet(bogus), SimInvariantError);

    Packet unsent;
    unsent.kind = FrameKind::Ack;
    unsent.size_bytes = 40;
    unsent.ack_ranges = {transport::PnRange{90, 99}};
    CHECK_THROWS_AS(rig.snd.on_ack_packet(unsent), SimInvariantError);
}

TEST_CASE("wire packet numbers are strictly increasing") {
    auto naive = policy::make_policy(policy::PolicyConfig{"naive", {}, {}, {}});
    Rig rig(*naive);
    for (std::uint64_t i = 0; i < 40; ++i) rig.feed(i, i * 1'000, 5'000);
    rig.eng.run_until(sim::kUsPerSec);
    REQUIRE(rig.wire.size() > 10);
    for (std::size_t i = 0; i + 1 < rig.wire.size(); ++i) {
        CHECK(rig.wire[i + 1].pkt.pn > rig.wire[i].pkt.pn);
    }
}

TEST_CASE("bytes in flight audit holds under load with losses") {
    auto vanilla = policy::make_policy(policy::PolicyConfig{"vanilla", {}, {}, {}});
    Rig rig(*vanilla, TransportConfig{}, LinkProfile{30e6, 10'000, 2'000, RandomLoss{0.02}}, 9);
    for (std::uint64_t i = 0; i < 100; ++i) rig.feed(i, i * 1'000, 8'000);
    rig.eng.run_until(2 * sim::kUsPerSec);
    rig.snd.audit_in_flight(); // throws on any accounting drift
    CHECK(rig.k.updates_delivered > 20);
}
