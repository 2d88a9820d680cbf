#include "relsim/runner/session.hpp"

#include <functional>
#include <string>

#include "relsim/errors.hpp"
#include "relsim/metrics/aoi.hpp"
#include "relsim/sim/engine.hpp"
#include "relsim/sim/rng.hpp"
#include "relsim/transport/receiver.hpp"
#include "relsim/transport/sender.hpp"
#include "relsim/workload/source.hpp"

namespace relsim::runner {

RunResult run_session(const ResolvedScenario& sc, std::uint64_t seed, const RunHooks* hooks) {
    sim::SimEngine engine;
    metrics::KpiCounters k;
    metrics::AoiTracker aoi;
    metrics::UpdateLedger ledger(k, aoi);

    channel::Link data_link(engine, sc.link, sim::RngStream(seed, "link.data.loss"),
                            sim::RngStream(seed, "link.data.jitter"));
    channel::Link ack_link(engine, sc.link, sim::RngStream(seed, "link.ack.loss"),
                           sim::RngStream(seed, "link.ack.jitter"));

    auto policy = policy::make_policy(sc.policy);
    transport::Receiver receiver(engine, sc.transport, ack_link, k, ledger);
    transport::Sender sender(engine, sc.transport, data_link, *policy,
                             sim::RngStream(seed, "policy"), k);

    data_link.set_deliver_handler([&](const transport::Packet& p) { receiver.on_packet(p); });
    ack_link.set_deliver_handler([&](const transport::Packet& p) { sender.on_ack_packet(p); });
    data_link.set_drop_handler([&](const transport::Packet& p) {
        // An unreliable fragment dropped on the channel will never be
        // resent; its update can no longer complete.
        if (p.kind == transport::FrameKind::UnreliableStream) ledger.on_update_dead(p.update_id);
    });

    if (hooks) {
        if (hooks->data_tap) data_link.set_tap(hooks->data_tap);
        if (hooks->ack_tap) ack_link.set_tap(hooks->ack_tap);
        if (hooks->data_drop_override) data_link.set_drop_override(hooks->data_drop_override);
        if (hooks->delivery_tap) ledger.set_delivery_tap(hooks->delivery_tap);
    }

    // The source is clocked: every update is scheduled up front at its
    // generation time, whatever the transport backlog looks like.
    workload::UpdateSource source(sc.workload, sim::RngStream(seed, "workload"));
    while (auto update = source.next()) {
        const workload::UpdateSpec u = *update;
        engine.schedule_at(u.gen_time, [&engine, &ledger, &sender, &sc, u] {
            auto frags = workload::fragment_sizes(u.size_bytes, sc.transport.mtu_payload_bytes);
            ledger.on_generated(u.update_id, u.gen_time, static_cast<std::uint32_t>(frags.size()));
            sender.send_update(u);
        });
    }

    // Receive-buffer occupancy diagnostic, sampled every 10 ms.
    std::function<void()> sample_occupancy = [&] {
        k.peak_buffer_occupancy =
            std::max<std::uint64_t>(k.peak_buffer_occupancy, receiver.buffer_occupancy());
        engine.schedule_in(10 * sim::kUsPerMs, sample_occupancy);
    };
    engine.schedule_at(0, sample_occupancy);

    engine.run_until(sim::from_seconds(sc.duration_s));

    ledger.finalize();
    sender.audit_in_flight();

    k.drops_reliable = data_link.counters().dropped_reliable;
    k.drops_unreliable = data_link.counters().dropped_unreliable;
    k.drops_ack = ack_link.counters().dropped_ack;

    // Conservation: everything the endpoints sent went to a channel once.
    std::uint64_t submitted = data_link.counters().submitted + ack_link.counters().submitted;
    if (k.session_packet_volume() != submitted) {
        throw SimInvariantError("session packet volume " +
                                std::to_string(k.session_packet_volume()) +
                                " != channel submissions " + std::to_string(submitted));
    }

    RunResult row;
    row.scenario_id = sc.scenario_id;
    row.policy = sc.policy_label;
    row.link = sc.link_name;
    row.loss_kind = sc.loss_kind;
    row.loss_param = sc.loss_param;
    row.seed = seed;
    row.duration_s = sc.duration_s;
    row.k = k;
    row.peak_aoi_us = aoi.time_average_peak_us();
    row.reliable_fraction = k.reliable_fraction();
    return row;
}

} // namespace relsim::runner
