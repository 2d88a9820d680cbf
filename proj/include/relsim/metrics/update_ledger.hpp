#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "relsim/metrics/aoi.hpp"
#include "relsim/metrics/kpi.hpp"
#include "relsim/sim/time.hpp"

namespace relsim::metrics {

/// Omniscient per-update assembly state. An update is delivered once
/// every fragment reached the application; it is dead (and will be
/// reported incomplete) as soon as any fragment is unreliably dropped,
/// flushed from the receive buffer, or arrives after its slot was
/// skipped. Dead updates never produce an AoI reception.
class UpdateLedger {
public:
    using DeliveryTap =
        std::function<void(std::uint64_t update_id, std::uint32_t frag_index, sim::SimTime now)>;

    UpdateLedger(KpiCounters& counters, AoiTracker& aoi) : counters_(counters), aoi_(aoi) {}

    void set_delivery_tap(DeliveryTap tap) { tap_ = std::move(tap); }

    void on_generated(std::uint64_t update_id, sim::SimTime gen_time, std::uint32_t frag_count);

    /// Marks one fragment as handed to the application; fires the AoI
    /// reception when this completes a live update.
    void on_fragment_delivered(std::uint64_t update_id, std::uint32_t frag_index,
                               sim::SimTime now);

    /// Kills the update (lost unreliable fragment, buffer discard, or
    /// stale arrival of a skipped slot).
    void on_update_dead(std::uint64_t update_id);

    bool fragment_delivered(std::uint64_t update_id, std::uint32_t frag_index) const;

    /// Counts dead updates into updates_incomplete. Call once at run end.
    void finalize();

private:
    struct UpdateState {
        sim::SimTime gen_time = 0;
        std::vector<bool> delivered;
        std::uint32_t delivered_count = 0;
        bool dead = false;
        bool completed = false;
    };

    KpiCounters& counters_;
    AoiTracker& aoi_;
    DeliveryTap tap_;
    std::unordered_map<std::uint64_t, UpdateState> updates_;
};

} // namespace relsim::metrics
