#include "relsim/metrics/update_ledger.hpp"

#include "relsim/errors.hpp"

namespace relsim::metrics {

void UpdateLedger::on_generated(std::uint64_t update_id, sim::SimTime gen_time,
                                std::uint32_t frag_count) {
    UpdateState state;
    state.gen_time = gen_time;
    state.delivered.assign(frag_count, false);
    auto [it, inserted] = updates_.emplace(update_id, std::move(state));
    if (!inserted) throw SimInvariantError("UpdateLedger: duplicate update id");
    ++counters_.updates_generated;
}

void UpdateLedger::on_fragment_delivered(std::uint64_t update_id, std::uint32_t frag_index,
                                         sim::SimTime now) {
    auto it = updates_.find(update_id);
    if (it == updates_.end()) throw SimInvariantError("UpdateLedger: delivery of unknown update");
    UpdateState& u = it->second;
    if (frag_index >= u.delivered.size() || u.delivered[frag_index]) {
        throw SimInvariantError("UpdateLedger: fragment delivered twice or out of range");
    }
    u.delivered[frag_index] = true;
    ++u.delivered_count;
    if (tap_) tap_(update_id, frag_index, now);
    if (!u.dead && u.delivered_count == u.delivered.size()) {
        u.completed = true;
        ++counters_.updates_delivered;
        aoi_.record(u.gen_time, now);
    }
}

void UpdateLedger::on_update_dead(std::uint64_t update_id) {
    auto it = updates_.find(update_id);
    if (it == updates_.end()) throw SimInvariantError("UpdateLedger: death of unknown update");
    it->second.dead = true;
}

bool UpdateLedger::fragment_delivered(std::uint64_t update_id, std::uint32_t frag_index) const {
    auto it = updates_.find(update_id);
    if (it == updates_.end()) return false;
    const auto& delivered = it->second.delivered;
    return frag_index < delivered.size() && delivered[frag_index];
}

void UpdateLedger::finalize() {
    for (const auto& [id, u] : updates_) {
        if (u.dead && !u.completed) ++counters_.updates_incomplete;
    }
}

} // namespace relsim::metrics
