#include "relsim/sim/engine.hpp"

#include <algorithm>
#include <string>

#include "relsim/errors.hpp"

namespace relsim::sim {

std::uint64_t SimEngine::schedule_at(SimTime fire_at, Action action) {
    if (fire_at < now_) {
        throw SimInvariantError("schedule_at: event time " + std::to_string(fire_at) +
                                "us is in the past (now=" + std::to_string(now_) + "us)");
    }
    std::uint64_t seq = next_seq_++;
    heap_.push_back(Event{fire_at, seq, std::move(action)});
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
    return seq;
}

std::size_t SimEngine::run_until(SimTime t_end) {
    std::size_t dispatched = 0;
    while (!heap_.empty() && heap_.front().fire_at <= t_end) {
        std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
        Event ev = std::move(heap_.back());
        heap_.pop_back();
        now_ = ev.fire_at;
        ev.action();
        ++dispatched;
    }
    if (t_end > now_) now_ = t_end;
    return dispatched;
}

} // namespace relsim::sim
