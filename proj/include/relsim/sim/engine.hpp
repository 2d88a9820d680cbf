#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "relsim/sim/time.hpp"

namespace relsim::sim {

/// Single-threaded discrete-event engine. Events are dispatched in
/// (fire_at, insertion seq) order, so same-time events run FIFO and a
/// whole run is a deterministic function of its inputs.
class SimEngine {
public:
    using Action = std::function<void()>;

    SimTime now() const { return now_; }

    /// Schedules `action` at absolute time `fire_at`. Scheduling in the
    /// past is a programming error and halts the run.
    std::uint64_t schedule_at(SimTime fire_at, Action action);

    std::uint64_t schedule_in(SimTime delay, Action action) {
        return schedule_at(now_ + delay, std::move(action));
    }

    /// Dispatches every event with fire_at <= t_end in order and leaves
    /// the clock at t_end (or where it already was, if later). Returns
    /// the number of events dispatched.
    std::size_t run_until(SimTime t_end);

    std::size_t pending() const { return heap_.size(); }

private:
    struct Event {
        SimTime fire_at;
        std::uint64_t seq;
        Action action;
        bool operator>(const Event& o) const {
            return fire_at != o.fire_at ? fire_at > o.fire_at : seq > o.seq;
        }
    };

    std::vector<Event> heap_; // min-heap via std::*_heap with operator>
    SimTime now_ = 0;
    std::uint64_t next_seq_ = 0;
};

} // namespace relsim::sim
