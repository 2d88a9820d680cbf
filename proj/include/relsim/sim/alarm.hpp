#pragma once

#include <functional>
#include <optional>
#include <set>

#include "relsim/sim/engine.hpp"
#include "relsim/sim/time.hpp"

namespace relsim::sim {

/// One-shot alarm that can be re-aimed at a new deadline at any time.
/// The event queue has no cancellation, so superseded events stay queued
/// and are ignored when they fire; while a deadline is set there is
/// always at least one queued event at or before it.
class Alarm {
public:
    Alarm(SimEngine& engine, std::function<void()> on_due)
        : engine_(engine), on_due_(std::move(on_due)) {}

    void set(SimTime due) {
        due_ = due;
        if (pending_.empty() || *pending_.begin() > due) schedule(due);
    }

    void cancel() { due_.reset(); }

    std::optional<SimTime> due() const { return due_; }

private:
    void schedule(SimTime at) {
        pending_.insert(at);
        engine_.schedule_at(at, [this, at] { fire(at); });
    }

    void fire(SimTime scheduled_for) {
        pending_.erase(pending_.find(scheduled_for));
        if (!due_) return;
        if (engine_.now() >= *due_) {
            due_.reset();
            on_due_();
        } else if (pending_.empty() || *pending_.begin() > *due_) {
            schedule(*due_);
        }
    }

    SimEngine& engine_;
    std::function<void()> on_due_;
    std::optional<SimTime> due_;
    std::multiset<SimTime> pending_;
};

} // namespace relsim::sim
