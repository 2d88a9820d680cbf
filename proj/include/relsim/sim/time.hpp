#pragma once

#include <cmath>
#include <cstdint>

namespace relsim::sim {

/// Timestamps and durations are integer microseconds since run start.
/// Integer time keeps event ordering exact; sub-millisecond link delays
/// (mmWave) need the microsecond resolution.
using SimTime = std::uint64_t;

inline constexpr SimTime kUsPerMs = 1'000;
inline constexpr SimTime kUsPerSec = 1'000'000;

constexpr SimTime from_ms(std::uint64_t ms) { return ms * kUsPerMs; }

inline SimTime from_seconds(double s) {
    return static_cast<SimTime>(std::llround(s * 1e6));
}

inline double to_ms(SimTime t) { return static_cast<double>(t) / 1e3; }

} // namespace relsim::sim
