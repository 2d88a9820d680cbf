#pragma once

#include <cstdint>

namespace relsim::transport {

/// Cumulative session counters a reliability policy may read. Maintained
/// by the sender; policies get a read-only view.
struct LossStats {
    std::uint64_t packets_sent_total = 0;      // every wire send incl. retx and pings
    std::uint64_t packets_sent_unreliable = 0; // subset flagged no-ack
    std::uint64_t reliable_acked = 0;          // distinct reliable pns acknowledged
};

} // namespace relsim::transport
