#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace relsim::sim {

/// Named deterministic random stream. Each stream is a splitmix64 counter
/// generator whose state is derived from (global seed, stream id), so the
/// draw sequence of one stream never depends on how other streams are
/// consumed or on event interleaving. Identical (seed, id) pairs yield
/// identical sequences on every run and platform.
class RngStream {
public:
    RngStream(std::uint64_t global_seed, std::string_view stream_id);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Normal sample via Box-Muller; consumes exactly two uniforms.
    /// normal(m, 0) returns exactly m.
    double normal(double mean, double stddev);

    const std::string& id() const { return id_; }

private:
    std::string id_;
    std::uint64_t state_;
};

} // namespace relsim::sim
