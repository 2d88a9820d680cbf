#pragma once

#include "relsim/sim/time.hpp"

namespace relsim::transport {

/// Smoothed RTT tracking: first sample initializes srtt to the sample and
/// rttvar to half of it; afterwards rttvar = 3/4 rttvar + 1/4 |srtt - s|
/// and srtt = 7/8 srtt + 1/8 s.
class RttEstimator {
public:
    void on_sample(sim::SimTime latest_rtt_us);

    bool has_sample() const { return has_sample_; }
    sim::SimTime latest() const { return latest_; }
    sim::SimTime srtt() const { return srtt_; }
    sim::SimTime rttvar() const { return rttvar_; }
    sim::SimTime min_rtt() const { return min_rtt_; }

private:
    bool has_sample_ = false;
    sim::SimTime latest_ = 0;
    sim::SimTime srtt_ = 0;
    sim::SimTime rttvar_ = 0;
    sim::SimTime min_rtt_ = 0;
};

} // namespace relsim::transport
