#include "relsim/transport/rtt.hpp"

#include <algorithm>

namespace relsim::transport {

void RttEstimator::on_sample(sim::SimTime latest_rtt_us) {
    latest_ = latest_rtt_us;
    if (!has_sample_) {
        has_sample_ = true;
        srtt_ = latest_rtt_us;
        rttvar_ = latest_rtt_us / 2;
        min_rtt_ = latest_rtt_us;
        return;
    }
    min_rtt_ = std::min(min_rtt_, latest_rtt_us);
    sim::SimTime deviation = srtt_ > latest_rtt_us ? srtt_ - latest_rtt_us : latest_rtt_us - srtt_;
    rttvar_ = (3 * rttvar_ + deviation) / 4;
    srtt_ = (7 * srtt_ + latest_rtt_us) / 8;
}

} // namespace relsim::transport
