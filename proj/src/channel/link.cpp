#include "relsim/channel/link.hpp"

#include <algorithm>
#include <cmath>

#include "relsim/errors.hpp"

namespace relsim::channel {

LinkProfile wifi_profile() {
    return LinkProfile{30e6, 20'000, 10'000, RandomLoss{0.007}};
}

LinkProfile sub6_profile() {
    return LinkProfile{1100e6, 27'400, 6'400, RandomLoss{0.001}};
}

LinkProfile mmwave_profile() {
    return LinkProfile{2500e6, 2'000, 1'000, RandomLoss{0.001}};
}

LinkProfile profile_by_name(const std::string& name) {
    if (name == "wifi") return wifi_profile();
    if (name == "sub6") return sub6_profile();
    if (name == "mmwave") return mmwave_profile();
    throw ConfigError("unknown link profile '" + name + "' (expected wifi, sub6 or mmwave)");
}

Link::Link(sim::SimEngine& engine, LinkProfile profile, sim::RngStream loss_rng,
           sim::RngStream jitter_rng)
    : engine_(engine),
      profile_(profile),
      loss_rng_(std::move(loss_rng)),
      jitter_rng_(std::move(jitter_rng)) {
    if (profile_.capacity_bps <= 0.0) throw ConfigError("link capacity must be positive");
}

sim::SimTime Link::serialization_us(std::uint32_t size_bytes) const {
    double bits = static_cast<double>(size_bytes) * 8.0;
    return static_cast<sim::SimTime>(std::llround(bits * 1e6 / profile_.capacity_bps));
}

bool Link::draw_drop(const transport::Packet& pkt) {
    if (drop_override_) {
        if (auto forced = drop_override_(pkt)) return *forced;
    }
    if (const auto* random = std::get_if<RandomLoss>(&profile_.loss)) {
        return loss_rng_.uniform() < random->p;
    }
    const auto& ge = std::get<GilbertElliott>(profile_.loss);
    double u_transition = loss_rng_.uniform();
    double u_loss = loss_rng_.uniform();
    GeStep step = ge_step(ge, ge_bad_, u_transition, u_loss);
    ge_bad_ = step.bad;
    return step.dropped;
}

std::optional<sim::SimTime> Link::transmit(const transport::Packet& pkt) {
    ++counters_.submitted;
    bool dropped = draw_drop(pkt);
    if (tap_) tap_(pkt, dropped);
    if (dropped) {
        if (pkt.kind == transport::FrameKind::Ack) {
            ++counters_.dropped_ack;
        } else if (pkt.reliable) {
            ++counters_.dropped_reliable;
        } else {
            ++counters_.dropped_unreliable;
        }
        if (on_drop_) on_drop_(pkt);
        return std::nullopt;
    }

    sim::SimTime now = engine_.now();
    sim::SimTime serialization = serialization_us(pkt.size_bytes);
    sim::SimTime departure = std::max(now, last_departure_us_);
    last_departure_us_ = departure + serialization;

    double prop = profile_.jitter_std_us == 0
                      ? static_cast<double>(profile_.base_delay_us)
                      : jitter_rng_.normal(static_cast<double>(profile_.base_delay_us),
                                           static_cast<double>(profile_.jitter_std_us));
    auto propagation = static_cast<sim::SimTime>(std::llround(std::max(0.0, prop)));

    sim::SimTime arrival = std::max(departure + serialization + propagation, last_arrival_us_);
    last_arrival_us_ = arrival;

    ++counters_.delivered;
    engine_.schedule_at(arrival, [this, pkt] {
        if (deliver_) deliver_(pkt);
    });
    return arrival;
}

} // namespace relsim::channel
