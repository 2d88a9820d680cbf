#include "relsim/policy/policy.hpp"

#include <utility>

#include "relsim/errors.hpp"

namespace relsim::policy {

Verdict decide_static(double p_reliable, double u) {
    return u < p_reliable ? Verdict::Reliable : Verdict::Unreliable;
}

double loss_estimate(const transport::LossStats& stats) {
    std::uint64_t reliable_sent = stats.packets_sent_total - stats.packets_sent_unreliable;
    if (reliable_sent == 0) return 0.0;
    return 1.0 - static_cast<double>(stats.reliable_acked) / static_cast<double>(reliable_sent);
}

double ewma_update(double omega_prev, double lambda_prev, double alpha) {
    return alpha * lambda_prev + (1.0 - alpha) * omega_prev;
}

StaticSplitPolicy::StaticSplitPolicy(std::string name, double p_reliable)
    : name_(std::move(name)), p_reliable_(p_reliable) {
    if (p_reliable_ < 0.0 || p_reliable_ > 1.0) {
        throw ConfigError("policy '" + name_ + "': p_reliable must be in [0, 1]");
    }
}

Verdict StaticSplitPolicy::decide(const PolicyContext&, sim::RngStream& rng) {
    return decide_static(p_reliable_, rng.uniform());
}

Verdict SrttPolicy::decide(const PolicyContext& ctx, sim::RngStream&) {
    if (ctx.rtt.has_sample() && ctx.rtt.latest() < ctx.rtt.srtt()) return Verdict::Unreliable;
    return Verdict::Reliable;
}

LossAwarePolicy::LossAwarePolicy(double alpha, double rt_threshold)
    : alpha_(alpha), rt_threshold_(rt_threshold) {
    if (alpha_ < 0.0 || alpha_ > 1.0) throw ConfigError("loss_aware: alpha must be in [0, 1]");
    if (rt_threshold_ < 0.0 || rt_threshold_ > 1.0) {
        throw ConfigError("loss_aware: rt must be in [0, 1]");
    }
}

Verdict LossAwarePolicy::decide(const PolicyContext&, sim::RngStream&) {
    return omega_ <= rt_threshold_ ? Verdict::Unreliable : Verdict::Reliable;
}

void LossAwarePolicy::on_ack(const transport::LossStats& stats) {
    omega_ = ewma_update(omega_, lambda_prev_, alpha_);
    lambda_prev_ = loss_estimate(stats);
}

std::unique_ptr<ReliabilityPolicy> make_policy(const PolicyConfig& cfg) {
    auto split = [&](double default_p) {
        return std::make_unique<StaticSplitPolicy>(cfg.name, cfg.p_reliable.value_or(default_p));
    };
    if (cfg.name == "vanilla") return split(1.0);
    if (cfg.name == "naive") return split(0.5);
    if (cfg.name == "split80") return split(0.8);
    if (cfg.name == "split20") return split(0.2);
    if (cfg.name == "srtt") return std::make_unique<SrttPolicy>();
    if (cfg.name == "loss_aware") {
        return std::make_unique<LossAwarePolicy>(cfg.alpha.value_or(0.8), cfg.rt.value_or(0.05));
    }
    throw ConfigError("unknown policy '" + cfg.name +
                      "' (expected vanilla, naive, split80, split20, srtt or loss_aware)");
}

} // namespace relsim::policy
