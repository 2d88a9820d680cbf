#pragma once

#include <variant>

namespace relsim::channel {

/// Uncorrelated per-packet loss with probability p.
struct RandomLoss {
    double p = 0.0;
};

/// Two-state Markov loss process. The state transition is sampled once
/// per packet, before the drop draw; the drop draw uses the new state's
/// loss probability.
struct GilbertElliott {
    double p_gb = 0.0;      // P(Good -> Bad) per packet
    double p_bg = 0.0;      // P(Bad -> Good) per packet
    double loss_good = 0.0; // drop probability while Good
    double loss_bad = 0.0;  // drop probability while Bad
};

using LossModel = std::variant<RandomLoss, GilbertElliott>;

struct GeStep {
    bool bad = false;
    bool dropped = false;
};

/// Advances the chain with u_transition, then draws the drop with u_loss
/// against the new state. Pure; the caller owns the state bit.
GeStep ge_step(const GilbertElliott& ge, bool bad, double u_transition, double u_loss);

/// Long-run average drop probability pi_B*loss_bad + pi_G*loss_good with
/// pi_B = p_gb / (p_gb + p_bg). Throws ConfigError when p_gb + p_bg = 0
/// (the chain never mixes).
double stationary_loss(const GilbertElliott& ge);

/// Solves for p_gb so that stationary_loss hits `target`, holding the
/// other three parameters fixed. Throws ConfigError when the target is
/// unreachable.
GilbertElliott ge_for_target_loss(double target, double p_bg = 0.5, double loss_good = 0.0,
                                  double loss_bad = 0.5);

/// Average drop probability of any LossModel (p for RandomLoss, the
/// stationary loss for GilbertElliott).
double average_loss(const LossModel& model);

} // namespace relsim::channel
