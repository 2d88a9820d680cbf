#include "relsim/channel/loss.hpp"

#include <string>

#include "relsim/errors.hpp"

namespace relsim::channel {

GeStep ge_step(const GilbertElliott& ge, bool bad, double u_transition, double u_loss) {
    GeStep out;
    out.bad = bad ? !(u_transition < ge.p_bg) : (u_transition < ge.p_gb);
    out.dropped = u_loss < (out.bad ? ge.loss_bad : ge.loss_good);
    return out;
}

double stationary_loss(const GilbertElliott& ge) {
    double denom = ge.p_gb + ge.p_bg;
    if (denom <= 0.0) {
        throw ConfigError("gilbert-elliott chain with p_gb = p_bg = 0 never mixes; "
                          "no stationary loss exists");
    }
    double pi_bad = ge.p_gb / denom;
    return pi_bad * ge.loss_bad + (1.0 - pi_bad) * ge.loss_good;
}

GilbertElliott ge_for_target_loss(double target, double p_bg, double loss_good, double loss_bad) {
    if (loss_bad <= loss_good) {
        throw ConfigError("ge_for_target_loss needs loss_bad > loss_good");
    }
    double pi_bad = (target - loss_good) / (loss_bad - loss_good);
    if (pi_bad < 0.0 || pi_bad >= 1.0) {
        throw ConfigError("burst target loss " + std::to_string(target) +
                          " is not reachable between loss_good and loss_bad");
    }
    GilbertElliott ge{0.0, p_bg, loss_good, loss_bad};
    ge.p_gb = p_bg * pi_bad / (1.0 - pi_bad);
    if (ge.p_gb > 1.0) {
        throw ConfigError("burst target loss " + std::to_string(target) +
                          " needs p_gb > 1 at p_bg = " + std::to_string(p_bg));
    }
    return ge;
}

double average_loss(const LossModel& model) {
    if (const auto* r = std::get_if<RandomLoss>(&model)) return r->p;
    return stationary_loss(std::get<GilbertElliott>(model));
}

} // namespace relsim::channel
