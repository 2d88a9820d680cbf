#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "relsim/sim/rng.hpp"
#include "relsim/sim/time.hpp"
#include "relsim/transport/loss_stats.hpp"
#include "relsim/transport/rtt.hpp"

namespace relsim::policy {

enum class Verdict { Reliable, Unreliable };

/// Read-only transport snapshot handed to a policy for each data packet.
struct PolicyContext {
    const transport::RttEstimator& rtt;
    const transport::LossStats& loss;
    sim::SimTime now;
};

/// Per-packet reliability policy. decide() is called exactly once per
/// data packet before transmission; on_ack() after every processed ACK.
class ReliabilityPolicy {
public:
    virtual ~ReliabilityPolicy() = default;
    virtual Verdict decide(const PolicyContext& ctx, sim::RngStream& rng) = 0;
    virtual void on_ack(const transport::LossStats& stats) { (void)stats; }
    virtual std::string_view name() const = 0;
};

/// Reliable iff u < p_reliable. The static family: vanilla(1.0),
/// split80(0.8), naive(0.5), split20(0.2).
Verdict decide_static(double p_reliable, double u);

/// Loss fraction of reliable packets:
/// 1 - reliable_acked / (sent_total - sent_unreliable), 0 when nothing
/// reliable was sent yet.
double loss_estimate(const transport::LossStats& stats);

/// Exponential smoothing omega_t = alpha * lambda_{t-1} + (1-alpha) * omega_{t-1}.
double ewma_update(double omega_prev, double lambda_prev, double alpha);

/// Policy selection by name with optional parameter overrides.
struct PolicyConfig {
    std::string name = "vanilla"; // vanilla|naive|split80|split20|srtt|loss_aware
    std::optional<double> p_reliable;
    std::optional<double> alpha; // loss_aware smoothing weight, default 0.8
    std::optional<double> rt;    // loss_aware real-time loss bound, default 0.05
};

std::unique_ptr<ReliabilityPolicy> make_policy(const PolicyConfig& cfg);

class StaticSplitPolicy final : public ReliabilityPolicy {
public:
    StaticSplitPolicy(std::string name, double p_reliable);
    Verdict decide(const PolicyContext& ctx, sim::RngStream& rng) override;
    std::string_view name() const override { return name_; }
    double p_reliable() const { return p_reliable_; }

private:
    std::string name_;
    double p_reliable_;
};

/// Unreliable while the latest RTT sample sits below the smoothed RTT;
/// ties and the time before the first sample resolve to reliable.
class SrttPolicy final : public ReliabilityPolicy {
public:
    Verdict decide(const PolicyContext& ctx, sim::RngStream& rng) override;
    std::string_view name() const override { return "srtt"; }
};

/// Unreliable while the smoothed session loss estimate stays within the
/// real-time bound. The estimate is refreshed on every ACK. Starts
/// pessimistic (omega = 1): with no measurements yet, packets go
/// reliable until the channel proves itself.
class LossAwarePolicy final : public ReliabilityPolicy {
public:
    LossAwarePolicy(double alpha, double rt_threshold);
    Verdict decide(const PolicyContext& ctx, sim::RngStream& rng) override;
    void on_ack(const transport::LossStats& stats) override;
    std::string_view name() const override { return "loss_aware"; }
    double omega() const { return omega_; }

private:
    double alpha_;
    double rt_threshold_;
    double omega_ = 1.0;
    double lambda_prev_ = 1.0;
};

} // namespace relsim::policy
