#pragma once

#include <cstdint>
#include <limits>

#include "relsim/sim/time.hpp"
#include "relsim/transport/config.hpp"

namespace relsim::transport {

enum class CcPhase { SlowStart, Avoidance };

/// NewReno-style window: slow start grows by acked bytes, avoidance by
/// MSS * acked/cwnd, a congestion event halves (floored at one MSS).
/// Only reliable bytes occupy the window; a send is allowed whenever
/// bytes_in_flight < cwnd, so a window smaller than one packet cannot
/// deadlock the sender.
class CongestionController {
public:
    explicit CongestionController(const TransportConfig& cfg)
        : mss_(cfg.mss_bytes()),
          cwnd_(static_cast<double>(cfg.initial_cwnd_packets) * cfg.mss_bytes()) {}

    bool can_send(std::uint64_t bytes_in_flight) const {
        return static_cast<double>(bytes_in_flight) < cwnd_;
    }

    void on_acked(std::uint64_t acked_bytes) {
        if (acked_bytes == 0) return;
        if (phase_ == CcPhase::SlowStart) {
            cwnd_ += static_cast<double>(acked_bytes);
            if (cwnd_ >= ssthresh_) phase_ = CcPhase::Avoidance;
        } else {
            cwnd_ += static_cast<double>(mss_) * static_cast<double>(acked_bytes) / cwnd_;
        }
    }

    void on_congestion_event() {
        ssthresh_ = std::max(cwnd_ / 2.0, static_cast<double>(mss_));
        cwnd_ = ssthresh_;
        phase_ = CcPhase::Avoidance;
    }

    double cwnd_bytes() const { return cwnd_; }
    double ssthresh_bytes() const { return ssthresh_; }
    CcPhase phase() const { return phase_; }

private:
    std::uint32_t mss_;
    double cwnd_;
    double ssthresh_ = std::numeric_limits<double>::infinity();
    CcPhase phase_ = CcPhase::SlowStart;
};

/// Token bucket pacing unreliable sends at cwnd/srtt. Tokens may go
/// negative on a send (pacing debt), which keeps progress possible when
/// the window is smaller than a packet.
class Pacer {
public:
    explicit Pacer(const TransportConfig& cfg)
        : burst_fraction_(cfg.pacer_burst_fraction),
          tokens_(burst_fraction_ * static_cast<double>(cfg.initial_cwnd_packets) *
                  cfg.mss_bytes()) {}

    void refill(sim::SimTime now, double cwnd_bytes, sim::SimTime srtt_us) {
        double cap = burst_fraction_ * cwnd_bytes;
        if (now > last_refill_us_) {
            double rate = cwnd_bytes / static_cast<double>(srtt_us); // bytes per us
            tokens_ += rate * static_cast<double>(now - last_refill_us_);
        }
        if (tokens_ > cap) tokens_ = cap;
        last_refill_us_ = now;
    }

    bool can_send() const { return tokens_ >= 1.0; }

    void on_sent(std::uint32_t wire_bytes) { tokens_ -= static_cast<double>(wire_bytes); }

    /// Microseconds until tokens reach one byte again.
    sim::SimTime next_send_delay(double cwnd_bytes, sim::SimTime srtt_us) const {
        if (tokens_ >= 1.0) return 0;
        double rate = cwnd_bytes / static_cast<double>(srtt_us);
        double wait = (1.0 - tokens_) / rate;
        return static_cast<sim::SimTime>(wait) + 1;
    }

    double tokens() const { return tokens_; }

private:
    double burst_fraction_;
    double tokens_;
    sim::SimTime last_refill_us_ = 0;
};

} // namespace relsim::transport
