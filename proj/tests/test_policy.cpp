#include <doctest.h>

#include <cmath>
#include <vector>

#include "relsim/errors.hpp"
#include "relsim/policy/policy.hpp"
#include "relsim/sim/rng.hpp"
#include "relsim/transport/loss_stats.hpp"
#include "relsim/transport/rtt.hpp"

using namespace relsim;
using namespace relsim::policy;
using transport::LossStats;
using transport::RttEstimator;

namespace {

PolicyContext make_ctx(const RttEstimator& rtt, const LossStats& stats) {
    return PolicyContext{rtt, stats, 0};
}

} // namespace

TEST_CASE("static verdicts at the boundaries") {
    CHECK(decide_static(1.0, 0.0) == Verdict::Reliable);
    CHECK(decide_static(1.0, 0.999999) == Verdict::Reliable);
    CHECK(decide_static(0.0, 0.0) == Verdict::Unreliable);
    CHECK(decide_static(0.0, 0.5) == Verdict::Unreliable);
    CHECK(decide_static(0.8, 0.79) == Verdict::Reliable);
    CHECK(decide_static(0.8, 0.8) == Verdict::Unreliable);
}

TEST_CASE("static split concentrates at its probability") {
    RttEstimator rtt;
    LossStats stats;
    for (double p : {0.2, 0.5, 0.8}) {
        StaticSplitPolicy pol("static", p);
        sim::RngStream rng(4, "policy");
        int reliable = 0;
        const int n = 100'000;
        for (int i = 0; i < n; ++i) {
            if (pol.decide(make_ctx(rtt, stats), rng) == Verdict::Reliable) ++reliable;
        }
        double fraction = static_cast<double>(reliable) / n;
        CHECK(std::abs(fraction - p) < 0.01);
    }
}

TEST_CASE("static split with a fixed seed is reproducible packet for packet") {
    RttEstimator rtt;
    LossStats stats;
    auto run = [&] {
        StaticSplitPolicy pol("naive", 0.5);
        sim::RngStream rng(99, "policy");
        std::vector<Verdict> verdicts;
        for (int i = 0; i < 1'000; ++i) verdicts.push_back(pol.decide(make_ctx(rtt, stats), rng));
        return verdicts;
    };
    CHECK(run() == run());
}

TEST_CASE("p_reliable outside [0,1] is a config error") {
    CHECK_THROWS_AS(StaticSplitPolicy("bad", -0.1), ConfigError);
    CHECK_THROWS_AS(StaticSplitPolicy("bad", 1.1), ConfigError);
    PolicyConfig cfg;
    cfg.name = "naive";
    cfg.p_reliable = 2.0;
    CHECK_THROWS_AS(make_policy(cfg), ConfigError);
}

TEST_CASE("srtt policy goes unreliable only below the smoothed rtt") {
    SrttPolicy pol;
    LossStats stats;
    sim::RngStream rng(1, "policy");

    RttEstimator rtt;
    SUBCASE("no sample yet resolves to reliable") {
        CHECK(pol.decide(make_ctx(rtt, stats), rng) == Verdict::Reliable);
    }
    SUBCASE("latest below srtt is unreliable") {
        rtt.on_sample(12'000); // srtt = 12 ms
        rtt.on_sample(10'000); // latest 10 ms < srtt 11.75 ms
        REQUIRE(rtt.latest() < rtt.srtt());
        CHECK(pol.decide(make_ctx(rtt, stats), rng) == Verdict::Unreliable);
    }
    SUBCASE("a tie resolves to reliable") {
        rtt.on_sample(10'000); // first sample: latest == srtt
        REQUIRE(rtt.latest() == rtt.srtt());
        CHECK(pol.decide(make_ctx(rtt, stats), rng) == Verdict::Reliable);
    }
}

TEST_CASE("loss estimate worked examples") {
    LossStats s;
    s.packets_sent_total = 100;
    s.packets_sent_unreliable = 40;
    s.reliable_acked = 57;
    CHECK(loss_estimate(s) == doctest::Approx(0.05).epsilon(1e-12)); // 1 - 57/60

    SUBCASE("all unreliable guards the division") {
        LossStats all_unrel;
        all_unrel.packets_sent_total = 40;
        all_unrel.packets_sent_unreliable = 40;
        CHECK(loss_estimate(all_unrel) == 0.0);
    }
    SUBCASE("everything acked is lossless") {
        LossStats lossless;
        lossless.packets_sent_total = 100;
        lossless.packets_sent_unreliable = 40;
        lossless.reliable_acked = 60;
        CHECK(loss_estimate(lossless) == doctest::Approx(0.0));
    }
}

TEST_CASE("ewma update") {
    CHECK(ewma_update(0.0, 0.1, 0.8) == doctest::Approx(0.08).epsilon(1e-12));
    SUBCASE("fixed point") {
        CHECK(ewma_update(0.37, 0.37, 0.8) == doctest::Approx(0.37).epsilon(1e-12));
    }
    SUBCASE("constant input converges geometrically, against the closed form") {
        const double c = 0.42, alpha = 0.8;
        double omega = 0.0;
        for (int t = 1; t <= 60; ++t) {
            omega = ewma_update(omega, c, alpha);
            double closed_form = c * (1.0 - std::pow(1.0 - alpha, t));
            CHECK(omega == doctest::Approx(closed_form).epsilon(1e-12));
        }
    }
    SUBCASE("stays in [0,1] for inputs in [0,1]") {
        sim::RngStream gen(3, "ewma-prop");
        for (int i = 0; i < 10'000; ++i) {
            double omega = gen.uniform();
            double lambda = gen.uniform();
            double alpha = gen.uniform();
            double next = ewma_update(omega, lambda, alpha);
            CHECK(next >= 0.0);
            CHECK(next <= 1.0);
        }
    }
}

TEST_CASE("loss-aware verdict sits on the real-time threshold") {
    LossStats stats;
    RttEstimator rtt;
    sim::RngStream rng(1, "policy");

    LossAwarePolicy pol(0.8, 0.05);
    // omega starts pessimistic: no measurements, so send reliably.
    CHECK(pol.omega() == 1.0);
    CHECK(pol.decide(make_ctx(rtt, stats), rng) == Verdict::Reliable);

    SUBCASE("omega below the bound goes unreliable") {
        // Constant lambda = 0.04: omega converges to 0.04 < 0.05.
        stats.packets_sent_total = 10'000;
        stats.reliable_acked = 9'600;
        for (int i = 0; i < 200; ++i) pol.on_ack(stats);
        CHECK(pol.omega() == doctest::Approx(0.04).epsilon(1e-6));
        CHECK(pol.decide(make_ctx(rtt, stats), rng) == Verdict::Unreliable);
    }
    SUBCASE("omega above the bound flips to reliable") {
        stats.packets_sent_total = 10'000;
        stats.reliable_acked = 9'490; // lambda = 0.051
        for (int i = 0; i < 200; ++i) pol.on_ack(stats);
        CHECK(pol.omega() == doctest::Approx(0.051).epsilon(1e-6));
        CHECK(pol.decide(make_ctx(rtt, stats), rng) == Verdict::Reliable);
    }
}

TEST_CASE("policy factory wires the published names") {
    RttEstimator rtt;
    LossStats stats;
    sim::RngStream rng(1, "policy");
    for (const char* name : {"vanilla", "naive", "split80", "split20", "srtt", "loss_aware"}) {
        PolicyConfig cfg;
        cfg.name = name;
        auto pol = make_policy(cfg);
        CHECK(pol->name() == name);
        pol->decide(make_ctx(rtt, stats), rng); // total function, must not throw
    }
    PolicyConfig bad;
    bad.name = "oracle";
    CHECK_THROWS_AS(make_policy(bad), ConfigError);

    // vanilla is the all-reliable benchmark
    PolicyConfig v;
    v.name = "vanilla";
    auto vanilla = make_policy(v);
    for (int i = 0; i < 1'000; ++i) {
        CHECK(vanilla->decide(make_ctx(rtt, stats), rng) == Verdict::Reliable);
    }
}

TEST_CASE("raising p_reliable never flips a verdict to unreliable (coupling)") {
    RttEstimator rtt;
    LossStats stats;
    for (int round = 0; round < 20; ++round) {
        sim::RngStream rng_low(round, "policy");
        sim::RngStream rng_high(round, "policy"); // identical draw sequence
        StaticSplitPolicy low("low", 0.2);
        StaticSplitPolicy high("high", 0.8);
        int low_reliable = 0, high_reliable = 0;
        for (int i = 0; i < 5'000; ++i) {
            Verdict vl = low.decide(make_ctx(rtt, stats), rng_low);
            Verdict vh = high.decide(make_ctx(rtt, stats), rng_high);
            if (vl == Verdict::Reliable) {
                ++low_reliable;
                CHECK(vh == Verdict::Reliable); // shared draw: monotone in p
            }
            if (vh == Verdict::Reliable) ++high_reliable;
        }
        CHECK(high_reliable >= low_reliable);
    }
}
