#include <doctest.h>

#include <string>

#include "relsim/errors.hpp"
#include "relsim/runner/scenario.hpp"

using namespace relsim;
using namespace relsim::runner;

TEST_CASE("a minimal config expands with the documented defaults") {
    SweepConfig cfg = parse_config("{}");
    CHECK(cfg.seed == 1);
    CHECK(cfg.runs_per_cell == 10);
    CHECK(cfg.duration_s == 10.0);
    CHECK(cfg.buffer_threshold == 64);
    CHECK(cfg.links.size() == 3);
    CHECK(cfg.policies.size() == 6);
    CHECK(cfg.losses.size() == 1);

    auto cells = expand_cells(cfg);
    CHECK(cells.size() == 18); // 3 links x 1 loss x 6 policies
}

TEST_CASE("unknown keys are rejected with their location") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"sed": 3})"),
                         doctest::Contains("unknown key 'sed'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"workload": {"fsp": 60}})"),
                         doctest::Contains("unknown key 'fsp' in workload"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"losses": [{"kind": "random", "mode": 1}]})"),
                         doctest::Contains("losses[0]"), ConfigError);
}

TEST_CASE("malformed json reports a position") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": })"), ConfigError);
}

TEST_CASE("value validation") {
    CHECK_THROWS_AS(parse_config(R"({"runs_per_cell": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"duration_s": -1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": -4})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"losses": [{"kind": "random", "p": 1.5}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"losses": [{"kind": "sometimes"}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"losses": [{"kind": "burst"}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"policies": ["clairvoyant"]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"policies": [{"name": "naive", "p_reliable": 7}]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"links": ["adsl"]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"links": [{"capacity_mbps": 10}]})"), ConfigError);
}

TEST_CASE("random loss without p uses each link's own table ratio") {
    SweepConfig cfg = parse_config(R"({
        "links": ["wifi", "mmwave"],
        "losses": [{"kind": "random"}],
        "policies": ["vanilla"]
    })");
    auto cells = expand_cells(cfg);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].loss_param == doctest::Approx(0.007));
    CHECK(cells[1].loss_param == doctest::Approx(0.001));
    CHECK(cells[0].scenario_id == "wifi/random:0.007/vanilla");
}

TEST_CASE("burst target loss resolves to a calibrated chain") {
    SweepConfig cfg = parse_config(R"({
        "links": ["wifi"],
        "losses": [{"kind": "burst", "target_loss": 0.05}],
        "policies": ["vanilla"]
    })");
    auto cells = expand_cells(cfg);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].loss_kind == "burst");
    CHECK(cells[0].loss_param == doctest::Approx(0.05).epsilon(1e-9));
    const auto& ge = std::get<channel::GilbertElliott>(cells[0].link.loss);
    CHECK(channel::stationary_loss(ge) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("explicit gilbert-elliott parameters pass through") {
    SweepConfig cfg = parse_config(R"({
        "links": ["wifi"],
        "losses": [{"kind": "burst",
                    "ge": {"p_gb": 0.01, "p_bg": 0.5, "loss_good": 0, "loss_bad": 0.5}}],
        "policies": ["vanilla"]
    })");
    auto cells = expand_cells(cfg);
    const auto& ge = std::get<channel::GilbertElliott>(cells[0].link.loss);
    CHECK(ge.p_gb == doctest::Approx(0.01));
    CHECK(cells[0].loss_param == doctest::Approx(0.00980392156862745).epsilon(1e-9));
}

TEST_CASE("link fields can be overridden one by one") {
    SweepConfig cfg = parse_config(R"({
        "links": [{"preset": "wifi", "base_delay_ms": 5.5, "jitter_std_ms": 0}],
        "policies": ["vanilla"]
    })");
    REQUIRE(cfg.links.size() == 1);
    CHECK(cfg.links[0].name == "wifi");
    CHECK(cfg.links[0].profile.base_delay_us == 5'500);
    CHECK(cfg.links[0].profile.jitter_std_us == 0);
    CHECK(cfg.links[0].profile.capacity_bps == 30e6); // untouched preset field
}

TEST_CASE("inline links need a name and a positive capacity") {
    SweepConfig cfg = parse_config(R"({
        "links": [{"name": "lab", "capacity_mbps": 100, "base_delay_ms": 1,
                   "jitter_std_ms": 0, "loss_ratio": 0.002}],
        "policies": ["vanilla"]
    })");
    CHECK(cfg.links[0].name == "lab");
    CHECK(cfg.links[0].profile.capacity_bps == 100e6);
}

TEST_CASE("policy parameter overrides reach the label and the factory") {
    SweepConfig cfg = parse_config(R"({
        "links": ["wifi"],
        "policies": [{"name": "naive", "p_reliable": 0.3},
                     {"name": "loss_aware", "alpha": 0.5, "rt": 0.1}]
    })");
    auto cells = expand_cells(cfg);
    CHECK(cells[0].policy_label == "naive[p=0.3]");
    CHECK(cells[1].policy_label == "loss_aware[alpha=0.5][rt=0.1]");
}

TEST_CASE("burst presets are solvable and advertised") {
    for (double preset : burst_loss_presets()) {
        auto ge = channel::ge_for_target_loss(preset);
        CHECK(channel::stationary_loss(ge) == doctest::Approx(preset).epsilon(1e-12));
    }
    std::string text = describe_presets();
    CHECK(text.find("wifi") != std::string::npos);
    CHECK(text.find("loss_aware") != std::string::npos);
}

TEST_CASE("missing config file is a config error") {
    CHECK_THROWS_AS(load_config_file("/nonexistent/sweep.json"), ConfigError);
}
