#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relsim/channel/link.hpp"
#include "relsim/channel/loss.hpp"
#include "relsim/policy/policy.hpp"
#include "relsim/transport/config.hpp"
#include "relsim/workload/source.hpp"

namespace relsim::runner {

struct WorkloadConfig {
    double fps = 60.0;
    std::uint32_t mean_size_bytes = 16'667;
    double size_jitter_fraction = 0.2;
};

/// Loss setting of one sweep axis entry. A random entry without p uses
/// each link profile's own loss ratio; a burst entry is either explicit
/// Gilbert-Elliott parameters or a target average loss the preset chain
/// (p_bg 0.5, loss_good 0, loss_bad 0.5) is solved for.
struct LossSpec {
    enum class Kind { Random, Burst };
    Kind kind = Kind::Random;
    std::optional<double> random_p;
    std::optional<channel::GilbertElliott> ge;
    std::optional<double> burst_target;
};

struct LinkSpec {
    std::string name;
    channel::LinkProfile profile;
};

/// Parsed sweep configuration: cells = links x losses x policies.
struct SweepConfig {
    std::uint64_t seed = 1;
    std::uint32_t runs_per_cell = 10;
    double duration_s = 10.0;
    std::uint32_t buffer_threshold = 64;
    WorkloadConfig workload;
    std::vector<LinkSpec> links;
    std::vector<policy::PolicyConfig> policies;
    std::vector<LossSpec> losses;
};

/// One fully resolved experiment cell.
struct ResolvedScenario {
    std::string scenario_id;
    std::string link_name;
    std::string policy_label;
    std::string loss_kind; // "random" | "burst"
    double loss_param = 0.0;
    channel::LinkProfile link; // loss model already substituted
    policy::PolicyConfig policy;
    double duration_s = 10.0;
    transport::TransportConfig transport;
    workload::SourceModel workload;
};

/// Strict parse: unknown keys, wrong types and bad values raise
/// ConfigError naming the offending field.
SweepConfig parse_config(const std::string& json_text);
SweepConfig load_config_file(const std::string& path);

std::vector<ResolvedScenario> expand_cells(const SweepConfig& cfg);

/// Human-readable list of link presets, shipped burst presets and
/// policy names for --list-presets.
std::string describe_presets();

/// Burst presets shipped with the simulator (target average losses).
const std::vector<double>& burst_loss_presets();

} // namespace relsim::runner
