#include "relsim/runner/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relsim/errors.hpp"

namespace relsim::runner {

using nlohmann::json;

namespace {

std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("config: unknown key '" + key + "' in " + path);
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& path,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("config: " + path + "." + key + " must be a number");
    return v.get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& key, const std::string& path,
                       std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) {
        throw ConfigError("config: " + path + "." + key + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

LinkSpec parse_link(const json& entry, const std::string& path) {
    if (entry.is_string()) {
        std::string name = entry.get<std::string>();
        return LinkSpec{name, channel::profile_by_name(name)};
    }
    if (!entry.is_object()) {
        throw ConfigError("config: " + path + " must be a preset name or an object");
    }
    check_keys(entry,
               {"preset", "name", "capacity_mbps", "base_delay_ms", "jitter_std_ms", "loss_ratio"},
               path);
    LinkSpec spec;
    if (entry.contains("preset")) {
        spec.name = entry.at("preset").get<std::string>();
        spec.profile = channel::profile_by_name(spec.name);
    } else if (!entry.contains("name")) {
        throw ConfigError("config: " + path + " needs either 'preset' or 'name'");
    }
    if (entry.contains("name")) spec.name = entry.at("name").get<std::string>();
    if (entry.contains("capacity_mbps")) {
        spec.profile.capacity_bps = get_number(entry, "capacity_mbps", path, 0) * 1e6;
    }
    if (entry.contains("base_delay_ms")) {
        spec.profile.base_delay_us =
            static_cast<sim::SimTime>(std::llround(get_number(entry, "base_delay_ms", path, 0) * 1e3));
    }
    if (entry.contains("jitter_std_ms")) {
        spec.profile.jitter_std_us =
            static_cast<sim::SimTime>(std::llround(get_number(entry, "jitter_std_ms", path, 0) * 1e3));
    }
    if (entry.contains("loss_ratio")) {
        double p = get_number(entry, "loss_ratio", path, 0);
        if (p < 0.0 || p > 1.0) throw ConfigError("config: " + path + ".loss_ratio not in [0,1]");
        spec.profile.loss = channel::RandomLoss{p};
    }
    if (spec.profile.capacity_bps <= 0.0) {
        throw ConfigError("config: " + path + " capacity must be positive");
    }
    return spec;
}

LossSpec parse_loss(const json& entry, const std::string& path) {
    if (!entry.is_object()) throw ConfigError("config: " + path + " must be an object");
    check_keys(entry, {"kind", "p", "target_loss", "ge"}, path);
    if (!entry.contains("kind")) throw ConfigError("config: " + path + " needs a 'kind'");
    std::string kind = entry.at("kind").get<std::string>();
    LossSpec spec;
    if (kind == "random") {
        spec.kind = LossSpec::Kind::Random;
        if (entry.contains("p")) {
            double p = get_number(entry, "p", path, 0);
            if (p < 0.0 || p > 1.0) throw ConfigError("config: " + path + ".p not in [0,1]");
            spec.random_p = p;
        }
        if (entry.contains("target_loss") || entry.contains("ge")) {
            throw ConfigError("config: " + path + ": random loss takes only 'p'");
        }
        return spec;
    }
    if (kind == "burst") {
        spec.kind = LossSpec::Kind::Burst;
        if (entry.contains("ge")) {
            const json& g = entry.at("ge");
            check_keys(g, {"p_gb", "p_bg", "loss_good", "loss_bad"}, path + ".ge");
            channel::GilbertElliott ge;
            ge.p_gb = get_number(g, "p_gb", path + ".ge", 0);
            ge.p_bg = get_number(g, "p_bg", path + ".ge", 0);
            ge.loss_good = get_number(g, "loss_good", path + ".ge", 0);
            ge.loss_bad = get_number(g, "loss_bad", path + ".ge", 0);
            for (double v : {ge.p_gb, ge.p_bg, ge.loss_good, ge.loss_bad}) {
                if (v < 0.0 || v > 1.0) {
                    throw ConfigError("config: " + path + ".ge probabilities must be in [0,1]");
                }
            }
            spec.ge = ge;
        } else if (entry.contains("target_loss")) {
            spec.burst_target = get_number(entry, "target_loss", path, 0);
        } else {
            throw ConfigError("config: " + path + ": burst loss needs 'ge' or 'target_loss'");
        }
        return spec;
    }
    throw ConfigError("config: " + path + ".kind must be 'random' or 'burst'");
}

policy::PolicyConfig parse_policy(const json& entry, const std::string& path) {
    if (entry.is_string()) return policy::PolicyConfig{entry.get<std::string>(), {}, {}, {}};
    if (!entry.is_object()) {
        throw ConfigError("config: " + path + " must be a policy name or an object");
    }
    check_keys(entry, {"name", "p_reliable", "alpha", "rt"}, path);
    if (!entry.contains("name")) throw ConfigError("config: " + path + " needs a 'name'");
    policy::PolicyConfig cfg;
    cfg.name = entry.at("name").get<std::string>();
    if (entry.contains("p_reliable")) cfg.p_reliable = get_number(entry, "p_reliable", path, 0);
    if (entry.contains("alpha")) cfg.alpha = get_number(entry, "alpha", path, 0);
    if (entry.contains("rt")) cfg.rt = get_number(entry, "rt", path, 0);
    return cfg;
}

std::string policy_label(const policy::PolicyConfig& p) {
    std::string label = p.name;
    if (p.p_reliable) label += "[p=" + format_param(*p.p_reliable) + "]";
    if (p.alpha) label += "[alpha=" + format_param(*p.alpha) + "]";
    if (p.rt) label += "[rt=" + format_param(*p.rt) + "]";
    return label;
}

} // namespace

namespace {
SweepConfig parse_config_checked(const json& root);
} // namespace

SweepConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    try {
        return parse_config_checked(root);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

namespace {

SweepConfig parse_config_checked(const json& root) {
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(root,
               {"seed", "runs_per_cell", "duration_s", "buffer_threshold", "workload", "links",
                "losses", "policies"},
               "top level");

    SweepConfig cfg;
    cfg.seed = get_uint(root, "seed", "top level", cfg.seed);
    cfg.runs_per_cell =
        static_cast<std::uint32_t>(get_uint(root, "runs_per_cell", "top level", cfg.runs_per_cell));
    if (cfg.runs_per_cell < 1) throw ConfigError("config: runs_per_cell must be >= 1");
    cfg.duration_s = get_number(root, "duration_s", "top level", cfg.duration_s);
    if (cfg.duration_s <= 0.0) throw ConfigError("config: duration_s must be positive");
    cfg.buffer_threshold = static_cast<std::uint32_t>(
        get_uint(root, "buffer_threshold", "top level", cfg.buffer_threshold));
    if (cfg.buffer_threshold < 1) throw ConfigError("config: buffer_threshold must be >= 1");

    if (root.contains("workload")) {
        const json& w = root.at("workload");
        check_keys(w, {"fps", "mean_size_bytes", "size_jitter_fraction"}, "workload");
        cfg.workload.fps = get_number(w, "fps", "workload", cfg.workload.fps);
        cfg.workload.mean_size_bytes = static_cast<std::uint32_t>(
            get_uint(w, "mean_size_bytes", "workload", cfg.workload.mean_size_bytes));
        cfg.workload.size_jitter_fraction =
            get_number(w, "size_jitter_fraction", "workload", cfg.workload.size_jitter_fraction);
        if (cfg.workload.fps <= 0.0) throw ConfigError("config: workload.fps must be positive");
        if (cfg.workload.size_jitter_fraction < 0.0) {
            throw ConfigError("config: workload.size_jitter_fraction must be >= 0");
        }
    }

    if (root.contains("links")) {
        std::size_t i = 0;
        for (const json& entry : root.at("links")) {
            cfg.links.push_back(parse_link(entry, "links[" + std::to_string(i++) + "]"));
        }
    } else {
        for (const char* name : {"wifi", "sub6", "mmwave"}) {
            cfg.links.push_back(LinkSpec{name, channel::profile_by_name(name)});
        }
    }
    if (cfg.links.empty()) throw ConfigError("config: links must not be empty");

    if (root.contains("losses")) {
        std::size_t i = 0;
        for (const json& entry : root.at("losses")) {
            cfg.losses.push_back(parse_loss(entry, "losses[" + std::to_string(i++) + "]"));
        }
    } else {
        cfg.losses.push_back(LossSpec{}); // random at each link's own ratio
    }
    if (cfg.losses.empty()) throw ConfigError("config: losses must not be empty");

    if (root.contains("policies")) {
        std::size_t i = 0;
        for (const json& entry : root.at("policies")) {
            cfg.policies.push_back(parse_policy(entry, "policies[" + std::to_string(i++) + "]"));
        }
    } else {
        for (const char* name : {"vanilla", "naive", "split80", "split20", "srtt", "loss_aware"}) {
            cfg.policies.push_back(policy::PolicyConfig{name, {}, {}, {}});
        }
    }
    if (cfg.policies.empty()) throw ConfigError("config: policies must not be empty");

    // Fail early on bad policy parameters.
    for (const auto& p : cfg.policies) policy::make_policy(p);

    return cfg;
}

} // namespace

SweepConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<ResolvedScenario> expand_cells(const SweepConfig& cfg) {
    std::vector<ResolvedScenario> cells;
    for (const LinkSpec& link : cfg.links) {
        for (const LossSpec& loss : cfg.losses) {
            for (const policy::PolicyConfig& pol : cfg.policies) {
                ResolvedScenario sc;
                sc.link_name = link.name;
                sc.link = link.profile;
                sc.policy = pol;
                sc.policy_label = policy_label(pol);
                sc.duration_s = cfg.duration_s;
                sc.transport.receiver_buffer_threshold = cfg.buffer_threshold;
                sc.workload.fps = cfg.workload.fps;
                sc.workload.mean_size_bytes = cfg.workload.mean_size_bytes;
                sc.workload.size_jitter_fraction = cfg.workload.size_jitter_fraction;
                sc.workload.duration_us = sim::from_seconds(cfg.duration_s);

                if (loss.kind == LossSpec::Kind::Random) {
                    sc.loss_kind = "random";
                    double p = loss.random_p
                                   ? *loss.random_p
                                   : std::get<channel::RandomLoss>(link.profile.loss).p;
                    sc.loss_param = p;
                    sc.link.loss = channel::RandomLoss{p};
                } else {
                    sc.loss_kind = "burst";
                    channel::GilbertElliott ge =
                        loss.ge ? *loss.ge : channel::ge_for_target_loss(*loss.burst_target);
                    sc.loss_param = channel::stationary_loss(ge);
                    sc.link.loss = ge;
                }

                sc.scenario_id = sc.link_name + "/" + sc.loss_kind + ":" +
                                 format_param(sc.loss_param) + "/" + sc.policy_label;
                cells.push_back(std::move(sc));
            }
        }
    }
    return cells;
}

const std::vector<double>& burst_loss_presets() {
    static const std::vector<double> presets{0.01, 0.03, 0.05, 0.08};
    return presets;
}

std::string describe_presets() {
    std::ostringstream out;
    out << "link presets:\n";
    for (const char* name : {"wifi", "sub6", "mmwave"}) {
        channel::LinkProfile p = channel::profile_by_name(name);
        out << "  " << name << ": " << p.capacity_bps / 1e6 << " Mb/s, "
            << static_cast<double>(p.base_delay_us) / 1e3 << " +- "
            << static_cast<double>(p.jitter_std_us) / 1e3 << " ms, loss "
            << std::get<channel::RandomLoss>(p.loss).p * 100.0 << " %\n";
    }
    out << "burst presets (target average loss; p_bg 0.5, loss_good 0, loss_bad 0.5):\n ";
    for (double t : burst_loss_presets()) {
        channel::GilbertElliott ge = channel::ge_for_target_loss(t);
        out << " " << t * 100.0 << "% (p_gb " << format_param(ge.p_gb) << ")";
    }
    out << "\npolicies: vanilla naive split80 split20 srtt loss_aware\n";
    return out.str();
}

} // namespace relsim::runner
