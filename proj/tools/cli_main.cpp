// Experiment sweep driver: runs the scenario matrix from a JSON config,
// writes one CSV row per (scenario, seed) run and prints the per-cell
// summary with vanilla-normalized KPIs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "relsim/errors.hpp"
#include "relsim/runner/scenario.hpp"
#include "relsim/runner/summary.hpp"
#include "relsim/runner/sweep.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"relsim - partially reliable transport simulator"};

    std::string config_path;
    std::string output_path = "results.csv";
    std::string summary_path;
    std::uint64_t seed = 0;
    std::uint32_t runs = 0;
    int jobs = 0;
    bool list_presets = false;

    app.add_option("--config", config_path, "sweep configuration file (JSON)");
    app.add_option("--output", output_path, "CSV output path")->capture_default_str();
    app.add_option("--summary", summary_path, "write machine-readable summary (JSON) here");
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    auto* runs_opt = app.add_option("--runs", runs, "override runs_per_cell");
    app.add_option("--jobs", jobs, "parallel runs: 0 = all cores, 1 = serial")
        ->capture_default_str();
    app.add_flag("--list-presets", list_presets, "print link/burst/policy presets and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (list_presets) {
        std::cout << relsim::runner::describe_presets();
        return 0;
    }
    if (config_path.empty()) {
        std::cerr << "config error: --config is required (or use --list-presets)\n";
        return 1;
    }

    relsim::runner::SweepConfig cfg = relsim::runner::load_config_file(config_path);
    if (!seed_opt->empty()) cfg.seed = seed;
    if (!runs_opt->empty()) {
        if (runs < 1) throw relsim::ConfigError("--runs must be >= 1");
        cfg.runs_per_cell = runs;
    }

    std::vector<relsim::runner::RunResult> rows = relsim::runner::run_sweep(cfg, jobs);

    std::ofstream csv(output_path, std::ios::binary);
    if (!csv) throw relsim::ConfigError("cannot write '" + output_path + "'");
    csv << relsim::runner::to_csv(rows);
    csv.close();

    relsim::runner::SummaryResult summary = relsim::runner::summarize(rows);
    std::cout << relsim::runner::render_text(summary);
    for (const std::string& w : summary.warnings) std::cerr << "warning: " << w << '\n';

    if (!summary_path.empty()) {
        std::ofstream js(summary_path, std::ios::binary);
        if (!js) throw relsim::ConfigError("cannot write '" + summary_path + "'");
        js << relsim::runner::render_json(summary);
    }

    std::cout << rows.size() << " runs -> " << output_path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const relsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const relsim::SimInvariantError& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return 2;
    }
}
