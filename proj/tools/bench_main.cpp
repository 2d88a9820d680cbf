// Compares the serial reference sweep against the OpenMP-parallel one:
// wall time for each, speedup, and a byte-level check that both produce
// the identical CSV.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "relsim/errors.hpp"
#include "relsim/runner/scenario.hpp"
#include "relsim/runner/sweep.hpp"

namespace {

const char* kDefaultConfig = R"json({
  "seed": 7,
  "runs_per_cell": 4,
  "duration_s": 5.0,
  "links": ["wifi", "sub6", "mmwave"],
  "losses": [{"kind": "random"}],
  "policies": ["vanilla", "naive", "split80", "split20", "srtt", "loss_aware"]
})json";

double timed_csv(const relsim::runner::SweepConfig& cfg, int jobs, std::string& csv_out) {
    auto start = std::chrono::steady_clock::now();
    auto rows = relsim::runner::run_sweep(cfg, jobs);
    auto stop = std::chrono::steady_clock::now();
    csv_out = relsim::runner::to_csv(rows);
    return std::chrono::duration<double>(stop - start).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relsim-bench - serial vs parallel sweep execution"};
    std::string config_path;
    int jobs = 0;
    int repeat = 1;
    app.add_option("--config", config_path, "sweep config (default: built-in 18-cell sweep)");
    app.add_option("--jobs", jobs, "threads for the parallel pass (0 = all cores)")
        ->capture_default_str();
    app.add_option("--repeat", repeat, "passes per mode, best time wins")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        relsim::runner::SweepConfig cfg = config_path.empty()
                                              ? relsim::runner::parse_config(kDefaultConfig)
                                              : relsim::runner::load_config_file(config_path);
        std::size_t n_runs = relsim::runner::expand_cells(cfg).size() * cfg.runs_per_cell;
        std::cout << "sweep: " << n_runs << " runs of " << cfg.duration_s << " s sessions\n";

        std::string serial_csv, parallel_csv;
        double serial_s = 1e300;
        double parallel_s = 1e300;
        for (int i = 0; i < repeat; ++i) {
            serial_s = std::min(serial_s, timed_csv(cfg, 1, serial_csv));
            parallel_s = std::min(parallel_s, timed_csv(cfg, jobs, parallel_csv));
        }

        std::printf("serial   : %8.3f s\n", serial_s);
        std::printf("parallel : %8.3f s   (speedup %.2fx)\n", parallel_s, serial_s / parallel_s);

        if (serial_csv != parallel_csv) {
            std::cerr << "MISMATCH: parallel CSV differs from serial reference\n";
            return 2;
        }
        std::cout << "outputs byte-identical\n";
        return 0;
    } catch (const relsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const relsim::SimInvariantError& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return 2;
    }
}
