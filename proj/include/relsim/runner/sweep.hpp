#pragma once

#include <string>
#include <vector>

#include "relsim/runner/scenario.hpp"
#include "relsim/runner/session.hpp"

namespace relsim::runner {

/// Executes every cell x runs_per_cell. Runs are independent seeded
/// simulations; with jobs != 1 they execute in parallel (OpenMP), but
/// rows always come back ordered by (cell index, run index) and are
/// byte-for-byte identical to a serial execution. Per-run seed is
/// config seed + run index, recorded in the row.
///   jobs == 0: all hardware threads, jobs == 1: serial reference,
///   jobs == n: n threads.
std::vector<RunResult> run_sweep(const SweepConfig& cfg, int jobs = 0);

/// Flat CSV with one row per run. Column order is fixed.
std::string to_csv(const std::vector<RunResult>& rows);

} // namespace relsim::runner
