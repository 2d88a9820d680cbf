#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "relsim/channel/link.hpp"
#include "relsim/metrics/kpi.hpp"
#include "relsim/metrics/update_ledger.hpp"
#include "relsim/runner/scenario.hpp"

namespace relsim::runner {

/// One row of the results CSV: one (scenario, seed) run.
struct RunResult {
    std::string scenario_id;
    std::string policy;
    std::string link;
    std::string loss_kind;
    double loss_param = 0.0;
    std::uint64_t seed = 0;
    double duration_s = 0.0;
    metrics::KpiCounters k;
    std::optional<double> peak_aoi_us;
    double reliable_fraction = 0.0;
};

/// Test instrumentation for a single run.
struct RunHooks {
    channel::Link::Tap data_tap;
    channel::Link::Tap ack_tap;
    channel::Link::DropOverride data_drop_override;
    metrics::UpdateLedger::DeliveryTap delivery_tap;
};

/// Executes one seeded run to completion. Deterministic: equal
/// (scenario, seed) pairs produce identical results.
RunResult run_session(const ResolvedScenario& scenario, std::uint64_t seed,
                      const RunHooks* hooks = nullptr);

} // namespace relsim::runner
