#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relsim/runner/session.hpp"

namespace relsim::runner {

/// Per-cell aggregate over seeds: medians and quartiles of the headline
/// KPIs, plus KPIs normalized against the vanilla cell's mean within the
/// same (link, loss) stratum. The real-time flag marks cells whose
/// median peak AoI stays within the 10 ms bound.
struct CellSummary {
    std::string scenario_id;
    std::string link;
    std::string loss_kind;
    double loss_param = 0.0;
    std::string policy;
    std::size_t runs = 0;

    double volume_median = 0.0, volume_q1 = 0.0, volume_q3 = 0.0;
    double backlog_median = 0.0;
    double reliable_fraction_median = 0.0;
    double peak_occupancy_median = 0.0; // receive-buffer diagnostic
    std::optional<double> aoi_median_ms, aoi_q1_ms, aoi_q3_ms;

    std::optional<double> norm_volume_median;
    std::optional<double> norm_backlog_median;
    std::optional<double> norm_acks_median;

    std::optional<bool> real_time_ok; // median AoI <= 10 ms
};

struct SummaryResult {
    std::vector<CellSummary> cells;
    std::vector<std::string> warnings; // e.g. a stratum without a vanilla baseline
};

SummaryResult summarize(const std::vector<RunResult>& rows);

std::string render_text(const SummaryResult& summary);
std::string render_json(const SummaryResult& summary);

/// Order statistics used by the summary (exposed for tests).
double median(std::vector<double> values);
double quartile1(std::vector<double> values);
double quartile3(std::vector<double> values);

} // namespace relsim::runner
