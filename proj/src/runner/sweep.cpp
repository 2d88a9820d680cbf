#include "relsim/runner/sweep.hpp"

#include <cstdio>
#include <exception>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace relsim::runner {

namespace {

struct Job {
    const ResolvedScenario* cell;
    std::uint64_t seed;
};

std::vector<Job> flatten(const std::vector<ResolvedScenario>& cells, const SweepConfig& cfg) {
    std::vector<Job> jobs;
    jobs.reserve(cells.size() * cfg.runs_per_cell);
    for (const ResolvedScenario& cell : cells) {
        for (std::uint32_t run = 0; run < cfg.runs_per_cell; ++run) {
            jobs.push_back(Job{&cell, cfg.seed + run});
        }
    }
    return jobs;
}

} // namespace

std::vector<RunResult> run_sweep(const SweepConfig& cfg, int jobs) {
    std::vector<ResolvedScenario> cells = expand_cells(cfg);
    std::vector<Job> work = flatten(cells, cfg);
    std::vector<RunResult> rows(work.size());
    std::vector<std::exception_ptr> errors(work.size());

    auto execute = [&](std::size_t i) {
        try {
            rows[i] = run_session(*work[i].cell, work[i].seed);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

#ifdef _OPENMP
    if (jobs != 1) {
        int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(work.size()); ++i) {
            execute(static_cast<std::size_t>(i));
        }
    } else {
        for (std::size_t i = 0; i < work.size(); ++i) execute(i);
    }
#else
    (void)jobs;
    for (std::size_t i = 0; i < work.size(); ++i) execute(i);
#endif

    for (const std::exception_ptr& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return rows;
}

std::string to_csv(const std::vector<RunResult>& rows) {
    std::ostringstream out;
    out << "scenario_id,policy,link,loss_kind,loss_param,seed,duration_s,data_sent,retx,acks,"
           "pings,drops_rel,drops_unrel,backlog_events,buffer_discards,updates_delivered,"
           "updates_incomplete,peak_aoi_us,reliable_fraction\n";
    char buf[64];
    for (const RunResult& r : rows) {
        out << r.scenario_id << ',' << r.policy << ',' << r.link << ',' << r.loss_kind << ',';
        std::snprintf(buf, sizeof buf, "%.6g", r.loss_param);
        out << buf << ',' << r.seed << ',';
        std::snprintf(buf, sizeof buf, "%.3f", r.duration_s);
        out << buf << ',' << r.k.data_packets_sent << ',' << r.k.retransmissions << ','
            << r.k.acks_sent << ',' << r.k.pings_sent << ',' << r.k.drops_reliable << ','
            << r.k.drops_unreliable << ',' << r.k.backlog_events << ',' << r.k.buffer_discards
            << ',' << r.k.updates_delivered << ',' << r.k.updates_incomplete << ',';
        if (r.peak_aoi_us) {
            std::snprintf(buf, sizeof buf, "%.3f", *r.peak_aoi_us);
            out << buf;
        }
        out << ',';
        std::snprintf(buf, sizeof buf, "%.6f", r.reliable_fraction);
        out << buf << '\n';
    }
    return out.str();
}

} // namespace relsim::runner
