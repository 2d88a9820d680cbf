#include "relsim/runner/summary.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "relsim/errors.hpp"

namespace relsim::runner {

namespace {

double sorted_median(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    std::size_t n = hi - lo;
    std::size_t mid = lo + n / 2;
    return n % 2 == 1 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

std::string fmt(double v, const char* spec = "%.3f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw SimInvariantError("median of empty sample");
    std::sort(values.begin(), values.end());
    return sorted_median(values, 0, values.size());
}

double quartile1(std::vector<double> values) {
    if (values.size() < 2) throw SimInvariantError("quartile of a sample of < 2");
    std::sort(values.begin(), values.end());
    return sorted_median(values, 0, values.size() / 2);
}

double quartile3(std::vector<double> values) {
    if (values.size() < 2) throw SimInvariantError("quartile of a sample of < 2");
    std::sort(values.begin(), values.end());
    return sorted_median(values, (values.size() + 1) / 2, values.size());
}

SummaryResult summarize(const std::vector<RunResult>& rows) {
    SummaryResult out;

    // Group rows per cell, preserving first-appearance order.
    std::vector<std::string> cell_order;
    std::map<std::string, std::vector<const RunResult*>> cells;
    for (const RunResult& r : rows) {
        auto [it, inserted] = cells.try_emplace(r.scenario_id);
        if (inserted) cell_order.push_back(r.scenario_id);
        it->second.push_back(&r);
    }

    // Vanilla baselines (means) per (link, loss) stratum.
    struct Baseline {
        double volume = 0.0, backlog = 0.0, acks = 0.0;
        std::size_t n = 0;
    };
    std::map<std::string, Baseline> baselines;
    auto stratum_of = [](const RunResult& r) {
        return r.link + "/" + r.loss_kind + ":" + fmt(r.loss_param, "%.6g");
    };
    for (const RunResult& r : rows) {
        if (r.policy != "vanilla") continue;
        Baseline& b = baselines[stratum_of(r)];
        b.volume += static_cast<double>(r.k.session_packet_volume());
        b.backlog += static_cast<double>(r.k.backlog_events);
        b.acks += static_cast<double>(r.k.acks_sent);
        ++b.n;
    }

    for (const std::string& id : cell_order) {
        const auto& cell_rows = cells.at(id);
        const RunResult& first = *cell_rows.front();

        CellSummary s;
        s.scenario_id = id;
        s.link = first.link;
        s.loss_kind = first.loss_kind;
        s.loss_param = first.loss_param;
        s.policy = first.policy;
        s.runs = cell_rows.size();

        std::vector<double> volume, backlog, acks, aoi_ms, rel_frac, occupancy;
        for (const RunResult* r : cell_rows) {
            volume.push_back(static_cast<double>(r->k.session_packet_volume()));
            backlog.push_back(static_cast<double>(r->k.backlog_events));
            acks.push_back(static_cast<double>(r->k.acks_sent));
            rel_frac.push_back(r->reliable_fraction);
            occupancy.push_back(static_cast<double>(r->k.peak_buffer_occupancy));
            if (r->peak_aoi_us) aoi_ms.push_back(*r->peak_aoi_us / 1e3);
        }

        s.volume_median = median(volume);
        s.backlog_median = median(backlog);
        s.reliable_fraction_median = median(rel_frac);
        s.peak_occupancy_median = median(occupancy);
        if (volume.size() >= 2) {
            s.volume_q1 = quartile1(volume);
            s.volume_q3 = quartile3(volume);
        } else {
            s.volume_q1 = s.volume_q3 = s.volume_median;
        }
        if (!aoi_ms.empty()) {
            s.aoi_median_ms = median(aoi_ms);
            if (aoi_ms.size() >= 2) {
                s.aoi_q1_ms = quartile1(aoi_ms);
                s.aoi_q3_ms = quartile3(aoi_ms);
            }
            s.real_time_ok = *s.aoi_median_ms <= 10.0;
        }

        auto base = baselines.find(stratum_of(first));
        if (base != baselines.end() && base->second.n > 0) {
            const Baseline& b = base->second;
            double n = static_cast<double>(b.n);
            if (b.volume > 0) s.norm_volume_median = s.volume_median / (b.volume / n);
            if (b.backlog > 0) s.norm_backlog_median = s.backlog_median / (b.backlog / n);
            if (b.acks > 0) s.norm_acks_median = median(acks) / (b.acks / n);
        } else {
            out.warnings.push_back("stratum " + stratum_of(first) +
                                   " has no vanilla cell; normalized columns omitted");
        }

        out.cells.push_back(std::move(s));
    }

    // Deduplicate stratum warnings (one per cell otherwise).
    std::sort(out.warnings.begin(), out.warnings.end());
    out.warnings.erase(std::unique(out.warnings.begin(), out.warnings.end()),
                       out.warnings.end());
    return out;
}

std::string render_text(const SummaryResult& summary) {
    std::ostringstream out;
    out << "cell                                            runs  volume(med)   norm   backlog"
           "   norm    aoi_ms(med)   rt\n";
    for (const CellSummary& s : summary.cells) {
        std::string id = s.scenario_id;
        if (id.size() < 48) id.resize(48, ' ');
        out << id << fmt(static_cast<double>(s.runs), "%4.0f") << "  "
            << fmt(s.volume_median, "%11.1f") << "  "
            << (s.norm_volume_median ? fmt(*s.norm_volume_median, "%5.3f") : "    -") << "  "
            << fmt(s.backlog_median, "%8.1f") << "  "
            << (s.norm_backlog_median ? fmt(*s.norm_backlog_median, "%5.3f") : "    -") << "  "
            << (s.aoi_median_ms ? fmt(*s.aoi_median_ms, "%13.3f") : "            -") << "  "
            << (s.real_time_ok ? (*s.real_time_ok ? "yes" : "NO") : "-") << '\n';
    }
    return out.str();
}

std::string render_json(const SummaryResult& summary) {
    nlohmann::ordered_json root;
    root["cells"] = nlohmann::ordered_json::array();
    for (const CellSummary& s : summary.cells) {
        nlohmann::ordered_json c;
        c["scenario_id"] = s.scenario_id;
        c["link"] = s.link;
        c["loss_kind"] = s.loss_kind;
        c["loss_param"] = s.loss_param;
        c["policy"] = s.policy;
        c["runs"] = s.runs;
        c["volume_median"] = s.volume_median;
        c["volume_q1"] = s.volume_q1;
        c["volume_q3"] = s.volume_q3;
        c["backlog_median"] = s.backlog_median;
        c["reliable_fraction_median"] = s.reliable_fraction_median;
        c["peak_occupancy_median"] = s.peak_occupancy_median;
        if (s.aoi_median_ms) {
            c["aoi_median_ms"] = *s.aoi_median_ms;
            if (s.aoi_q1_ms) c["aoi_q1_ms"] = *s.aoi_q1_ms;
            if (s.aoi_q3_ms) c["aoi_q3_ms"] = *s.aoi_q3_ms;
            c["real_time_ok"] = *s.real_time_ok;
        }
        if (s.norm_volume_median) c["norm_volume_median"] = *s.norm_volume_median;
        if (s.norm_backlog_median) c["norm_backlog_median"] = *s.norm_backlog_median;
        if (s.norm_acks_median) c["norm_acks_median"] = *s.norm_acks_median;
        root["cells"].push_back(std::move(c));
    }
    root["warnings"] = summary.warnings;
    return root.dump(2) + "\n";
}

} // namespace relsim::runner
