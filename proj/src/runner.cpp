#include "gfrsim/runner.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <stdexcept>

#include <json.hpp>

#include "gfrsim/aal5.h"
#include "gfrsim/version.h"

namespace gfrsim {

using nlohmann::json;

namespace {

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

const char* reason_name(DropReason r) {
    switch (r) {
    case DropReason::Policy: return "policy";
    case DropReason::Overflow: return "overflow";
    case DropReason::Policer: return "policer";
    }
    return "?";
}

}  // namespace

std::string run_id_of(std::uint64_t scenario_hash) { return hex16(scenario_hash); }

RunSummary summarize(const Simulation& sim, std::uint64_t scenario_hash) {
    const SimConfig& cfg = sim.config();
    RunSummary s;
    s.scenario_hash = scenario_hash;
    s.trace_hash = sim.trace_hash();
    s.events_dispatched = sim.dispatched();
    s.window_s = sim.window_seconds();
    s.max_throughput_bps = max_tcp_throughput(cfg.tcp.mss, cfg.link_bandwidth_bps);

    for (VcId vc = 0; vc < cfg.n_sources; ++vc) {
        s.vcs.push_back(make_vc_stats(vc, cfg.vcs[vc].category, sim.delivered_bytes_in_window(vc),
                                      s.window_s, cfg.vcs[vc].target_bps,
                                      cfg.vcs[vc].mcr_cells_s));
    }
    s.efficiency = efficiency(s.vcs, s.max_throughput_bps);
    s.fairness = fairness_index(s.vcs);
    s.categories = category_report(s.vcs);
    s.gfr = gfr_verdict(s.vcs);

    const OutputPort& bn = sim.bottleneck();
    s.bottleneck_cell_drops = bn.cells_dropped();
    s.bottleneck_frame_drops = bn.buffer().frames_dropped() + bn.policer_dropped_frames();
    s.drops_elsewhere = sim.drops_off_bottleneck();
    s.cells_tagged = bn.cells_tagged();
    s.policer_dropped_frames = bn.policer_dropped_frames();

    s.tagging_on = cfg.tagging != TaggingMode::Off;
    if (s.tagging_on) {
        for (VcId vc = 0; vc < cfg.n_sources; ++vc) {
            double bps = static_cast<double>(sim.destination(vc).clp0_frame_bytes()) * 8.0 /
                         to_sec(cfg.duration);
            s.clp0_throughput_bps.push_back(bps);
        }
    }
    return s;
}

RunSummary run_sim_config(const SimConfig& cfg, std::uint64_t scenario_hash) {
    Simulation sim(cfg);
    sim.bottleneck().enable_drop_log(1u << 20);
    sim.run();
    return summarize(sim, scenario_hash);
}

void write_run_artifacts(const std::filesystem::path& dir, const ScenarioDocument& doc,
                         const RunSummary& summary,
                         const std::vector<DropRecord>& drops, bool drops_truncated) {
    std::filesystem::create_directories(dir);
    std::string run_id = run_id_of(summary.scenario_hash);
    std::string header = std::string("# ") + kToolName + " " + kToolVersion +
                         "\n# scenario_hash=" + hex16(summary.scenario_hash) + "\n";

    {
        std::ofstream csv(dir / "results.csv");
        csv << header << "run_id,vc,category,mcr_bps,throughput_bps,target_bps,ratio\n";
        for (const VcStats& v : summary.vcs) {
            csv << run_id << ',' << v.vc << ',' << v.category << ',' << fmt(v.mcr_bps) << ','
                << fmt(v.throughput_bps) << ',' << fmt(v.target_bps) << ',' << fmt(v.ratio())
                << '\n';
        }
    }
    {
        std::ofstream csv(dir / "categories.csv");
        csv << header << "category,target_bps,mean_ratio,stddev_bps,mean_throughput_bps,count\n";
        for (const CategoryStats& c : summary.categories) {
            csv << c.category << ',' << fmt(c.target_bps) << ',' << fmt(c.mean_ratio) << ','
                << fmt(c.stddev_bps) << ',' << fmt(c.mean_throughput_bps) << ',' << c.count
                << '\n';
        }
    }
    {
        json cats = json::array();
        for (const CategoryStats& c : summary.categories) {
            cats.push_back({{"category", c.category},
                            {"target_bps", c.target_bps},
                            {"mean_ratio", c.mean_ratio},
                            {"stddev_bps", c.stddev_bps},
                            {"mean_throughput_bps", c.mean_throughput_bps},
                            {"count", c.count}});
        }
        json j = {{"tool", kToolName},
                  {"version", kToolVersion},
                  {"run_id", run_id},
                  {"scenario_hash", hex16(summary.scenario_hash)},
                  {"trace_hash", hex16(summary.trace_hash)},
                  {"events_dispatched", summary.events_dispatched},
                  {"window_s", summary.window_s},
                  {"efficiency", summary.efficiency},
                  {"fairness", summary.fairness},
                  {"gfr_verdict", summary.gfr ? "Yes" : "No"},
                  {"max_throughput_bps", summary.max_throughput_bps},
                  {"categories", cats},
                  {"bottleneck_cell_drops", summary.bottleneck_cell_drops},
                  {"bottleneck_frame_drops", summary.bottleneck_frame_drops},
                  {"drops_elsewhere", summary.drops_elsewhere},
                  {"cells_tagged", summary.cells_tagged},
                  {"policer_dropped_frames", summary.policer_dropped_frames},
                  {"scenario", json::parse(doc.canonical_json())}};
        if (summary.tagging_on) j["clp0_throughput_bps"] = summary.clp0_throughput_bps;
        std::ofstream out(dir / "summary.json");
        out << j.dump(2) << '\n';
    }
    {
        std::ofstream log(dir / "drops.log");
        log << header;
        for (const DropRecord& d : drops) {
            log << d.t << ' ' << d.vc << ' ' << d.frame_id << ' ' << drop_policy_name(d.policy)
                << ' ' << reason_name(d.reason) << '\n';
        }
        if (drops_truncated) log << "# truncated\n";
    }
    if (summary.tagging_on) {
        std::ofstream csv(dir / "clp0.csv");
        csv << header << "vc,clp0_throughput_bps\n";
        for (std::size_t vc = 0; vc < summary.clp0_throughput_bps.size(); ++vc)
            csv << vc << ',' << fmt(summary.clp0_throughput_bps[vc]) << '\n';
    }
}

RunSummary run_scenario(const ScenarioDocument& doc, const std::filesystem::path& out_dir) {
    SimConfig cfg = doc.to_sim_config();  // validate before touching the fs
    Simulation sim(cfg);
    sim.bottleneck().enable_drop_log(1u << 20);
    sim.run();
    RunSummary summary = summarize(sim, doc.hash());
    write_run_artifacts(out_dir, doc, summary, sim.bottleneck().drop_log(),
                        sim.bottleneck().drop_log_truncated());
    return summary;
}

ScenarioDocument matrix_row_document(const ScenarioDocument& base, bool accounting, bool tagging,
                                     bool queuing) {
    ScenarioDocument doc = base;
    doc.buffer_policy = accounting ? "wba" : "epd";
    doc.tagging = tagging ? "tag" : "off";
    doc.scheduler = queuing ? "wfq" : "fifo";
    return doc;
}

std::vector<MatrixRow> run_matrix(const ScenarioDocument& base,
                                  const std::filesystem::path& out_dir) {
    if (base.allocation != "unequal-5-groups")
        throw std::invalid_argument("matrix base scenario must use unequal-5-groups allocation");
    base.to_sim_config();  // full validation up front

    // Table 1 row order: queuing varies slowest, then tagging, then accounting.
    std::vector<MatrixRow> rows;
    int idx = 1;
    for (int queuing = 0; queuing <= 1; ++queuing)
        for (int tagging = 0; tagging <= 1; ++tagging)
            for (int accounting = 0; accounting <= 1; ++accounting) {
                MatrixRow row;
                row.row = idx++;
                row.accounting = accounting;
                row.tagging = tagging;
                row.queuing = queuing;
                row.doc = matrix_row_document(base, accounting, tagging, queuing);
                rows.push_back(std::move(row));
            }

    // One engine per worker; each row writes only its own directory. A row
    // failure leaves the other rows' results in place.
    std::vector<std::future<RunSummary>> futures;
    futures.reserve(rows.size());
    for (MatrixRow& row : rows) {
        futures.push_back(std::async(std::launch::async, [&row, &out_dir] {
            if (out_dir.empty()) return run_sim_config(row.doc.to_sim_config(), row.doc.hash());
            return run_scenario(row.doc, out_dir / ("row" + std::to_string(row.row)));
        }));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        try {
            rows[i].summary = futures[i].get();
        } catch (const std::exception& e) {
            rows[i].failed = true;
            rows[i].error = e.what();
        }
    }
    return rows;
}

void write_matrix_artifacts(const std::filesystem::path& dir, const ScenarioDocument& base,
                            const std::vector<MatrixRow>& rows) {
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "matrix.csv");
    csv << "# " << kToolName << ' ' << kToolVersion << "\n# base_scenario_hash="
        << hex16(base.hash()) << '\n'
        << "row,accounting,tagging,queuing,gfr_verdict,efficiency,min_vc_ratio\n";
    for (const MatrixRow& row : rows) {
        csv << row.row << ',' << (row.accounting ? 'X' : '-') << ',' << (row.tagging ? 'X' : '-')
            << ',' << (row.queuing ? 'X' : '-') << ',';
        if (row.failed) {
            csv << "error,,\n";
            continue;
        }
        double min_ratio = 0.0;
        if (!row.summary.vcs.empty()) {
            min_ratio = row.summary.vcs.front().ratio();
            for (const VcStats& v : row.summary.vcs) min_ratio = std::min(min_ratio, v.ratio());
        }
        csv << (row.summary.gfr ? "Yes" : "No") << ',' << fmt(row.summary.efficiency) << ','
            << fmt(min_ratio) << '\n';
    }
}

}  // namespace gfrsim
