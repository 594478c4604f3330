#ifndef GFRSIM_RUNNER_H
#define GFRSIM_RUNNER_H

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gfrsim/metrics.h"
#include "gfrsim/scenario.h"
#include "gfrsim/topology.h"

namespace gfrsim {

struct RunSummary {
    std::vector<VcStats> vcs;
    double efficiency = 0.0;
    double fairness = 0.0;
    std::vector<CategoryStats> categories;
    bool gfr = false;
    double max_throughput_bps = 0.0;
    double window_s = 0.0;

    std::uint64_t scenario_hash = 0;
    std::uint64_t trace_hash = 0;
    std::uint64_t events_dispatched = 0;

    std::uint64_t bottleneck_cell_drops = 0;
    std::uint64_t bottleneck_frame_drops = 0;
    std::uint64_t drops_elsewhere = 0;
    std::uint64_t cells_tagged = 0;
    std::uint64_t policer_dropped_frames = 0;

    bool tagging_on = false;
    std::vector<double> clp0_throughput_bps;  // filled when tagging_on
};

std::string run_id_of(std::uint64_t scenario_hash);

// Builds the N-source simulation, runs it, and computes the paper's
// measures over the post-warmup window.
RunSummary run_sim_config(const SimConfig& cfg, std::uint64_t scenario_hash);
RunSummary summarize(const Simulation& sim, std::uint64_t scenario_hash);

// Artifacts: results.csv (per-VC), summary.json, categories.csv (plot-ready
// series), drops.log, and clp0.csv when tagging is on. Byte-identical for
// identical documents.
void write_run_artifacts(const std::filesystem::path& dir, const ScenarioDocument& doc,
                         const RunSummary& summary,
                         const std::vector<DropRecord>& drops, bool drops_truncated);

RunSummary run_scenario(const ScenarioDocument& doc, const std::filesystem::path& out_dir);

// Table-1 style sweep: the 8-way cross of {per-VC accounting} x {network
// tagging} x {per-VC queuing} applied to the base document. Accounting
// selects WBA over the EPD baseline; queuing selects WFQ over FIFO.
struct MatrixRow {
    int row = 0;  // 1-based, Table 1 order
    bool accounting = false;
    bool tagging = false;
    bool queuing = false;
    ScenarioDocument doc;
    RunSummary summary;
    bool failed = false;
    std::string error;
};

ScenarioDocument matrix_row_document(const ScenarioDocument& base, bool accounting, bool tagging,
                                     bool queuing);
// out_dir may be empty to skip per-row artifacts.
std::vector<MatrixRow> run_matrix(const ScenarioDocument& base,
                                  const std::filesystem::path& out_dir = {});
void write_matrix_artifacts(const std::filesystem::path& dir, const ScenarioDocument& base,
                            const std::vector<MatrixRow>& rows);

}  // namespace gfrsim

#endif
