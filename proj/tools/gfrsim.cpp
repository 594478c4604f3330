// Command-line front end: runs single scenarios, the full design-options
// sweep, trace replay through the frame policer, and document validation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gfrsim/policer.h"
#include "gfrsim/runner.h"
#include "gfrsim/scenario.h"
#include "gfrsim/version.h"

namespace {

int cmd_simulate(const std::string& file, const std::string& out,
                 std::optional<double> duration_s, std::optional<std::uint64_t> seed) {
    gfrsim::ScenarioDocument doc = gfrsim::ScenarioDocument::load_file(file);
    // Command-line overrides beat file values.
    if (duration_s) doc.duration_s = *duration_s;
    if (seed) doc.seed = *seed;
    gfrsim::RunSummary s = gfrsim::run_scenario(doc, out);
    std::printf("run %s: efficiency=%.4f fairness=%.4f gfr=%s drops=%llu\n",
                gfrsim::run_id_of(s.scenario_hash).c_str(), s.efficiency, s.fairness,
                s.gfr ? "Yes" : "No",
                static_cast<unsigned long long>(s.bottleneck_cell_drops));
    std::printf("artifacts written to %s\n", out.c_str());
    return 0;
}

int cmd_matrix(const std::string& file, const std::string& out) {
    gfrsim::ScenarioDocument base = gfrsim::ScenarioDocument::load_file(file);
    std::vector<gfrsim::MatrixRow> rows = gfrsim::run_matrix(base, out);
    gfrsim::write_matrix_artifacts(out, base, rows);
    bool any_failed = false;
    std::printf("acct tag queue | gfr\n");
    for (const gfrsim::MatrixRow& row : rows) {
        if (row.failed) {
            any_failed = true;
            std::printf("  %c    %c    %c  | error: %s\n", row.accounting ? 'X' : '-',
                        row.tagging ? 'X' : '-', row.queuing ? 'X' : '-', row.error.c_str());
        } else {
            std::printf("  %c    %c    %c  | %s\n", row.accounting ? 'X' : '-',
                        row.tagging ? 'X' : '-', row.queuing ? 'X' : '-',
                        row.summary.gfr ? "Yes" : "No");
        }
    }
    std::printf("matrix table written to %s/matrix.csv\n", out.c_str());
    return any_failed ? 1 : 0;
}

int cmd_police_trace(const std::string& file, double mcr, double pcr,
                     std::uint32_t max_frame_cells, double cdvt) {
    std::ifstream in(file);
    if (!in) {
        std::fprintf(stderr, "cannot open trace file: %s\n", file.c_str());
        return 1;
    }
    auto trace = gfrsim::parse_frame_trace(in);
    auto contract = gfrsim::GfrContract::make(mcr, pcr, max_frame_cells, cdvt);
    auto verdicts = gfrsim::classify_frame_trace(trace, contract);
    gfrsim::write_verdicts(std::cout, verdicts);
    return 0;
}

int cmd_validate(const std::string& file) {
    gfrsim::ScenarioDocument doc = gfrsim::ScenarioDocument::load_file(file);
    doc.to_sim_config();
    std::printf("%s: valid (hash %s)\n", file.c_str(), gfrsim::run_id_of(doc.hash()).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(gfrsim::kToolName) +
                 " - TCP over ATM GFR simulator (minimum-rate guarantee studies)"};
    app.set_version_flag("--version", gfrsim::kToolVersion);
    app.require_subcommand(1);

    std::string scenario_file, out_dir = "out", trace_file;
    std::optional<double> duration_s;
    std::optional<std::uint64_t> seed;
    double mcr = 0.0, pcr = 0.0, cdvt = 0.0;
    std::uint32_t max_frame_cells = 0;

    auto* sim = app.add_subcommand(
        "simulate", "Run one scenario and write results.csv / summary.json / categories.csv");
    sim->add_option("scenario", scenario_file, "Scenario document (JSON)")->required();
    sim->add_option("--out", out_dir, "Output directory (default: out)");
    sim->add_option("--duration-s", duration_s, "Override run.duration_s from the document");
    sim->add_option("--seed", seed, "Override run.seed from the document");

    auto* mat = app.add_subcommand(
        "matrix", "Run the 8-row accounting/tagging/queuing sweep on an unequal-allocation base");
    mat->add_option("scenario", scenario_file, "Base scenario document (JSON)")->required();
    mat->add_option("--out", out_dir, "Output directory (default: out)");

    auto* pol = app.add_subcommand(
        "police-trace",
        "Replay a frame trace (lines: arrival_ns frame_cells) through the F-GCRA tagger; "
        "prints one verdict per frame");
    pol->add_option("trace", trace_file, "Trace file")->required();
    pol->add_option("--mcr", mcr, "Minimum cell rate, cells/s")->required();
    pol->add_option("--pcr", pcr, "Peak cell rate, cells/s")->required();
    pol->add_option("--max-frame-cells", max_frame_cells, "Maximum frame size in cells")
        ->required();
    pol->add_option("--cdvt", cdvt, "Cell delay variation tolerance, seconds (default 0)");

    auto* val = app.add_subcommand("validate", "Check a scenario document against the schema");
    val->add_option("scenario", scenario_file, "Scenario document (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(scenario_file, out_dir, duration_s, seed);
        if (mat->parsed()) return cmd_matrix(scenario_file, out_dir);
        if (pol->parsed()) return cmd_police_trace(trace_file, mcr, pcr, max_frame_cells, cdvt);
        if (val->parsed()) return cmd_validate(scenario_file);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
