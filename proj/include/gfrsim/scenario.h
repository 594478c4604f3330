#ifndef GFRSIM_SCENARIO_H
#define GFRSIM_SCENARIO_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfrsim/topology.h"

namespace gfrsim {

// Scenario document, JSON syntax with a strict schema: four sections
// (topology, tcp, gfr, run), unknown keys rejected. Every field has a
// default; the canonical form (defaults filled in) is what gets hashed.
struct ScenarioDocument {
    // topology
    std::uint32_t n_sources = 15;
    double link_bandwidth_bps = 155.52e6;
    double link_delay_ms = 5.0;
    std::uint64_t buffer_cells = 12000;
    // tcp
    std::uint32_t mss_bytes = 1024;
    std::uint64_t rcv_wnd_bytes = 600000;
    std::uint32_t timer_granularity_ms = 100;
    // gfr
    std::string allocation = "equal";         // equal | unequal-5-groups | explicit list
    std::vector<double> explicit_alloc_bps;   // used when allocation == "explicit"
    std::string tagging = "off";              // off | tag | drop
    std::string buffer_policy = "selective";  // tail | epd | selective | wba
    std::optional<double> r;                  // threshold as a fraction of the buffer
    std::optional<double> z;
    std::string scheduler = "fifo";  // fifo | wfq
    // run
    double duration_s = 5.0;
    std::uint64_t seed = 1;
    double warmup_s = 0.0;

    static ScenarioDocument from_json_text(const std::string& text);
    static ScenarioDocument load_file(const std::string& path);

    std::string canonical_json() const;
    std::uint64_t hash() const;  // FNV-1a over the canonical form

    // Per-policy defaults: selective r=0.9 z=0.8, wba r=0.5 z=1.0, epd r=0.9.
    double resolved_r() const;
    double resolved_z() const;

    SimConfig to_sim_config() const;  // full semantic validation
};

}  // namespace gfrsim

#endif
