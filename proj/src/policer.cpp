#include "gfrsim/policer.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gfrsim {

GfrContract GfrContract::make(double mcr_cells_s, double pcr_cells_s,
                              std::uint32_t max_frame_cells, double cdvt_s) {
    if (mcr_cells_s <= 0.0 || pcr_cells_s <= 0.0)
        throw std::invalid_argument("MCR and PCR must be positive");
    if (mcr_cells_s > pcr_cells_s)
        throw std::invalid_argument("MCR must not exceed PCR");
    if (max_frame_cells == 0)
        throw std::invalid_argument("max_frame_cells must be positive");
    if (cdvt_s < 0.0)
        throw std::invalid_argument("CDVT must be non-negative");

    GfrContract c;
    c.mcr_cells_s = mcr_cells_s;
    c.pcr_cells_s = pcr_cells_s;
    c.max_frame_cells = max_frame_cells;
    c.cdvt_s = cdvt_s;
    c.increment = std::llround(1e9 / mcr_cells_s);
    if (c.increment < 1) c.increment = 1;
    c.limit = std::llround((cdvt_s + c.burst_tolerance_s() / 2.0) * 1e9);
    return c;
}

CellVerdict FgcraPolicer::first_cell(SimTime t) {
    std::int64_t x1 = x_ - static_cast<std::int64_t>(t - lct_);
    if (x1 < 0) x1 = 0;
    if (x1 > contract_.limit) {
        tagging_ = true;
        return CellVerdict::Tagged;
    }
    tagging_ = false;
    x_ = x1 + contract_.increment;
    lct_ = t;
    return CellVerdict::Conforming;
}

CellVerdict FgcraPolicer::mid_cell(SimTime t, bool eom) {
    if (tagging_) {
        // The EOM carries the frame boundary: never tagged, no bucket update.
        return eom ? CellVerdict::Conforming : CellVerdict::Tagged;
    }
    std::int64_t x1 = x_ - static_cast<std::int64_t>(t - lct_);
    if (x1 < 0) x1 = 0;
    x_ = x1 + contract_.increment;
    lct_ = t;
    return CellVerdict::Conforming;
}

std::vector<FrameVerdict> classify_frame_trace(const std::vector<FrameRecord>& trace,
                                               const GfrContract& contract) {
    FgcraPolicer policer(contract);
    SimTime cell_gap = interval_from_rate(contract.pcr_cells_s);
    std::vector<FrameVerdict> verdicts;
    verdicts.reserve(trace.size());

    SimTime prev_cell_t = 0;
    SimTime prev_arrival = 0;
    bool any = false;
    for (const FrameRecord& rec : trace) {
        if (rec.cells == 0) throw std::invalid_argument("frame with zero cells");
        if (any && rec.arrival < prev_arrival)
            throw std::invalid_argument("frame trace timestamps must be non-decreasing");
        prev_arrival = rec.arrival;
        for (std::uint32_t i = 0; i < rec.cells; ++i) {
            SimTime t = rec.arrival + static_cast<SimTime>(i) * cell_gap;
            if (any && t < prev_cell_t) t = prev_cell_t;
            bool eom = (i + 1 == rec.cells);
            CellVerdict v = policer.on_cell(t, i == 0, eom);
            if (i == 0) {
                verdicts.push_back(v == CellVerdict::Conforming ? FrameVerdict::Conforming
                                                                : FrameVerdict::Tagged);
            }
            prev_cell_t = t;
            any = true;
        }
    }
    return verdicts;
}

std::vector<FrameRecord> parse_frame_trace(std::istream& in) {
    std::vector<FrameRecord> trace;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::uint64_t arrival;
        std::uint32_t cells;
        if (!(ls >> arrival)) {
            std::string tok;
            std::istringstream probe(line);
            if (!(probe >> tok)) continue;  // blank line
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": bad arrival_ns");
        }
        if (!(ls >> cells))
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": bad frame_cells");
        trace.push_back(FrameRecord{arrival, cells});
    }
    return trace;
}

void write_verdicts(std::ostream& out, const std::vector<FrameVerdict>& verdicts) {
    for (FrameVerdict v : verdicts)
        out << (v == FrameVerdict::Conforming ? "conforming" : "tagged") << '\n';
}

}  // namespace gfrsim
