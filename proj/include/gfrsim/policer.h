#ifndef GFRSIM_POLICER_H
#define GFRSIM_POLICER_H

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gfrsim/sim_time.h"

namespace gfrsim {

// GFR conformance contract. MBS is fixed at twice the maximum frame size so
// the last and first cells of back-to-back frames can borrow tokens.
struct GfrContract {
    double mcr_cells_s = 0.0;
    double pcr_cells_s = 0.0;
    std::uint32_t max_frame_cells = 0;
    double cdvt_s = 0.0;

    // Derived quantities in ticks.
    std::int64_t increment = 0;  // I = 1/MCR
    std::int64_t limit = 0;      // L = CDVT + BT/2

    std::uint32_t mbs_cells() const { return 2 * max_frame_cells; }
    double burst_tolerance_s() const {
        return (static_cast<double>(mbs_cells()) - 1.0) * (1.0 / mcr_cells_s - 1.0 / pcr_cells_s);
    }

    static GfrContract make(double mcr_cells_s, double pcr_cells_s,
                            std::uint32_t max_frame_cells, double cdvt_s);
};

enum class CellVerdict { Conforming, Tagged };

// Continuous-state leaky-bucket frame tagger (F-GCRA). The bucket counter X
// and last compliance time LCT live in nanosecond ticks; tagging toggles
// only on the first cell of a frame, and an EOM cell is never tagged.
class FgcraPolicer {
public:
    FgcraPolicer() = default;
    explicit FgcraPolicer(const GfrContract& c) : contract_(c) {}

    CellVerdict on_cell(SimTime t, bool first_of_frame, bool eom) {
        return first_of_frame ? first_cell(t) : mid_cell(t, eom);
    }

    std::int64_t bucket() const { return x_; }
    SimTime last_compliance_time() const { return lct_; }
    bool tagging() const { return tagging_; }
    const GfrContract& contract() const { return contract_; }

private:
    CellVerdict first_cell(SimTime t);
    CellVerdict mid_cell(SimTime t, bool eom);

    GfrContract contract_;
    std::int64_t x_ = 0;
    SimTime lct_ = 0;
    bool tagging_ = false;
};

// Trace replay: one record per frame. Cells are expanded back-to-back at the
// contract's PCR, clamped so the per-VC cell times never decrease.
struct FrameRecord {
    SimTime arrival = 0;
    std::uint32_t cells = 0;
};

enum class FrameVerdict { Conforming, Tagged };

std::vector<FrameVerdict> classify_frame_trace(const std::vector<FrameRecord>& trace,
                                               const GfrContract& contract);

// Line-oriented trace format: "arrival_ns frame_cells" per record.
std::vector<FrameRecord> parse_frame_trace(std::istream& in);
void write_verdicts(std::ostream& out, const std::vector<FrameVerdict>& verdicts);

}  // namespace gfrsim

#endif
