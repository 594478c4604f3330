#ifndef GFRSIM_TESTS_TOKEN_BUCKET_ORACLE_H
#define GFRSIM_TESTS_TOKEN_BUCKET_ORACLE_H

// Independent frame-conformance oracle, kept free of the tagger's state
// representation: a bucket holding at most MBS tokens refills continuously
// at MCR; the first cell of a frame conforms iff at least MBS/2 tokens are
// present, and every cell of a conforming frame consumes one token. The EOM
// of a non-conforming frame consumes nothing, mirroring the tagger's EOM
// exception.

#include <vector>

#include "gfrsim/policer.h"
#include "gfrsim/sim_time.h"

namespace gfrsim::testing {

class TokenBucketOracle {
public:
    explicit TokenBucketOracle(const GfrContract& c)
        : mcr_(c.mcr_cells_s), mbs_(static_cast<double>(c.mbs_cells())), tokens_(mbs_) {}

    FrameVerdict on_cell(SimTime t, bool first) {
        tokens_ += static_cast<double>(t - last_) * 1e-9 * mcr_;
        if (tokens_ > mbs_) tokens_ = mbs_;
        last_ = t;
        if (first) {
            frame_conforming_ = tokens_ >= mbs_ / 2.0;
            tokens_at_first_ = tokens_;
        }
        if (frame_conforming_) tokens_ -= 1.0;
        return frame_conforming_ ? FrameVerdict::Conforming : FrameVerdict::Tagged;
    }

    double tokens_at_first_cell() const { return tokens_at_first_; }
    double tokens() const { return tokens_; }

private:
    double mcr_;
    double mbs_;
    double tokens_;
    SimTime last_ = 0;
    bool frame_conforming_ = false;
    double tokens_at_first_ = 0.0;
};

struct OracleFrameResult {
    FrameVerdict verdict;
    double tokens_at_first_cell;
};

// Replays a frame trace with the same cell expansion rule the tagger's
// trace replay uses: cells back-to-back at PCR, clamped non-decreasing.
inline std::vector<OracleFrameResult> oracle_classify(const std::vector<FrameRecord>& trace,
                                                      const GfrContract& contract) {
    TokenBucketOracle oracle(contract);
    SimTime cell_gap = interval_from_rate(contract.pcr_cells_s);
    std::vector<OracleFrameResult> out;
    out.reserve(trace.size());
    SimTime prev = 0;
    bool any = false;
    for (const FrameRecord& rec : trace) {
        for (std::uint32_t i = 0; i < rec.cells; ++i) {
            SimTime t = rec.arrival + static_cast<SimTime>(i) * cell_gap;
            if (any && t < prev) t = prev;
            FrameVerdict v = oracle.on_cell(t, i == 0);
            if (i == 0) out.push_back({v, oracle.tokens_at_first_cell()});
            prev = t;
            any = true;
        }
    }
    return out;
}

// The two renderings of the conformance rule place their decision boundary
// at slightly different token levels: the continuous-state tagger admits a
// debt of L = CDVT + BT/2, i.e. conforms while tokens >= MBS - L*MCR, while
// the token rule asks for MBS/2. Frames landing between the two thresholds
// may legitimately disagree.
inline double gcra_threshold_tokens(const GfrContract& c) {
    return static_cast<double>(c.mbs_cells()) -
           static_cast<double>(c.limit) / static_cast<double>(c.increment);
}

}  // namespace gfrsim::testing

#endif
