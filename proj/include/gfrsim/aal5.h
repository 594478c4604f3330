#ifndef GFRSIM_AAL5_H
#define GFRSIM_AAL5_H

#include <cstdint>
#include <memory>
#include <utility>

#include "gfrsim/cell.h"
#include "gfrsim/sim_time.h"

namespace gfrsim {

// Cells needed to carry payload_len bytes plus the TCP/LLC/AAL5 overhead.
// A 1024-byte segment becomes 23 cells (1219 bytes at the ATM layer).
inline std::uint32_t cells_for_payload(std::uint32_t payload_len) {
    return (payload_len + kFrameOverheadBytes + kCellPayloadBytes - 1) / kCellPayloadBytes;
}

inline std::uint32_t frame_atm_bytes(std::uint32_t payload_len) {
    return cells_for_payload(payload_len) * kCellBytes;
}

inline std::shared_ptr<const Frame> make_frame(TcpSegment seg, VcId vc, std::uint64_t frame_id) {
    Frame f;
    f.vc = vc;
    f.frame_id = frame_id;
    f.payload_len = seg.payload_len;
    f.cell_count = cells_for_payload(seg.payload_len);
    f.seg = seg;
    return std::make_shared<const Frame>(f);
}

// Emits the frame's cells in order; the last one carries the EOM flag and
// the frame pointer.
template <typename Emit>
void frame_to_cells(const std::shared_ptr<const Frame>& frame, Emit&& emit) {
    for (std::uint32_t i = 0; i < frame->cell_count; ++i) {
        Cell c;
        c.vc = frame->vc;
        c.frame_id = frame->frame_id;
        c.index_in_frame = i;
        c.eom = (i + 1 == frame->cell_count);
        if (c.eom) c.frame = frame;
        emit(std::move(c));
    }
}

// Highest TCP payload rate the link can carry: the payload fraction of the
// frame times the post-SONET cell rate. For mss=1024 on a 155.52 Mbps link
// this is 0.8400 * 149.7 Mbps = 125.75 Mbps.
constexpr double kSonetPayloadFraction = 149.7 / 155.52;

inline double max_tcp_throughput(std::uint32_t mss, double line_rate_bps) {
    double ratio = static_cast<double>(mss) / static_cast<double>(frame_atm_bytes(mss));
    return ratio * line_rate_bps * kSonetPayloadFraction;
}

// Per-VC frame reassembly with whole-frame loss semantics: a frame reaches
// TCP iff every one of its cells arrived. Cells of one VC arrive in order,
// so a frame_id change discards any incomplete predecessor.
class FrameReassembler {
public:
    template <typename Deliver>
    void on_cell(const Cell& cell, Deliver&& deliver) {
        if (!active_ || cell.frame_id != cur_frame_) {
            if (active_) ++frames_discarded_;
            active_ = true;
            cur_frame_ = cell.frame_id;
            cells_seen_ = 0;
        }
        ++cells_seen_;
        if (cell.eom) {
            active_ = false;
            if (cell.frame && cells_seen_ == cell.frame->cell_count) {
                ++frames_delivered_;
                deliver(*cell.frame);
            } else {
                ++frames_discarded_;
            }
        }
    }

    std::uint64_t frames_delivered() const { return frames_delivered_; }
    std::uint64_t frames_discarded() const { return frames_discarded_; }

private:
    bool active_ = false;
    std::uint64_t cur_frame_ = 0;
    std::uint32_t cells_seen_ = 0;
    std::uint64_t frames_delivered_ = 0;
    std::uint64_t frames_discarded_ = 0;
};

}  // namespace gfrsim

#endif
