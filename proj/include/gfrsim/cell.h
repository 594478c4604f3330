#ifndef GFRSIM_CELL_H
#define GFRSIM_CELL_H

#include <cstdint>
#include <memory>

namespace gfrsim {

using VcId = std::uint32_t;

struct SackBlock {
    std::uint64_t start = 0;  // [start, end) byte range
    std::uint64_t end = 0;
};

constexpr int kMaxSackBlocks = 3;

struct TcpSegment {
    std::uint64_t seq_start = 0;
    std::uint64_t seq_end = 0;  // seq_end - seq_start == payload_len for data
    std::uint32_t payload_len = 0;
    bool is_ack = false;
    std::uint64_t ack_num = 0;
    SackBlock sack[kMaxSackBlocks];
    int n_sack = 0;
};

// One AAL5 frame wrapping one TCP segment; the unit of conformance and drop
// decisions.
struct Frame {
    VcId vc = 0;
    std::uint64_t frame_id = 0;  // unique per VC, strictly increasing
    std::uint32_t payload_len = 0;
    std::uint32_t cell_count = 0;
    TcpSegment seg;
};

// The atomic simulated unit. Only the EOM cell carries the frame pointer;
// reassembly needs it exactly once per frame.
struct Cell {
    VcId vc = 0;
    std::uint64_t frame_id = 0;
    std::uint32_t index_in_frame = 0;
    bool clp = false;  // set only by the network policer
    bool eom = false;
    std::shared_ptr<const Frame> frame;  // non-null on the EOM cell
};

}  // namespace gfrsim

#endif
