#include <doctest.h>

#include <vector>

#include "gfrsim/aal5.h"

using namespace gfrsim;

TEST_CASE("segment to frame geometry") {
    // 1024 B of data + 20 B TCP + 8 B LLC + 8 B AAL5 trailer, padded.
    CHECK(cells_for_payload(1024) == 23);
    CHECK(frame_atm_bytes(1024) == 1219);
    CHECK(cells_for_payload(12) == 1);  // (12+36)/48 exactly
    CHECK(cells_for_payload(0) == 1);   // pure ACK still needs a cell
    CHECK(cells_for_payload(13) == 2);
    CHECK(cells_for_payload(48 * 4 - 36) == 4);
    CHECK(cells_for_payload(48 * 4 - 36 + 1) == 5);
}

TEST_CASE("frame cells carry EOM exactly once, on the last cell") {
    TcpSegment seg;
    seg.seq_start = 0;
    seg.seq_end = 1024;
    seg.payload_len = 1024;
    auto frame = make_frame(seg, 3, 17);
    CHECK(frame->cell_count == 23);

    std::vector<Cell> cells;
    frame_to_cells(frame, [&](Cell&& c) { cells.push_back(std::move(c)); });
    REQUIRE(cells.size() == 23);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(cells[i].vc == 3);
        CHECK(cells[i].frame_id == 17);
        CHECK(cells[i].index_in_frame == i);
        CHECK(cells[i].eom == (i == 22));
        CHECK(cells[i].clp == false);  // end systems never tag
        CHECK((cells[i].frame != nullptr) == (i == 22));
    }
}

TEST_CASE("maximum TCP throughput over the cell tax") {
    double ratio = 1024.0 / 1219.0;
    CHECK(ratio == doctest::Approx(0.8400).epsilon(1e-4));
    double max_tp = max_tcp_throughput(1024, 155.52e6);
    CHECK(max_tp == doctest::Approx(ratio * 149.7e6).epsilon(1e-12));
    CHECK(max_tp == doctest::Approx(125.75e6).epsilon(1e-3));
    // single-cell frame: 12 payload bytes over 53
    CHECK(max_tcp_throughput(12, 155.52e6) ==
          doctest::Approx(12.0 / 53.0 * 149.7e6).epsilon(1e-12));
}

TEST_CASE("reassembly delivers only complete frames") {
    FrameReassembler reasm;
    std::vector<Frame> delivered;
    auto deliver = [&](const Frame& f) { delivered.push_back(f); };

    TcpSegment seg;
    seg.payload_len = 1024;
    seg.seq_start = 0;
    seg.seq_end = 1024;
    auto f1 = make_frame(seg, 0, 1);
    auto f2 = make_frame(seg, 0, 2);
    auto f3 = make_frame(seg, 0, 3);

    // f1 complete
    frame_to_cells(f1, [&](Cell&& c) { reasm.on_cell(c, deliver); });
    CHECK(delivered.size() == 1);

    // f2 loses a middle cell: EOM arrives with a short count
    std::vector<Cell> cells;
    frame_to_cells(f2, [&](Cell&& c) { cells.push_back(std::move(c)); });
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (i != 5) reasm.on_cell(cells[i], deliver);
    CHECK(delivered.size() == 1);
    CHECK(reasm.frames_discarded() == 1);

    // f3 loses its EOM; the next frame's first cell discards it
    cells.clear();
    frame_to_cells(f3, [&](Cell&& c) { cells.push_back(std::move(c)); });
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) reasm.on_cell(cells[i], deliver);
    auto f4 = make_frame(seg, 0, 4);
    frame_to_cells(f4, [&](Cell&& c) { reasm.on_cell(c, deliver); });
    CHECK(delivered.size() == 2);
    CHECK(delivered.back().frame_id == 4);
    CHECK(reasm.frames_discarded() == 2);
}
