#ifndef GFRSIM_BUFFER_H
#define GFRSIM_BUFFER_H

#include <cstdint>
#include <string>
#include <vector>

#include "gfrsim/cell.h"
#include "gfrsim/sim_time.h"

namespace gfrsim {

enum class DropPolicyKind { TailDrop, Epd, SelectiveDrop, Wba };

const char* drop_policy_name(DropPolicyKind k);

struct DropPolicyConfig {
    DropPolicyKind kind = DropPolicyKind::TailDrop;
    double r_fraction = 0.9;  // congestion threshold as a fraction of k
    double z = 0.8;
    // With per-VC queues the EPD threshold applies to each queue's share
    // (r * phi_i) instead of the shared occupancy.
    bool epd_per_vc = false;
};

enum class DropReason { Policy, Overflow, Policer };

// Shared output-port cell buffer with per-VC occupancy accounting and a
// frame-level drop policy. Decisions are made on the first cell of a frame
// and remembered for the rest of it; a discarded frame's EOM cell is still
// enqueued, except under hard overflow.
class PortBuffer {
public:
    struct AdmitResult {
        bool enqueued = false;
        bool frame_newly_dropped = false;  // first refusal of this frame
        DropReason reason = DropReason::Policy;
    };

    PortBuffer(std::size_t k, std::size_t n_vcs, DropPolicyConfig policy,
               std::vector<double> weights = {});

    AdmitResult admit_cell(const Cell& cell, SimTime now);
    void on_dequeue(const Cell& cell);

    std::size_t k() const { return k_; }
    std::size_t occupancy() const { return x_; }
    std::size_t occupancy(VcId vc) const { return y_[vc]; }
    std::size_t untagged(VcId vc) const { return l_[vc]; }
    std::size_t active_vcs() const { return n_active_; }
    double weight(VcId vc) const { return w_[vc]; }
    double r_cells() const { return r_cells_; }
    const DropPolicyConfig& policy() const { return policy_; }

    std::uint64_t cells_accepted() const { return cells_accepted_; }
    std::uint64_t cells_dropped_policy() const { return cells_dropped_policy_; }
    std::uint64_t cells_dropped_overflow() const { return cells_dropped_overflow_; }
    std::uint64_t cells_dropped() const {
        return cells_dropped_policy_ + cells_dropped_overflow_;
    }
    std::uint64_t frames_dropped() const { return frames_dropped_; }

private:
    bool frame_accepted(const Cell& first_cell) const;

    std::size_t k_;
    DropPolicyConfig policy_;
    double r_cells_;
    std::vector<double> w_;    // WBA weights, MCR_i / capacity
    std::vector<double> phi_;  // normalized shares for per-VC EPD

    std::size_t x_ = 0;
    std::vector<std::size_t> y_;
    std::vector<std::size_t> l_;
    std::size_t n_active_ = 0;

    struct VcFrameState {
        std::uint64_t frame_id = ~0ull;
        bool discard = false;
        bool seen = false;
    };
    std::vector<VcFrameState> frame_state_;

    std::uint64_t cells_accepted_ = 0;
    std::uint64_t cells_dropped_policy_ = 0;
    std::uint64_t cells_dropped_overflow_ = 0;
    std::uint64_t frames_dropped_ = 0;
};

}  // namespace gfrsim

#endif
