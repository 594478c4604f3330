#include "gfrsim/buffer.h"

#include <stdexcept>

namespace gfrsim {

const char* drop_policy_name(DropPolicyKind k) {
    switch (k) {
    case DropPolicyKind::TailDrop: return "tail";
    case DropPolicyKind::Epd: return "epd";
    case DropPolicyKind::SelectiveDrop: return "selective";
    case DropPolicyKind::Wba: return "wba";
    }
    return "?";
}

PortBuffer::PortBuffer(std::size_t k, std::size_t n_vcs, DropPolicyConfig policy,
                       std::vector<double> weights)
    : k_(k),
      policy_(policy),
      r_cells_(policy.r_fraction * static_cast<double>(k)),
      w_(std::move(weights)),
      y_(n_vcs, 0),
      l_(n_vcs, 0),
      frame_state_(n_vcs) {
    if (k_ == 0) throw std::invalid_argument("buffer size must be positive");
    if (w_.empty()) w_.assign(n_vcs, 0.0);
    if (w_.size() != n_vcs) throw std::invalid_argument("weight count != VC count");
    double wsum = 0.0;
    for (double w : w_) wsum += w;
    phi_.resize(n_vcs);
    for (std::size_t i = 0; i < n_vcs; ++i)
        phi_[i] = wsum > 0.0 ? w_[i] / wsum : 1.0 / static_cast<double>(n_vcs);
}

bool PortBuffer::frame_accepted(const Cell& cell) const {
    double x = static_cast<double>(x_);
    double yi = static_cast<double>(y_[cell.vc]);
    double li = static_cast<double>(l_[cell.vc]);
    double na = static_cast<double>(n_active_);
    double r = r_cells_;

    switch (policy_.kind) {
    case DropPolicyKind::TailDrop:
        return true;  // only hard overflow drops
    case DropPolicyKind::Epd:
        if (policy_.epd_per_vc) return yi < r * phi_[cell.vc];
        return x < r;
    case DropPolicyKind::SelectiveDrop:
        if (x <= r) return true;
        return yi * na < policy_.z * x;
    case DropPolicyKind::Wba:
        // x == r counts as uncongested; the congestion condition is x > r.
        if (x <= r) return true;
        if (li < r * w_[cell.vc] && !cell.clp) return true;
        return (yi - r * w_[cell.vc]) * na < policy_.z * (x - r);
    }
    return true;
}

PortBuffer::AdmitResult PortBuffer::admit_cell(const Cell& cell, SimTime) {
    AdmitResult res;
    VcFrameState& st = frame_state_[cell.vc];
    if (!st.seen || st.frame_id != cell.frame_id) {
        st.seen = true;
        st.frame_id = cell.frame_id;
        st.discard = !frame_accepted(cell);
        if (st.discard) {
            ++frames_dropped_;
            res.frame_newly_dropped = true;
            res.reason = DropReason::Policy;
        }
    }

    bool want_enqueue = !st.discard || cell.eom;
    if (want_enqueue && x_ >= k_) {
        // Hard overflow: the cell is lost no matter what, and the rest of
        // the frame is discarded; any enqueued prefix is a corrupt frame
        // that reassembly will throw away.
        if (!st.discard) {
            st.discard = true;
            ++frames_dropped_;
            res.frame_newly_dropped = true;
        }
        res.reason = DropReason::Overflow;
        ++cells_dropped_overflow_;
        return res;
    }
    if (!want_enqueue) {
        ++cells_dropped_policy_;
        return res;
    }

    if (y_[cell.vc] == 0) ++n_active_;
    ++x_;
    ++y_[cell.vc];
    if (!cell.clp) ++l_[cell.vc];
    ++cells_accepted_;
    res.enqueued = true;
    return res;
}

void PortBuffer::on_dequeue(const Cell& cell) {
    if (x_ == 0 || y_[cell.vc] == 0 || (!cell.clp && l_[cell.vc] == 0))
        throw std::logic_error("buffer accounting underflow");
    --x_;
    --y_[cell.vc];
    if (!cell.clp) --l_[cell.vc];
    if (y_[cell.vc] == 0) --n_active_;
}

}  // namespace gfrsim
