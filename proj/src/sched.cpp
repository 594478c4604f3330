#include "gfrsim/sched.h"

#include <stdexcept>

namespace gfrsim {

std::optional<Cell> FifoScheduler::next(SimTime) {
    if (q_.empty()) return std::nullopt;
    Cell c = std::move(q_.front());
    q_.pop_front();
    return c;
}

WfqScheduler::WfqScheduler(std::vector<double> phi, double port_rate_cells_s)
    : phi_(std::move(phi)),
      port_rate_(port_rate_cells_s),
      queues_(phi_.size()),
      last_finish_(phi_.size(), 0.0) {
    if (port_rate_ <= 0.0) throw std::invalid_argument("port rate must be positive");
    for (double p : phi_)
        if (p <= 0.0) throw std::invalid_argument("WFQ weights must be positive");
}

void WfqScheduler::advance_virtual_time(SimTime now) {
    if (backlogged_phi_ > 0.0 && now > vtime_at_) {
        double dt = static_cast<double>(now - vtime_at_) * 1e-9;
        vtime_ += dt * port_rate_ / backlogged_phi_;
    }
    vtime_at_ = now;
}

void WfqScheduler::enqueue(Cell&& cell, SimTime now) {
    if (cell.vc >= queues_.size()) throw std::invalid_argument("unknown VC");
    if (backlog_ == 0) {
        // System went idle: renumber the virtual clock.
        vtime_ = 0.0;
        for (double& f : last_finish_) f = 0.0;
        vtime_at_ = now;
    } else {
        advance_virtual_time(now);
    }
    auto& q = queues_[cell.vc];
    if (q.empty()) backlogged_phi_ += phi_[cell.vc];
    double start = last_finish_[cell.vc] > vtime_ ? last_finish_[cell.vc] : vtime_;
    double finish = start + 1.0 / phi_[cell.vc];
    last_finish_[cell.vc] = finish;
    q.push_back(Stamped{finish, std::move(cell)});
    ++backlog_;
}

std::optional<Cell> WfqScheduler::next(SimTime now) {
    if (backlog_ == 0) return std::nullopt;
    advance_virtual_time(now);
    std::size_t best = queues_.size();
    double best_finish = 0.0;
    for (std::size_t vc = 0; vc < queues_.size(); ++vc) {
        if (queues_[vc].empty()) continue;
        double f = queues_[vc].front().finish;
        if (best == queues_.size() || f < best_finish) {
            best = vc;
            best_finish = f;
        }
    }
    auto& q = queues_[best];
    Cell c = std::move(q.front().cell);
    q.pop_front();
    --backlog_;
    if (q.empty()) backlogged_phi_ -= phi_[best];
    if (backlog_ == 0) backlogged_phi_ = 0.0;  // clears fp residue
    return c;
}

}  // namespace gfrsim
