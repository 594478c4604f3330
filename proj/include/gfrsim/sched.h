#ifndef GFRSIM_SCHED_H
#define GFRSIM_SCHED_H

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "gfrsim/cell.h"
#include "gfrsim/sim_time.h"

namespace gfrsim {

class CellScheduler {
public:
    virtual ~CellScheduler() = default;
    virtual void enqueue(Cell&& cell, SimTime now) = 0;
    virtual std::optional<Cell> next(SimTime now) = 0;
    virtual bool empty() const = 0;
    virtual std::size_t backlog() const = 0;
};

// Cells depart in exact arrival order.
class FifoScheduler final : public CellScheduler {
public:
    void enqueue(Cell&& cell, SimTime) override { q_.push_back(std::move(cell)); }
    std::optional<Cell> next(SimTime) override;
    bool empty() const override { return q_.empty(); }
    std::size_t backlog() const override { return q_.size(); }

private:
    std::deque<Cell> q_;
};

// Per-VC weighted fair queuing at cell granularity. Each cell gets a virtual
// finish stamp F = max(V, F_vc) + 1/phi_vc at arrival; the head cell with the
// smallest stamp departs next (ties to the lowest VC id). V tracks the fluid
// GPS virtual clock: it advances at port_rate / sum(phi of backlogged VCs)
// cell-services per second, and renumbers from zero whenever the system
// empties.
class WfqScheduler final : public CellScheduler {
public:
    WfqScheduler(std::vector<double> phi, double port_rate_cells_s);

    void enqueue(Cell&& cell, SimTime now) override;
    std::optional<Cell> next(SimTime now) override;
    bool empty() const override { return backlog_ == 0; }
    std::size_t backlog() const override { return backlog_; }
    std::size_t backlog(VcId vc) const { return queues_[vc].size(); }
    double weight(VcId vc) const { return phi_[vc]; }

private:
    void advance_virtual_time(SimTime now);

    struct Stamped {
        double finish;
        Cell cell;
    };

    std::vector<double> phi_;
    double port_rate_;
    std::vector<std::deque<Stamped>> queues_;
    std::vector<double> last_finish_;
    double vtime_ = 0.0;
    SimTime vtime_at_ = 0;
    double backlogged_phi_ = 0.0;
    std::size_t backlog_ = 0;
};

}  // namespace gfrsim

#endif
