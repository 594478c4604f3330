#include "gfrsim/port.h"

#include <stdexcept>

namespace gfrsim {

void Pipe::send(Cell&& cell, SimTime depart_complete) {
    SimTime exit = depart_complete + latency_;
    in_flight_.emplace_back(exit, std::move(cell));
    if (!pending_) {
        pending_ = true;
        engine_.schedule(in_flight_.front().first, this, kEvPipeArrival);
    }
}

void Pipe::on_event(std::uint32_t) {
    pending_ = false;
    SimTime now = engine_.now();
    while (!in_flight_.empty() && in_flight_.front().first <= now) {
        Cell c = std::move(in_flight_.front().second);
        in_flight_.pop_front();
        out_.on_cell(std::move(c), now);
    }
    if (!in_flight_.empty()) {
        pending_ = true;
        engine_.schedule(in_flight_.front().first, this, kEvPipeArrival);
    }
}

OutputPort::OutputPort(Engine& engine, std::string name, SimTime serialize_time,
                       SimTime service_interval, std::unique_ptr<CellScheduler> sched,
                       PortBuffer buffer, Pipe& downstream)
    : engine_(engine),
      name_(std::move(name)),
      serialize_(serialize_time),
      interval_(service_interval),
      sched_(std::move(sched)),
      buffer_(std::move(buffer)),
      downstream_(downstream) {
    if (interval_ == 0 || serialize_ == 0)
        throw std::invalid_argument("port intervals must be positive");
}

void OutputPort::attach_policers(std::vector<FgcraPolicer> policers, TaggingMode mode) {
    policers_ = std::move(policers);
    mode_ = mode;
}

void OutputPort::on_cell(Cell&& cell, SimTime now) {
    ++cells_in_;
    if (mode_ != TaggingMode::Off) {
        CellVerdict v = policers_[cell.vc].on_cell(now, cell.index_in_frame == 0, cell.eom);
        if (v == CellVerdict::Tagged) {
            if (mode_ == TaggingMode::Tag) {
                cell.clp = true;
                ++cells_tagged_;
            } else {
                // Drop mode: non-conforming cells never enter the buffer.
                // The EOM comes back Conforming and passes through.
                ++policer_dropped_cells_;
                if (cell.index_in_frame == 0) {
                    ++policer_dropped_frames_;
                    record_drop(cell, now, DropReason::Policer);
                }
                return;
            }
        }
    }

    PortBuffer::AdmitResult res = buffer_.admit_cell(cell, now);
    if (res.frame_newly_dropped) record_drop(cell, now, res.reason);
    if (!res.enqueued) return;
    sched_->enqueue(std::move(cell), now);
    kick();
}

void OutputPort::kick() {
    if (svc_pending_ || sched_->empty()) return;
    SimTime now = engine_.now();
    if (now >= next_free_) {
        serve();
    } else {
        svc_pending_ = true;
        engine_.schedule(next_free_, this, kEvServe);
    }
}

void OutputPort::serve() {
    SimTime now = engine_.now();
    std::optional<Cell> cell = sched_->next(now);
    if (!cell) throw std::logic_error("serve() on empty scheduler");
    buffer_.on_dequeue(*cell);
    ++cells_out_;
    next_free_ = now + interval_;
    downstream_.send(std::move(*cell), now + serialize_);
    kick();
}

void OutputPort::on_event(std::uint32_t kind) {
    if (kind != kEvServe) throw std::logic_error("unexpected event kind at port");
    svc_pending_ = false;
    if (!sched_->empty()) serve();
}

void OutputPort::record_drop(const Cell& cell, SimTime now, DropReason reason) {
    if (drop_log_.size() < log_cap_) {
        drop_log_.push_back(DropRecord{now, cell.vc, cell.frame_id, buffer_.policy().kind, reason});
    } else if (log_cap_ > 0) {
        log_truncated_ = true;
    }
}

}  // namespace gfrsim
