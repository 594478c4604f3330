#include "gfrsim/engine.h"

#include <stdexcept>
#include <string>

namespace gfrsim {

EventHandle Engine::schedule(SimTime due, EventTarget* target, std::uint32_t kind) {
    if (due < now_) {
        throw std::logic_error("event scheduled in the past (due=" + std::to_string(due) +
                               " now=" + std::to_string(now_) + ")");
    }
    if (target->trace_id_ == 0) target->trace_id_ = next_trace_id_++;
    std::uint64_t seq = next_seq_++;
    queue_.push(Ev{due, seq, target, kind});
    return EventHandle{seq};
}

void Engine::cancel(EventHandle h) {
    if (h.valid()) cancelled_.insert(h.seq);
}

std::uint64_t Engine::run_until(SimTime end) {
    std::uint64_t count = 0;
    while (!queue_.empty() && queue_.top().due <= end) {
        Ev ev = queue_.top();
        queue_.pop();
        auto it = cancelled_.find(ev.seq);
        if (it != cancelled_.end()) {
            cancelled_.erase(it);
            continue;
        }
        now_ = ev.due;
        ++count;
        ++dispatched_;
        auto fold = [this](std::uint64_t v) {
            trace_hash_ = (trace_hash_ ^ v) * 1099511628211ull;
        };
        fold(ev.due);
        fold(ev.target->trace_id_);
        fold(ev.kind);
        ev.target->on_event(ev.kind);
    }
    if (end > now_) now_ = end;
    return count;
}

}  // namespace gfrsim
