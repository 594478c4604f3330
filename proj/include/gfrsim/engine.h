#ifndef GFRSIM_ENGINE_H
#define GFRSIM_ENGINE_H

#include <cstdint>
#include <queue>
#include <unordered_set>
#include <vector>

#include "gfrsim/sim_time.h"

namespace gfrsim {

// Anything that can receive events. A target gets a small integer id on its
// first schedule; ids are assigned in schedule order, so the (due, target,
// kind) trace of a run is reproducible.
class EventTarget {
public:
    virtual ~EventTarget() = default;
    virtual void on_event(std::uint32_t kind) = 0;

private:
    friend class Engine;
    std::uint32_t trace_id_ = 0;
};

struct EventHandle {
    std::uint64_t seq = 0;
    bool valid() const { return seq != 0; }
};

// Single-threaded discrete-event core. Events with equal due times dispatch
// in insertion order; replaying a scenario yields a bit-identical trace.
class Engine {
public:
    SimTime now() const { return now_; }

    // Scheduling in the past is a programming error and aborts the run.
    EventHandle schedule(SimTime due, EventTarget* target, std::uint32_t kind);
    EventHandle schedule_in(SimTime delay, EventTarget* target, std::uint32_t kind) {
        return schedule(now_ + delay, target, kind);
    }
    void cancel(EventHandle h);

    // Dispatches every pending event with due <= end, advances the clock to
    // end, and returns the number of events dispatched by this call.
    std::uint64_t run_until(SimTime end);

    std::uint64_t dispatched() const { return dispatched_; }
    std::uint64_t pending() const { return queue_.size() - cancelled_.size(); }

    // FNV-1a hash over the dispatched (due, target, kind) trace, for
    // determinism checks.
    std::uint64_t trace_hash() const { return trace_hash_; }

private:
    struct Ev {
        SimTime due;
        std::uint64_t seq;
        EventTarget* target;
        std::uint32_t kind;
    };
    struct After {
        bool operator()(const Ev& a, const Ev& b) const {
            if (a.due != b.due) return a.due > b.due;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Ev, std::vector<Ev>, After> queue_;
    std::unordered_set<std::uint64_t> cancelled_;
    SimTime now_ = 0;
    std::uint64_t next_seq_ = 1;
    std::uint32_t next_trace_id_ = 1;
    std::uint64_t dispatched_ = 0;
    std::uint64_t trace_hash_ = 14695981039346656037ull;
};

}  // namespace gfrsim

#endif
