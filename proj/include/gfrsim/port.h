#ifndef GFRSIM_PORT_H
#define GFRSIM_PORT_H

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gfrsim/buffer.h"
#include "gfrsim/cell.h"
#include "gfrsim/engine.h"
#include "gfrsim/policer.h"
#include "gfrsim/sched.h"
#include "gfrsim/sim_time.h"

namespace gfrsim {

// Event kinds used by the simulation components.
constexpr std::uint32_t kEvServe = 1;
constexpr std::uint32_t kEvPipeArrival = 2;
constexpr std::uint32_t kEvTcpTimer = 3;
constexpr std::uint32_t kEvSourceStart = 4;
constexpr std::uint32_t kEvWarmupSnapshot = 5;

class CellSink {
public:
    virtual ~CellSink() = default;
    virtual void on_cell(Cell&& cell, SimTime now) = 0;
};

// Fixed-latency conduit; preserves order. send() takes the time serialization
// completes and delivers to the sink latency later.
class Pipe final : public EventTarget {
public:
    Pipe(Engine& engine, SimTime latency, CellSink& out)
        : engine_(engine), latency_(latency), out_(out) {}

    void send(Cell&& cell, SimTime depart_complete);
    void on_event(std::uint32_t kind) override;

private:
    Engine& engine_;
    SimTime latency_;
    CellSink& out_;
    std::deque<std::pair<SimTime, Cell>> in_flight_;
    bool pending_ = false;
};

enum class TaggingMode { Off, Tag, Drop };

struct DropRecord {
    SimTime t;
    VcId vc;
    std::uint64_t frame_id;
    DropPolicyKind policy;
    DropReason reason;
};

// Output port: admission (optional per-VC policing, then the buffer policy),
// a cell scheduler, and a transmitter that serves one cell per service
// interval. Serialization happens at the line rate; the service interval
// caps the output at the ATM-layer peak cell rate.
class OutputPort final : public EventTarget, public CellSink {
public:
    OutputPort(Engine& engine, std::string name, SimTime serialize_time,
               SimTime service_interval, std::unique_ptr<CellScheduler> sched,
               PortBuffer buffer, Pipe& downstream);

    void attach_policers(std::vector<FgcraPolicer> policers, TaggingMode mode);

    void on_cell(Cell&& cell, SimTime now) override;
    void on_event(std::uint32_t kind) override;

    PortBuffer& buffer() { return buffer_; }
    const PortBuffer& buffer() const { return buffer_; }
    const std::string& name() const { return name_; }

    std::uint64_t cells_in() const { return cells_in_; }
    std::uint64_t cells_out() const { return cells_out_; }
    std::uint64_t cells_tagged() const { return cells_tagged_; }
    std::uint64_t policer_dropped_cells() const { return policer_dropped_cells_; }
    std::uint64_t policer_dropped_frames() const { return policer_dropped_frames_; }
    std::uint64_t cells_dropped() const {
        return buffer_.cells_dropped() + policer_dropped_cells_;
    }

    void enable_drop_log(std::size_t cap) { log_cap_ = cap; }
    const std::vector<DropRecord>& drop_log() const { return drop_log_; }
    bool drop_log_truncated() const { return log_truncated_; }

private:
    void kick();
    void serve();
    void record_drop(const Cell& cell, SimTime now, DropReason reason);

    Engine& engine_;
    std::string name_;
    SimTime serialize_;
    SimTime interval_;
    std::unique_ptr<CellScheduler> sched_;
    PortBuffer buffer_;
    Pipe& downstream_;

    std::vector<FgcraPolicer> policers_;
    TaggingMode mode_ = TaggingMode::Off;

    bool svc_pending_ = false;
    SimTime next_free_ = 0;

    std::uint64_t cells_in_ = 0;
    std::uint64_t cells_out_ = 0;
    std::uint64_t cells_tagged_ = 0;
    std::uint64_t policer_dropped_cells_ = 0;
    std::uint64_t policer_dropped_frames_ = 0;

    std::vector<DropRecord> drop_log_;
    std::size_t log_cap_ = 0;
    bool log_truncated_ = false;
};

}  // namespace gfrsim

#endif
