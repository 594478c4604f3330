#ifndef GFRSIM_TOPOLOGY_H
#define GFRSIM_TOPOLOGY_H

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gfrsim/aal5.h"
#include "gfrsim/engine.h"
#include "gfrsim/policer.h"
#include "gfrsim/port.h"
#include "gfrsim/sched.h"
#include "gfrsim/sim_time.h"
#include "gfrsim/tcp.h"

namespace gfrsim {

enum class SchedulerKind { Fifo, Wfq };

struct VcAlloc {
    double target_bps = 0.0;    // TCP-goodput target, metrics denominator
    double mcr_cells_s = 0.0;   // guaranteed cell rate (contract + weights)
    int category = 0;
};

struct SimConfig {
    std::uint32_t n_sources = 15;
    double link_bandwidth_bps = 155.52e6;
    SimTime link_delay = 5 * kNsPerMs;
    std::size_t buffer_cells = 12000;
    TcpConfig tcp;
    TaggingMode tagging = TaggingMode::Off;
    DropPolicyConfig policy{DropPolicyKind::SelectiveDrop, 0.9, 0.8};
    SchedulerKind sched = SchedulerKind::Fifo;
    std::vector<VcAlloc> vcs;
    SimTime duration = 5 * kNsPerSec;
    SimTime warmup = 0;
    std::uint64_t seed = 1;
    double cdvt_s = -1.0;  // negative: default to half a cell time at PCR

    double pcr_bps() const { return link_bandwidth_bps * kSonetPayloadFraction; }
    double capacity_cells_s() const { return pcr_bps() / kCellBits; }
    double effective_cdvt_s() const {
        return cdvt_s >= 0.0 ? cdvt_s : 0.5 / capacity_cells_s();
    }
};

// Allocation helpers. Equal split gives every VC 1/N of the capacity;
// the five-group split assigns n/5 VCs to each of the 2.6/5.3/8/10.7/13.5
// Mbps targets.
std::vector<VcAlloc> equal_allocation(const SimConfig& cfg);
std::vector<VcAlloc> unequal_five_groups(const SimConfig& cfg);
std::vector<VcAlloc> explicit_allocation(const SimConfig& cfg,
                                         const std::vector<double>& target_bps);

// Throws if the summed MCR exceeds the UBR capacity (the CAC assumption).
void validate_allocations(const SimConfig& cfg);

class Simulation;

// Source endpoint: SACK TCP sender plus AAL5 segmentation; receives the
// reverse-path ACK cells.
class SourceHost final : public CellSink, public EventTarget {
public:
    SourceHost(Engine& engine, VcId vc, TcpConfig cfg);
    void set_nic(OutputPort* nic) { nic_ = nic; }
    void schedule_start(SimTime at);

    void on_cell(Cell&& cell, SimTime now) override;
    void on_event(std::uint32_t kind) override;

    TcpSender& tcp() { return tcp_; }
    const TcpSender& tcp() const { return tcp_; }

private:
    void emit_segment(TcpSegment&& seg);

    Engine& engine_;
    VcId vc_;
    OutputPort* nic_ = nullptr;
    TcpSender tcp_;
    FrameReassembler ack_reasm_;
    std::uint64_t next_frame_id_ = 1;
};

// Destination endpoint: reassembly, ACK-only TCP receiver, ACK NIC.
class DestHost final : public CellSink {
public:
    DestHost(Engine& engine, VcId vc, std::uint32_t mss);
    void set_nic(OutputPort* nic) { nic_ = nic; }

    void on_cell(Cell&& cell, SimTime now) override;

    TcpReceiver& tcp() { return tcp_; }
    const TcpReceiver& tcp() const { return tcp_; }
    std::uint64_t delivered_bytes() const { return tcp_.delivered_bytes(); }
    std::uint64_t clp0_frame_bytes() const { return clp0_frame_bytes_; }
    std::uint64_t frames_discarded() const { return reasm_.frames_discarded(); }

private:
    void emit_ack(TcpSegment&& seg);

    Engine& engine_;
    VcId vc_;
    OutputPort* nic_ = nullptr;
    FrameReassembler reasm_;
    TcpReceiver tcp_;
    std::uint64_t next_frame_id_ = 1;
    std::uint64_t cur_frame_ = ~0ull;
    bool cur_frame_tagged_ = false;
    std::uint64_t clp0_frame_bytes_ = 0;
};

class VcDemux final : public CellSink {
public:
    explicit VcDemux(std::size_t n) : routes_(n, nullptr) {}
    void set_route(VcId vc, CellSink* sink) { routes_[vc] = sink; }
    void on_cell(Cell&& cell, SimTime now) override {
        routes_[cell.vc]->on_cell(std::move(cell), now);
    }

private:
    std::vector<CellSink*> routes_;
};

// The N-source symmetric configuration: N sources -> edge switch SW1 ->
// bottleneck link -> SW2 -> N destinations, three 5 ms hops per direction
// (30 ms round trip). Policing, the drop policy and the scheduler sit at
// SW1's bottleneck output port; every other port is a plain FIFO that never
// congests.
class Simulation final : public EventTarget {
public:
    explicit Simulation(const SimConfig& cfg);

    void run();  // runs to cfg.duration
    Engine& engine() { return engine_; }
    const SimConfig& config() const { return cfg_; }

    OutputPort& bottleneck() { return *sw1_port_; }
    const OutputPort& bottleneck() const { return *sw1_port_; }

    SourceHost& source(VcId vc) { return *sources_[vc]; }
    DestHost& destination(VcId vc) { return *dests_[vc]; }

    // Measurement window accounting (excludes warmup).
    std::uint64_t delivered_bytes_in_window(VcId vc) const;
    double window_seconds() const;

    // Cell drops summed over every port except the bottleneck.
    std::uint64_t drops_off_bottleneck() const;
    std::uint64_t reverse_path_drops() const;

    std::uint64_t trace_hash() const { return engine_.trace_hash(); }
    std::uint64_t dispatched() const { return engine_.dispatched(); }

    void on_event(std::uint32_t kind) override;  // warmup snapshot

private:
    OutputPort& make_infra_port(std::string name, Pipe& out);

    SimConfig cfg_;
    Engine engine_;
    SimTime cell_line_;  // serialization time at the line rate
    SimTime cell_pcr_;   // service interval at the ATM-layer peak cell rate

    std::vector<std::unique_ptr<SourceHost>> sources_;
    std::vector<std::unique_ptr<DestHost>> dests_;
    std::vector<std::unique_ptr<Pipe>> pipes_;
    std::vector<std::unique_ptr<OutputPort>> ports_;  // all but the bottleneck
    std::vector<std::unique_ptr<VcDemux>> demuxes_;
    std::unique_ptr<OutputPort> sw1_port_;

    std::vector<std::uint64_t> warmup_bytes_;
    bool warmup_taken_ = false;
};

}  // namespace gfrsim

#endif
