#include "gfrsim/topology.h"

#include <stdexcept>

namespace gfrsim {

namespace {
constexpr double kGroupTargetsBps[5] = {2.6e6, 5.3e6, 8.0e6, 10.7e6, 13.5e6};

// MCR cell rate that carries the given TCP goodput once segmented.
double mcr_cells_for_goodput(double goodput_bps, std::uint32_t mss) {
    double segments_per_s = goodput_bps / (8.0 * static_cast<double>(mss));
    return segments_per_s * static_cast<double>(cells_for_payload(mss));
}
}  // namespace

std::vector<VcAlloc> equal_allocation(const SimConfig& cfg) {
    std::vector<VcAlloc> vcs(cfg.n_sources);
    double max_tp = max_tcp_throughput(cfg.tcp.mss, cfg.link_bandwidth_bps);
    double n = static_cast<double>(cfg.n_sources);
    for (std::uint32_t i = 0; i < cfg.n_sources; ++i) {
        vcs[i].target_bps = max_tp / n;
        vcs[i].mcr_cells_s = cfg.capacity_cells_s() / n;
        vcs[i].category = 0;
    }
    return vcs;
}

std::vector<VcAlloc> unequal_five_groups(const SimConfig& cfg) {
    if (cfg.n_sources % 5 != 0)
        throw std::invalid_argument("five-group allocation needs n_sources divisible by 5");
    std::vector<VcAlloc> vcs(cfg.n_sources);
    std::uint32_t per_group = cfg.n_sources / 5;
    for (std::uint32_t i = 0; i < cfg.n_sources; ++i) {
        int cat = static_cast<int>(i / per_group);
        vcs[i].target_bps = kGroupTargetsBps[cat];
        vcs[i].mcr_cells_s = mcr_cells_for_goodput(kGroupTargetsBps[cat], cfg.tcp.mss);
        vcs[i].category = cat;
    }
    return vcs;
}

std::vector<VcAlloc> explicit_allocation(const SimConfig& cfg,
                                         const std::vector<double>& target_bps) {
    if (target_bps.size() != cfg.n_sources)
        throw std::invalid_argument("explicit allocation length != n_sources");
    std::vector<VcAlloc> vcs(cfg.n_sources);
    for (std::uint32_t i = 0; i < cfg.n_sources; ++i) {
        if (target_bps[i] <= 0.0) throw std::invalid_argument("allocation must be positive");
        vcs[i].target_bps = target_bps[i];
        vcs[i].mcr_cells_s = mcr_cells_for_goodput(target_bps[i], cfg.tcp.mss);
        vcs[i].category = static_cast<int>(i);
    }
    return vcs;
}

void validate_allocations(const SimConfig& cfg) {
    if (cfg.vcs.size() != cfg.n_sources)
        throw std::invalid_argument("allocation count != n_sources");
    double sum = 0.0;
    for (const VcAlloc& vc : cfg.vcs) sum += vc.mcr_cells_s;
    // Equal allocation sums to the capacity exactly; allow fp residue.
    if (sum > cfg.capacity_cells_s() * (1.0 + 1e-9))
        throw std::invalid_argument("sum of MCRs exceeds UBR capacity (CAC)");
}

SourceHost::SourceHost(Engine& engine, VcId vc, TcpConfig cfg)
    : engine_(engine),
      vc_(vc),
      tcp_(engine, cfg, [this](TcpSegment&& seg) { emit_segment(std::move(seg)); }) {}

void SourceHost::schedule_start(SimTime at) { engine_.schedule(at, this, kEvSourceStart); }

void SourceHost::on_event(std::uint32_t kind) {
    if (kind != kEvSourceStart) throw std::logic_error("unexpected event kind at source");
    tcp_.start(engine_.now());
}

void SourceHost::emit_segment(TcpSegment&& seg) {
    auto frame = make_frame(std::move(seg), vc_, next_frame_id_++);
    SimTime now = engine_.now();
    frame_to_cells(frame, [&](Cell&& c) { nic_->on_cell(std::move(c), now); });
}

void SourceHost::on_cell(Cell&& cell, SimTime now) {
    ack_reasm_.on_cell(cell, [&](const Frame& f) { tcp_.on_ack(f.seg, now); });
}

DestHost::DestHost(Engine& engine, VcId vc, std::uint32_t mss)
    : engine_(engine),
      vc_(vc),
      tcp_(mss, [this](TcpSegment&& seg) { emit_ack(std::move(seg)); }) {}

void DestHost::on_cell(Cell&& cell, SimTime now) {
    if (cell.frame_id != cur_frame_) {
        cur_frame_ = cell.frame_id;
        cur_frame_tagged_ = false;
    }
    if (cell.clp) cur_frame_tagged_ = true;
    reasm_.on_cell(cell, [&](const Frame& f) {
        if (!cur_frame_tagged_) clp0_frame_bytes_ += f.payload_len;
        tcp_.on_segment(f.seg, now);
    });
}

void DestHost::emit_ack(TcpSegment&& seg) {
    auto frame = make_frame(std::move(seg), vc_, next_frame_id_++);
    SimTime now = engine_.now();
    frame_to_cells(frame, [&](Cell&& c) { nic_->on_cell(std::move(c), now); });
}

OutputPort& Simulation::make_infra_port(std::string name, Pipe& out) {
    // Infrastructure ports: plain FIFO, tail-drop, effectively unbounded.
    PortBuffer buf(1u << 20, cfg_.n_sources, DropPolicyConfig{DropPolicyKind::TailDrop, 1.0, 1.0});
    ports_.push_back(std::make_unique<OutputPort>(engine_, std::move(name), cell_line_, cell_pcr_,
                                                  std::make_unique<FifoScheduler>(),
                                                  std::move(buf), out));
    return *ports_.back();
}

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg) {
    validate_allocations(cfg_);
    cell_line_ = cell_tx_time(cfg_.link_bandwidth_bps);
    cell_pcr_ = interval_from_rate(cfg_.capacity_cells_s());

    std::uint32_t n = cfg_.n_sources;
    warmup_bytes_.assign(n, 0);

    // Endpoints first; their NICs are bound once the ports exist.
    for (VcId vc = 0; vc < n; ++vc)
        sources_.push_back(std::make_unique<SourceHost>(engine_, vc, cfg_.tcp));
    for (VcId vc = 0; vc < n; ++vc)
        dests_.push_back(std::make_unique<DestHost>(engine_, vc, cfg_.tcp.mss));

    // Forward direction, built sink-to-source.
    auto& fwd_demux = *demuxes_.emplace_back(std::make_unique<VcDemux>(n));
    for (VcId vc = 0; vc < n; ++vc) {
        auto& pipe = *pipes_.emplace_back(
            std::make_unique<Pipe>(engine_, cfg_.link_delay, *dests_[vc]));
        OutputPort& port = make_infra_port("sw2.fwd" + std::to_string(vc), pipe);
        fwd_demux.set_route(vc, &port);
    }

    auto& bottleneck_pipe = *pipes_.emplace_back(
        std::make_unique<Pipe>(engine_, cfg_.link_delay, fwd_demux));

    // SW1 bottleneck output port: weights, scheduler, policy, policers.
    std::vector<double> weights(n), phi(n);
    double mcr_sum = 0.0;
    for (VcId vc = 0; vc < n; ++vc) mcr_sum += cfg_.vcs[vc].mcr_cells_s;
    for (VcId vc = 0; vc < n; ++vc) {
        weights[vc] = cfg_.vcs[vc].mcr_cells_s / cfg_.capacity_cells_s();
        phi[vc] = cfg_.vcs[vc].mcr_cells_s / mcr_sum;
    }
    DropPolicyConfig policy = cfg_.policy;
    policy.epd_per_vc =
        cfg_.sched == SchedulerKind::Wfq && policy.kind == DropPolicyKind::Epd;
    std::unique_ptr<CellScheduler> sched;
    if (cfg_.sched == SchedulerKind::Wfq) {
        sched = std::make_unique<WfqScheduler>(phi, 1e9 / static_cast<double>(cell_pcr_));
    } else {
        sched = std::make_unique<FifoScheduler>();
    }
    PortBuffer buf(cfg_.buffer_cells, n, policy, weights);
    sw1_port_ = std::make_unique<OutputPort>(engine_, "sw1.bottleneck", cell_line_, cell_pcr_,
                                             std::move(sched), std::move(buf), bottleneck_pipe);
    if (cfg_.tagging != TaggingMode::Off) {
        std::vector<FgcraPolicer> policers;
        policers.reserve(n);
        for (VcId vc = 0; vc < n; ++vc) {
            policers.emplace_back(GfrContract::make(cfg_.vcs[vc].mcr_cells_s,
                                                    cfg_.capacity_cells_s(),
                                                    cells_for_payload(cfg_.tcp.mss),
                                                    cfg_.effective_cdvt_s()));
        }
        sw1_port_->attach_policers(std::move(policers), cfg_.tagging);
    }

    // Source access links into SW1.
    for (VcId vc = 0; vc < n; ++vc) {
        auto& pipe = *pipes_.emplace_back(
            std::make_unique<Pipe>(engine_, cfg_.link_delay, *sw1_port_));
        OutputPort& nic = make_infra_port("src.nic" + std::to_string(vc), pipe);
        sources_[vc]->set_nic(&nic);
    }

    // Reverse direction for ACKs: dest NIC -> SW2 -> SW1 -> source.
    auto& rev_demux = *demuxes_.emplace_back(std::make_unique<VcDemux>(n));
    for (VcId vc = 0; vc < n; ++vc) {
        auto& pipe = *pipes_.emplace_back(
            std::make_unique<Pipe>(engine_, cfg_.link_delay, *sources_[vc]));
        OutputPort& port = make_infra_port("sw1.rev" + std::to_string(vc), pipe);
        rev_demux.set_route(vc, &port);
    }
    auto& rev_trunk_pipe = *pipes_.emplace_back(
        std::make_unique<Pipe>(engine_, cfg_.link_delay, rev_demux));
    OutputPort& sw2_rev = make_infra_port("sw2.rev", rev_trunk_pipe);
    for (VcId vc = 0; vc < n; ++vc) {
        auto& pipe = *pipes_.emplace_back(
            std::make_unique<Pipe>(engine_, cfg_.link_delay, sw2_rev));
        OutputPort& nic = make_infra_port("dest.nic" + std::to_string(vc), pipe);
        dests_[vc]->set_nic(&nic);
    }

    // Deterministic start stagger: source i begins at i cell times.
    for (VcId vc = 0; vc < n; ++vc)
        sources_[vc]->schedule_start(static_cast<SimTime>(vc) * cell_line_);
    if (cfg_.warmup > 0) engine_.schedule(cfg_.warmup, this, kEvWarmupSnapshot);
}

void Simulation::on_event(std::uint32_t kind) {
    if (kind != kEvWarmupSnapshot) throw std::logic_error("unexpected event kind at simulation");
    for (VcId vc = 0; vc < cfg_.n_sources; ++vc)
        warmup_bytes_[vc] = dests_[vc]->delivered_bytes();
    warmup_taken_ = true;
}

void Simulation::run() { engine_.run_until(cfg_.duration); }

std::uint64_t Simulation::delivered_bytes_in_window(VcId vc) const {
    return dests_[vc]->delivered_bytes() - warmup_bytes_[vc];
}

double Simulation::window_seconds() const { return to_sec(cfg_.duration - cfg_.warmup); }

std::uint64_t Simulation::drops_off_bottleneck() const {
    std::uint64_t total = 0;
    for (const auto& p : ports_) total += p->cells_dropped();
    return total;
}

std::uint64_t Simulation::reverse_path_drops() const {
    std::uint64_t total = 0;
    for (const auto& p : ports_) {
        const std::string& nm = p->name();
        if (nm.rfind("sw1.rev", 0) == 0 || nm.rfind("sw2.rev", 0) == 0 ||
            nm.rfind("dest.nic", 0) == 0)
            total += p->cells_dropped();
    }
    return total;
}

}  // namespace gfrsim
