#ifndef GFRSIM_TCP_H
#define GFRSIM_TCP_H

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>

#include "gfrsim/cell.h"
#include "gfrsim/engine.h"
#include "gfrsim/sim_time.h"

namespace gfrsim {

struct TcpConfig {
    std::uint32_t mss = 1024;
    std::uint64_t rcv_wnd = 600000;
    SimTime timer_granularity = 100 * kNsPerMs;  // coarse retransmission timer
    SimTime min_rto = 200 * kNsPerMs;
    SimTime max_rto = 64 * kNsPerSec;
    SimTime initial_rto = kNsPerSec;
};

// SACK TCP sender over an infinite data source. Sequence space starts at 0
// and every data segment is exactly one MSS, so scoreboard arithmetic stays
// MSS-aligned. Loss recovery follows the scoreboard + pipe scheme: while
// pipe < cwnd, retransmit the lowest lost hole, else send new data, else
// retransmit remaining holes.
class TcpSender : public EventTarget {
public:
    using SegmentEmit = std::function<void(TcpSegment&&)>;

    TcpSender(Engine& engine, TcpConfig cfg, SegmentEmit emit);

    void start(SimTime now);
    void on_ack(const TcpSegment& ack, SimTime now);
    void on_event(std::uint32_t kind) override;  // retransmission timer

    std::uint64_t cwnd() const { return cwnd_; }
    std::uint64_t ssthresh() const { return ssthresh_; }
    std::uint64_t snd_una() const { return snd_una_; }
    std::uint64_t snd_nxt() const { return snd_nxt_; }
    std::uint64_t flight() const { return snd_nxt_ - snd_una_; }
    bool in_recovery() const { return in_recovery_; }
    SimTime rto() const { return rto_; }

    std::uint64_t segments_sent() const { return segments_sent_; }
    std::uint64_t retransmits() const { return retransmits_; }
    std::uint64_t timeouts() const { return timeouts_; }
    std::uint64_t bytes_sent() const { return bytes_sent_; }

private:
    static constexpr std::uint64_t kNoSeq = ~0ull;

    void send_pending(SimTime now);
    void emit_segment(std::uint64_t seq, SimTime now);
    void enter_recovery(SimTime now);
    void exit_recovery();
    void on_timeout(SimTime now);
    void restart_timer(SimTime now);
    void stop_timer();
    void arm_timer_if_needed(SimTime now);
    void rtt_sample(SimTime rtt);

    void merge_sack(std::uint64_t s, std::uint64_t e);
    std::uint64_t sacked_bytes_above(std::uint64_t seq) const;
    std::uint64_t rxt_overlap(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t compute_pipe() const;
    bool is_lost(std::uint64_t seq) const;
    // First un-SACKed, un-retransmitted MSS chunk below the highest SACKed
    // byte; lost_only restricts to chunks the scoreboard declares lost.
    std::optional<std::uint64_t> next_hole(bool lost_only) const;

    Engine& engine_;
    TcpConfig cfg_;
    SegmentEmit emit_;
    bool started_ = false;

    std::uint64_t snd_una_ = 0;
    std::uint64_t snd_nxt_ = 0;
    std::uint64_t max_sent_ = 0;
    std::uint64_t cwnd_;
    std::uint64_t ssthresh_;

    std::map<std::uint64_t, std::uint64_t> sacked_;  // disjoint [s,e) ranges
    std::map<std::uint64_t, std::uint64_t> rxt_;     // retransmitted this recovery
    bool in_recovery_ = false;
    std::uint64_t recovery_point_ = 0;
    int dupacks_ = 0;

    SimTime rto_;
    std::int64_t srtt_ = -1;
    std::int64_t rttvar_ = 0;
    EventHandle timer_;
    bool timer_armed_ = false;
    std::uint64_t timed_seq_ = kNoSeq;
    SimTime timed_at_ = 0;

    std::uint64_t segments_sent_ = 0;
    std::uint64_t retransmits_ = 0;
    std::uint64_t timeouts_ = 0;
    std::uint64_t bytes_sent_ = 0;
};

// ACK-only receiver; delayed ACKs are off, every delivered segment is
// acknowledged immediately. Out-of-order arrivals produce duplicate ACKs
// carrying up to three SACK blocks, most recently changed block first.
class TcpReceiver {
public:
    using SegmentEmit = std::function<void(TcpSegment&&)>;

    TcpReceiver(std::uint32_t mss, SegmentEmit emit_ack)
        : mss_(mss), emit_(std::move(emit_ack)) {}

    void on_segment(const TcpSegment& seg, SimTime now);

    std::uint64_t delivered_bytes() const { return rcv_nxt_; }
    std::uint64_t acks_sent() const { return acks_sent_; }
    std::uint64_t dup_acks_sent() const { return dup_acks_sent_; }

private:
    void send_ack(bool dup);

    std::uint32_t mss_;
    SegmentEmit emit_;
    std::uint64_t rcv_nxt_ = 0;
    std::map<std::uint64_t, std::uint64_t> ooo_;  // disjoint [s,e) above rcv_nxt
    std::deque<std::uint64_t> recent_;            // block starts, most recent first
    std::uint64_t acks_sent_ = 0;
    std::uint64_t dup_acks_sent_ = 0;
};

}  // namespace gfrsim

#endif
