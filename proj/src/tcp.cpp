#include "gfrsim/tcp.h"

#include <algorithm>
#include <stdexcept>

namespace gfrsim {

TcpSender::TcpSender(Engine& engine, TcpConfig cfg, SegmentEmit emit)
    : engine_(engine), cfg_(cfg), emit_(std::move(emit)) {
    cwnd_ = cfg_.mss;  // initial window: one segment
    ssthresh_ = cfg_.rcv_wnd;
    rto_ = cfg_.initial_rto;
}

void TcpSender::start(SimTime now) {
    started_ = true;
    send_pending(now);
}

void TcpSender::merge_sack(std::uint64_t s, std::uint64_t e) {
    if (e <= s) return;
    s = std::max(s, snd_una_);
    e = std::min(e, snd_nxt_);
    if (e <= s) return;
    auto it = sacked_.lower_bound(s);
    if (it != sacked_.begin()) {
        auto prev = std::prev(it);
        if (prev->second >= s) it = prev;
    }
    while (it != sacked_.end() && it->first <= e) {
        s = std::min(s, it->first);
        e = std::max(e, it->second);
        it = sacked_.erase(it);
    }
    sacked_[s] = e;
}

std::uint64_t TcpSender::sacked_bytes_above(std::uint64_t seq) const {
    std::uint64_t total = 0;
    for (auto it = sacked_.upper_bound(seq); it != sacked_.end(); ++it)
        total += it->second - it->first;
    auto it = sacked_.upper_bound(seq);
    if (it != sacked_.begin()) {
        auto prev = std::prev(it);
        if (prev->second > seq) total += prev->second - seq;
    }
    return total;
}

std::uint64_t TcpSender::rxt_overlap(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t total = 0;
    for (const auto& [s, e] : rxt_) {
        std::uint64_t lo = std::max(a, s);
        std::uint64_t hi = std::min(b, e);
        if (hi > lo) total += hi - lo;
    }
    return total;
}

bool TcpSender::is_lost(std::uint64_t seq) const {
    return sacked_bytes_above(seq) > 2ull * cfg_.mss;
}

std::uint64_t TcpSender::compute_pipe() const {
    // Octets in (snd_una, snd_nxt) that are neither SACKed nor deemed lost
    // count once; retransmitted octets count again.
    std::uint64_t total_sacked = 0;
    for (const auto& [s, e] : sacked_) total_sacked += e - s;

    std::uint64_t pipe = 0;
    std::uint64_t above = total_sacked;
    std::uint64_t prev = snd_una_;
    for (const auto& [s, e] : sacked_) {
        if (s > prev) {
            bool lost = above > 2ull * cfg_.mss;
            if (!lost) pipe += s - prev;
            pipe += rxt_overlap(prev, s);
        }
        above -= e - s;
        prev = e;
    }
    if (snd_nxt_ > prev) {
        pipe += snd_nxt_ - prev;  // nothing SACKed above: never lost
        pipe += rxt_overlap(prev, snd_nxt_);
    }
    return pipe;
}

std::optional<std::uint64_t> TcpSender::next_hole(bool lost_only) const {
    std::uint64_t limit = sacked_.empty() ? snd_una_ : sacked_.rbegin()->second;
    std::uint64_t prev = snd_una_;
    auto scan = [&](std::uint64_t from, std::uint64_t to,
                    std::uint64_t above) -> std::optional<std::uint64_t> {
        if (lost_only && above <= 2ull * cfg_.mss) return std::nullopt;
        for (std::uint64_t c = from; c + cfg_.mss <= to; c += cfg_.mss)
            if (rxt_overlap(c, c + cfg_.mss) == 0) return c;
        return std::nullopt;
    };
    std::uint64_t total_sacked = 0;
    for (const auto& [s, e] : sacked_) total_sacked += e - s;
    std::uint64_t above = total_sacked;
    for (const auto& [s, e] : sacked_) {
        if (s > prev) {
            if (auto c = scan(prev, std::min(s, limit), above)) return c;
        }
        above -= e - s;
        prev = e;
        if (prev >= limit) break;
    }
    return std::nullopt;
}

void TcpSender::on_ack(const TcpSegment& ack, SimTime now) {
    if (!ack.is_ack) return;
    if (ack.ack_num > snd_nxt_) throw std::logic_error("ACK beyond snd_nxt");
    if (ack.ack_num < snd_una_) return;  // old ACK, ignore

    for (int i = 0; i < ack.n_sack; ++i) merge_sack(ack.sack[i].start, ack.sack[i].end);

    bool advanced = ack.ack_num > snd_una_;
    if (advanced) {
        if (timed_seq_ != kNoSeq && ack.ack_num > timed_seq_) {
            rtt_sample(now - timed_at_);
            timed_seq_ = kNoSeq;
        }
        snd_una_ = ack.ack_num;
        // prune scoreboard and retransmission marks below snd_una
        for (auto it = sacked_.begin(); it != sacked_.end();) {
            if (it->second <= snd_una_) { it = sacked_.erase(it); continue; }
            if (it->first < snd_una_) {
                auto e = it->second;
                sacked_.erase(it);
                sacked_[snd_una_] = e;
                it = sacked_.find(snd_una_);
            }
            break;
        }
        for (auto it = rxt_.begin(); it != rxt_.end();) {
            if (it->second <= snd_una_) { it = rxt_.erase(it); continue; }
            if (it->first < snd_una_) {
                auto e = it->second;
                rxt_.erase(it);
                rxt_[snd_una_] = e;
            }
            break;
        }
        if (in_recovery_) {
            if (snd_una_ >= recovery_point_) exit_recovery();
        } else {
            dupacks_ = 0;
            if (cwnd_ < ssthresh_) {
                cwnd_ += cfg_.mss;  // slow start
            } else {
                std::uint64_t inc = (std::uint64_t)cfg_.mss * cfg_.mss / cwnd_;
                cwnd_ += std::max<std::uint64_t>(inc, 1);
            }
        }
        restart_timer(now);
    } else if (flight() > 0 && !in_recovery_) {
        ++dupacks_;
        if (dupacks_ >= 3 || is_lost(snd_una_)) enter_recovery(now);
    }
    send_pending(now);
}

void TcpSender::enter_recovery(SimTime now) {
    ssthresh_ = std::max(flight() / 2, 2ull * cfg_.mss);
    cwnd_ = ssthresh_;
    recovery_point_ = snd_nxt_;
    in_recovery_ = true;
    rxt_.clear();
    // fast retransmit of the lowest un-SACKed hole
    emit_segment(snd_una_, now);
}

void TcpSender::exit_recovery() {
    in_recovery_ = false;
    cwnd_ = ssthresh_;
    rxt_.clear();
    dupacks_ = 0;
}

void TcpSender::send_pending(SimTime now) {
    if (!started_) return;
    if (!in_recovery_) {
        std::uint64_t wnd = std::min(cwnd_, cfg_.rcv_wnd);
        while (flight() + cfg_.mss <= wnd) emit_segment(snd_nxt_, now);
    } else {
        std::uint64_t pipe = compute_pipe();
        while (pipe + cfg_.mss <= cwnd_) {
            if (auto hole = next_hole(/*lost_only=*/true)) {
                emit_segment(*hole, now);
            } else if (flight() + cfg_.mss <= cfg_.rcv_wnd) {
                emit_segment(snd_nxt_, now);
            } else if (auto any = next_hole(/*lost_only=*/false)) {
                emit_segment(*any, now);
            } else {
                break;
            }
            pipe += cfg_.mss;
        }
    }
}

void TcpSender::emit_segment(std::uint64_t seq, SimTime now) {
    bool is_new = seq == snd_nxt_ && seq >= max_sent_;
    TcpSegment seg;
    seg.seq_start = seq;
    seg.seq_end = seq + cfg_.mss;
    seg.payload_len = cfg_.mss;

    if (seq == snd_nxt_) snd_nxt_ += cfg_.mss;
    if (is_new) {
        max_sent_ = snd_nxt_;
        if (timed_seq_ == kNoSeq) {
            timed_seq_ = seq;
            timed_at_ = now;
        }
    } else {
        ++retransmits_;
        if (in_recovery_) {
            auto it = rxt_.find(seq);  // chunks are MSS-aligned
            if (it == rxt_.end()) rxt_[seq] = seq + cfg_.mss;
        }
        if (timed_seq_ != kNoSeq && timed_seq_ >= seq && timed_seq_ < seq + cfg_.mss)
            timed_seq_ = kNoSeq;  // Karn: never time a retransmitted segment
    }
    ++segments_sent_;
    bytes_sent_ += cfg_.mss;
    arm_timer_if_needed(now);
    emit_(std::move(seg));
}

void TcpSender::on_timeout(SimTime now) {
    ++timeouts_;
    ssthresh_ = std::max(flight() / 2, 2ull * cfg_.mss);
    cwnd_ = cfg_.mss;
    snd_nxt_ = snd_una_;  // rewind; everything outstanding is resent
    sacked_.clear();
    rxt_.clear();
    in_recovery_ = false;
    dupacks_ = 0;
    timed_seq_ = kNoSeq;
    rto_ = std::min(rto_ * 2, cfg_.max_rto);  // exponential backoff
    send_pending(now);
}

void TcpSender::rtt_sample(SimTime rtt) {
    auto r = static_cast<std::int64_t>(rtt);
    if (srtt_ < 0) {
        srtt_ = r;
        rttvar_ = r / 2;
    } else {
        std::int64_t err = srtt_ - r;
        if (err < 0) err = -err;
        rttvar_ = (3 * rttvar_ + err) / 4;
        srtt_ = (7 * srtt_ + r) / 8;
    }
    std::int64_t gran = static_cast<std::int64_t>(cfg_.timer_granularity);
    std::int64_t raw = srtt_ + std::max(gran, 4 * rttvar_);
    // round up to the coarse timer tick
    std::int64_t ticks = (raw + gran - 1) / gran;
    SimTime rto = static_cast<SimTime>(ticks) * cfg_.timer_granularity;
    rto_ = std::clamp(rto, cfg_.min_rto, cfg_.max_rto);
}

void TcpSender::restart_timer(SimTime now) {
    stop_timer();
    if (snd_una_ < snd_nxt_) {
        timer_ = engine_.schedule(now + rto_, this, kEvTcpTimer);
        timer_armed_ = true;
    }
}

void TcpSender::stop_timer() {
    if (timer_armed_) {
        engine_.cancel(timer_);
        timer_armed_ = false;
    }
}

void TcpSender::arm_timer_if_needed(SimTime now) {
    if (!timer_armed_) {
        timer_ = engine_.schedule(now + rto_, this, kEvTcpTimer);
        timer_armed_ = true;
    }
}

void TcpSender::on_event(std::uint32_t kind) {
    if (kind != kEvTcpTimer) throw std::logic_error("unexpected event kind at TCP sender");
    timer_armed_ = false;
    on_timeout(engine_.now());
}

void TcpReceiver::on_segment(const TcpSegment& seg, SimTime now) {
    (void)now;
    if (seg.is_ack) return;
    if (seg.seq_end <= rcv_nxt_) {
        send_ack(true);  // stale duplicate
        return;
    }
    if (seg.seq_start <= rcv_nxt_) {
        rcv_nxt_ = seg.seq_end;
        auto it = ooo_.begin();
        while (it != ooo_.end() && it->first <= rcv_nxt_) {
            rcv_nxt_ = std::max(rcv_nxt_, it->second);
            it = ooo_.erase(it);
        }
        while (!recent_.empty() && !ooo_.count(recent_.front()) ) {
            // drop stale recency entries lazily
            recent_.pop_front();
        }
        send_ack(false);
        return;
    }
    // out of order: merge into the store
    std::uint64_t s = seg.seq_start, e = seg.seq_end;
    auto it = ooo_.lower_bound(s);
    if (it != ooo_.begin()) {
        auto prev = std::prev(it);
        if (prev->second >= s) it = prev;
    }
    while (it != ooo_.end() && it->first <= e) {
        s = std::min(s, it->first);
        e = std::max(e, it->second);
        it = ooo_.erase(it);
    }
    ooo_[s] = e;
    // refresh recency: the merged block moves to the front
    for (auto r = recent_.begin(); r != recent_.end();) {
        if (*r >= s && *r < e) r = recent_.erase(r);
        else ++r;
    }
    recent_.push_front(s);
    if (recent_.size() > 8) recent_.pop_back();
    send_ack(true);
}

void TcpReceiver::send_ack(bool dup) {
    TcpSegment ack;
    ack.is_ack = true;
    ack.ack_num = rcv_nxt_;
    for (std::uint64_t start : recent_) {
        if (ack.n_sack >= kMaxSackBlocks) break;
        auto it = ooo_.find(start);
        if (it == ooo_.end()) continue;  // stale
        bool seen = false;
        for (int i = 0; i < ack.n_sack; ++i)
            if (ack.sack[i].start == it->first) seen = true;
        if (seen) continue;
        ack.sack[ack.n_sack++] = SackBlock{it->first, it->second};
    }
    ++acks_sent_;
    if (dup) ++dup_acks_sent_;
    emit_(std::move(ack));
}

}  // namespace gfrsim
