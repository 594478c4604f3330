#ifndef GFRSIM_SIM_TIME_H
#define GFRSIM_SIM_TIME_H

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace gfrsim {

// Simulated time in integer nanoseconds. One tick = 1 ns; at 155.52 Mbps a
// cell lasts ~2726 ticks, so per-cell rounding error stays below 0.04%.
using SimTime = std::uint64_t;

constexpr SimTime kNsPerUs = 1000ull;
constexpr SimTime kNsPerMs = 1000ull * 1000ull;
constexpr SimTime kNsPerSec = 1000ull * 1000ull * 1000ull;

constexpr SimTime from_us(std::uint64_t us) { return us * kNsPerUs; }
constexpr SimTime from_ms(std::uint64_t ms) { return ms * kNsPerMs; }
constexpr SimTime from_sec_int(std::uint64_t s) { return s * kNsPerSec; }

inline SimTime from_sec(double s) {
    if (s < 0.0) throw std::invalid_argument("negative time");
    return static_cast<SimTime>(std::llround(s * 1e9));
}

inline double to_sec(SimTime t) { return static_cast<double>(t) * 1e-9; }

// Interval of one unit at the given rate, rounded to the nearest tick.
// Never truncates to zero for a positive rate.
inline SimTime interval_from_rate(double per_sec) {
    if (per_sec <= 0.0) throw std::invalid_argument("rate must be positive");
    auto ticks = std::llround(1e9 / per_sec);
    return ticks < 1 ? SimTime{1} : static_cast<SimTime>(ticks);
}

// ATM cell geometry. 53-byte cells, 48 bytes of payload; a frame carries
// 20 B TCP header + 8 B LLC + 8 B AAL5 trailer of overhead around the data.
constexpr std::uint32_t kCellBytes = 53;
constexpr std::uint32_t kCellPayloadBytes = 48;
constexpr std::uint32_t kCellBits = kCellBytes * 8;
constexpr std::uint32_t kFrameOverheadBytes = 20 + 8 + 8;

// Serialization time of one 53-byte cell on a link of the given bandwidth.
inline SimTime cell_tx_time(double bandwidth_bps) {
    if (bandwidth_bps <= 0.0) throw std::invalid_argument("bandwidth must be positive");
    return interval_from_rate(bandwidth_bps / static_cast<double>(kCellBits));
}

struct LinkConfig {
    double bandwidth_bps = 0.0;
    SimTime propagation_delay = 0;
};

inline SimTime cell_time(const LinkConfig& link) { return cell_tx_time(link.bandwidth_bps); }

}  // namespace gfrsim

#endif
