#ifndef GFRSIM_METRICS_H
#define GFRSIM_METRICS_H

#include <cstdint>
#include <vector>

#include "gfrsim/cell.h"

namespace gfrsim {

// Per-VC goodput measured at the destination TCP layer over the run window.
struct VcStats {
    VcId vc = 0;
    int category = 0;
    std::uint64_t bytes_delivered = 0;
    double duration_s = 0.0;
    double throughput_bps = 0.0;
    double target_bps = 0.0;
    double mcr_bps = 0.0;  // ATM-layer cell rate in bits/s (informational)

    double ratio() const { return target_bps > 0.0 ? throughput_bps / target_bps : 0.0; }
};

VcStats make_vc_stats(VcId vc, int category, std::uint64_t bytes, double duration_s,
                      double target_bps, double mcr_cells_s);

// Sum of TCP throughputs over the maximum possible TCP throughput.
double efficiency(const std::vector<VcStats>& stats, double max_throughput_bps);

// Jain's index, (sum x)^2 / (n * sum x^2); 1 iff all throughputs are equal.
double fairness_index(const std::vector<double>& throughputs);
double fairness_index(const std::vector<VcStats>& stats);

struct CategoryStats {
    int category = 0;
    double target_bps = 0.0;
    double mean_ratio = 0.0;       // mean of x_i / target_i
    double stddev_bps = 0.0;       // population stddev of x_i
    double mean_throughput_bps = 0.0;
    int count = 0;
};

// Per-category mean achieved/target ratio and throughput spread. Categories
// must be non-empty.
std::vector<CategoryStats> category_report(const std::vector<VcStats>& stats);

// A run provides the guarantee iff every VC reaches the fraction of its
// target below.
constexpr double kGfrTargetFraction = 0.8;
bool gfr_verdict(const std::vector<VcStats>& stats, double fraction = kGfrTargetFraction);

}  // namespace gfrsim

#endif
