#include "gfrsim/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gfrsim/sim_time.h"

namespace gfrsim {

VcStats make_vc_stats(VcId vc, int category, std::uint64_t bytes, double duration_s,
                      double target_bps, double mcr_cells_s) {
    if (duration_s <= 0.0) throw std::invalid_argument("measurement window must be positive");
    VcStats s;
    s.vc = vc;
    s.category = category;
    s.bytes_delivered = bytes;
    s.duration_s = duration_s;
    s.throughput_bps = static_cast<double>(bytes) * 8.0 / duration_s;
    s.target_bps = target_bps;
    s.mcr_bps = mcr_cells_s * kCellBits;
    return s;
}

double efficiency(const std::vector<VcStats>& stats, double max_throughput_bps) {
    if (max_throughput_bps <= 0.0) throw std::invalid_argument("max throughput must be positive");
    double sum = 0.0;
    for (const VcStats& s : stats) sum += s.throughput_bps;
    return sum / max_throughput_bps;
}

double fairness_index(const std::vector<double>& throughputs) {
    if (throughputs.empty()) throw std::invalid_argument("fairness of an empty set");
    double sum = 0.0, sumsq = 0.0;
    for (double x : throughputs) {
        sum += x;
        sumsq += x * x;
    }
    if (sumsq == 0.0) throw std::invalid_argument("fairness of all-zero throughputs");
    return sum * sum / (static_cast<double>(throughputs.size()) * sumsq);
}

double fairness_index(const std::vector<VcStats>& stats) {
    std::vector<double> xs;
    xs.reserve(stats.size());
    for (const VcStats& s : stats) xs.push_back(s.throughput_bps);
    return fairness_index(xs);
}

std::vector<CategoryStats> category_report(const std::vector<VcStats>& stats) {
    std::map<int, std::vector<const VcStats*>> groups;
    for (const VcStats& s : stats) groups[s.category].push_back(&s);

    std::vector<CategoryStats> out;
    for (const auto& [cat, members] : groups) {
        if (members.empty()) throw std::invalid_argument("empty category");
        CategoryStats c;
        c.category = cat;
        c.count = static_cast<int>(members.size());
        c.target_bps = members.front()->target_bps;
        double ratio_sum = 0.0, x_sum = 0.0;
        for (const VcStats* s : members) {
            ratio_sum += s->ratio();
            x_sum += s->throughput_bps;
        }
        c.mean_ratio = ratio_sum / c.count;
        c.mean_throughput_bps = x_sum / c.count;
        double var = 0.0;
        for (const VcStats* s : members) {
            double d = s->throughput_bps - c.mean_throughput_bps;
            var += d * d;
        }
        c.stddev_bps = std::sqrt(var / c.count);  // population stddev
        out.push_back(c);
    }
    return out;
}

bool gfr_verdict(const std::vector<VcStats>& stats, double fraction) {
    return std::all_of(stats.begin(), stats.end(),
                       [&](const VcStats& s) { return s.ratio() >= fraction; });
}

}  // namespace gfrsim
