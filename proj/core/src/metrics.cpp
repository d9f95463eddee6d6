#include "vcsched/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace vcsched {

double per_vehicle_throughput(double vc_throughput_kbps, int n_vehicles) {
    if (n_vehicles < 1) throw std::invalid_argument("n_vehicles must be >= 1");
    return vc_throughput_kbps / static_cast<double>(n_vehicles);
}

double round_percent(double pct) { return std::round(pct * 1e4) / 1e4; }

UtilizationReport utilization(const ScheduleResult& result, const VccModel& vcc) {
    UtilizationReport report;
    long used_total = 0;
    for (const auto& cloud : vcc.clouds) {
        const auto it = result.per_vc_used.find(cloud.id);
        const long used = it != result.per_vc_used.end() ? it->second : 0;
        used_total += used;
        const double pct =
            cloud.vm_total > 0 ? 100.0 * static_cast<double>(used) / cloud.vm_total : 0.0;
        report.per_cloud.emplace_back(cloud.id, round_percent(pct));
    }
    const long capacity = total_capacity(vcc);
    report.overall_pct =
        capacity > 0 ? round_percent(100.0 * static_cast<double>(used_total) / capacity) : 0.0;
    return report;
}

RewardBreakdown reward_decomposition(const ScheduleResult& result, const VccModel& vcc) {
    RewardBreakdown b;
    b.vc_gain = vcc.reward_per_vc_vm * static_cast<double>(result.vc_placed_vms());
    b.paid_cost = vcc.cost_per_tcc_vm * static_cast<double>(result.paid_vms);
    b.idle_penalty = vcc.penalty_per_idle_vm * static_cast<double>(result.unused_vms);
    b.total = b.vc_gain - b.paid_cost - b.idle_penalty;
    return b;
}

} // namespace vcsched
