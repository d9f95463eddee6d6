#pragma once

#include "vcsched/greedy.hpp"
#include "vcsched/workload.hpp"

#include <string>
#include <vector>

namespace vcsched {

/// One comparison row: a (scenario, channel scheme, scheduler) combination.
struct MetricRow {
    std::string scenario_id;
    std::string scheme;    // "static1609" | "aaa"
    std::string scheduler; // "greedy" | "mdp" | "mdp-parallel"
    int n_vehicles = 0;
    double vc_throughput_kbps = 0.0;
    double bsm_delay_ms = 0.0;
    double vc_delay_ms = 0.0;
    double cchi_ms = 0.0;
    double schi_ms = 0.0;
    double utilization_pct = 0.0; // rounded to 4 decimals
    double reward = 0.0;
    long paid_vms = 0;
    long unused_vms = 0;

    friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

/// Throughput share of one vehicle: cloud throughput / vehicle count.
/// Throws std::invalid_argument when n_vehicles < 1.
double per_vehicle_throughput(double vc_throughput_kbps, int n_vehicles);

/// Rounds to 4 decimal places, the precision used for emitted percentages.
double round_percent(double pct);

struct UtilizationReport {
    std::vector<std::pair<int, double>> per_cloud; // cloud id -> percent
    double overall_pct = 0.0;
};

/// Percent of VMs used per cloud and overall (capacity-weighted).
UtilizationReport utilization(const ScheduleResult& result, const VccModel& vcc);

struct RewardBreakdown {
    double vc_gain = 0.0;
    double paid_cost = 0.0;
    double idle_penalty = 0.0;
    double total = 0.0; // vc_gain - paid_cost - idle_penalty
};

/// Splits a schedule's reward into its gain/cost/penalty components.
RewardBreakdown reward_decomposition(const ScheduleResult& result, const VccModel& vcc);

} // namespace vcsched
