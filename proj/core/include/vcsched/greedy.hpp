#pragma once

#include "vcsched/workload.hpp"

#include <map>
#include <span>

namespace vcsched {

/// Outcome of a scheduling run, shared by the greedy and MDP schedulers.
struct ScheduleResult {
    std::vector<PlacementRecord> placements;
    long paid_vms = 0;   // VMs bought from the traditional cloud
    long unused_vms = 0; // free VMs left across all clouds
    std::map<int, long> per_vc_used;

    long vc_placed_vms() const {
        long sum = 0;
        for (const auto& [id, used] : per_vc_used) sum += used;
        return sum;
    }
};

/// First-fit heuristic: walk the bags in order, tasks in order, and place
/// each task on the first cloud (in list order) that satisfies feasible();
/// a task with no feasible cloud goes to the paid traditional cloud.
ScheduleResult greedy_schedule(const VccModel& vcc, std::span<const BagOfTasks> bots);

/// beta_vc * placed - beta_tc * paid - gamma_vc * unused.
double greedy_reward(const ScheduleResult& result, const VccModel& vcc);

} // namespace vcsched
