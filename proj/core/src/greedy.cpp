#include "vcsched/greedy.hpp"

namespace vcsched {

ScheduleResult greedy_schedule(const VccModel& vcc, std::span<const BagOfTasks> bots) {
    std::vector<VehicularCloud> clouds = vcc.clouds; // scheduling works on a copy
    ScheduleResult result;
    for (const auto& cloud : clouds) result.per_vc_used[cloud.id] = 0;

    for (const auto& bot : bots) {
        for (const auto& task : bot.tasks) {
            bool scheduled = false;
            for (auto& cloud : clouds) {
                if (feasible(cloud, task)) {
                    cloud.vm_free -= task.vm_demand;
                    result.per_vc_used[cloud.id] += task.vm_demand;
                    result.placements.push_back({task.id, cloud.id, task.vm_demand});
                    scheduled = true;
                    break;
                }
            }
            if (!scheduled) {
                result.paid_vms += task.vm_demand;
                result.placements.push_back({task.id, kPaidCloud, task.vm_demand});
            }
        }
    }
    result.unused_vms = total_capacity(vcc) - result.vc_placed_vms();
    return result;
}

double greedy_reward(const ScheduleResult& result, const VccModel& vcc) {
    return vcc.reward_per_vc_vm * static_cast<double>(result.vc_placed_vms()) -
           vcc.cost_per_tcc_vm * static_cast<double>(result.paid_vms) -
           vcc.penalty_per_idle_vm * static_cast<double>(result.unused_vms);
}

} // namespace vcsched
