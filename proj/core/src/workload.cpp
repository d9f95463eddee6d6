#include "vcsched/workload.hpp"

#include <stdexcept>

namespace vcsched {

long total_demand(std::span<const BagOfTasks> bots) {
    long sum = 0;
    for (const auto& bot : bots)
        for (const auto& task : bot.tasks)
            sum += task.vm_demand;
    return sum;
}

long total_capacity(const VccModel& vcc) {
    long sum = 0;
    for (const auto& cloud : vcc.clouds)
        sum += cloud.vm_total;
    return sum;
}

bool feasible(const VehicularCloud& cloud, const Task& task) {
    return cloud.vm_free >= task.vm_demand &&
           cloud.v2i_delay_ms <= task.max_delay_ms &&
           cloud.vm_throughput_kbps >= task.min_vm_throughput_kbps;
}

std::vector<Task> flatten_tasks(std::span<const BagOfTasks> bots) {
    std::vector<Task> out;
    for (const auto& bot : bots)
        out.insert(out.end(), bot.tasks.begin(), bot.tasks.end());
    return out;
}

void validate(const VccModel& vcc) {
    if (vcc.reward_per_vc_vm < 0 || vcc.cost_per_tcc_vm < 0 || vcc.penalty_per_idle_vm < 0)
        throw std::invalid_argument("rate parameters must be non-negative");
    for (const auto& c : vcc.clouds) {
        if (c.vm_total < 0)
            throw std::invalid_argument("cloud " + std::to_string(c.id) + ": vm_total < 0");
        if (c.vm_free < 0 || c.vm_free > c.vm_total)
            throw std::invalid_argument("cloud " + std::to_string(c.id) +
                                        ": vm_free outside [0, vm_total]");
    }
}

void validate(std::span<const BagOfTasks> bots) {
    for (const auto& bot : bots) {
        for (const auto& t : bot.tasks) {
            if (t.vm_demand < 1)
                throw std::invalid_argument("task " + std::to_string(t.id) + ": vm_demand < 1");
            if (t.max_delay_ms <= 0 || t.min_vm_throughput_kbps <= 0)
                throw std::invalid_argument("task " + std::to_string(t.id) +
                                            ": requirements must be positive");
        }
    }
}

} // namespace vcsched
