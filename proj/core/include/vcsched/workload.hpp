#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vcsched {

/// One unit of work: a task needs `vm_demand` VMs on a single cloud whose
/// link satisfies the delay and per-VM throughput requirements.
struct Task {
    int id = 0;
    int vm_demand = 1;
    double max_delay_ms = 0.0;
    double min_vm_throughput_kbps = 0.0;
};

/// An unordered bag of independent tasks. The list order is only the
/// canonical processing order used by the schedulers.
struct BagOfTasks {
    int id = 0;
    std::vector<Task> tasks;
};

/// A vehicular cloud: OBUs under one RSU, each contributing one VM.
struct VehicularCloud {
    int id = 0;
    int vm_total = 0;
    int vm_free = 0;
    double vm_throughput_kbps = 0.0;
    double v2i_delay_ms = 0.0;
};

/// The cloud federation plus the reward/cost/penalty rates used by both
/// schedulers. The paid traditional cloud is implicit: unbounded capacity,
/// always feasible.
struct VccModel {
    std::vector<VehicularCloud> clouds;
    double reward_per_vc_vm = 1.0;    // beta_vc
    double cost_per_tcc_vm = 1.2;     // beta_tc
    double penalty_per_idle_vm = 1.0; // gamma_vc
};

/// Sentinel target for placement on the paid traditional cloud.
inline constexpr int kPaidCloud = -1;

struct PlacementRecord {
    int task_id = 0;
    int target = kPaidCloud; // cloud id, or kPaidCloud
    int vms_used = 0;
};

/// Sum of vm_demand over every task in every bag.
long total_demand(std::span<const BagOfTasks> bots);

/// Sum of vm_total over all clouds.
long total_capacity(const VccModel& vcc);

/// True iff the cloud currently has enough free VMs and its link meets the
/// task's delay and throughput requirements.
bool feasible(const VehicularCloud& cloud, const Task& task);

/// Flattens the bags into the canonical task sequence.
std::vector<Task> flatten_tasks(std::span<const BagOfTasks> bots);

/// Throws std::invalid_argument when a type invariant is violated
/// (vm_demand < 1, vm_free outside [0, vm_total], negative rates, ...).
void validate(const VccModel& vcc);
void validate(std::span<const BagOfTasks> bots);

} // namespace vcsched
