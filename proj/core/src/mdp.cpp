#include "vcsched/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vcsched {

MdpInstance MdpInstance::from_workload(const VccModel& vcc, std::span<const BagOfTasks> bots) {
    return MdpInstance{vcc, flatten_tasks(bots)};
}

MdpState initial_state(const MdpInstance& instance) {
    MdpState s;
    s.free_vms.reserve(instance.vcc.clouds.size());
    for (const auto& cloud : instance.vcc.clouds) s.free_vms.push_back(cloud.vm_free);
    s.next_task_index = 0;
    s.terminal = instance.tasks.empty();
    return s;
}

namespace {

bool cloud_feasible_in_state(const MdpInstance& instance, const MdpState& s, int cloud_idx) {
    const auto& cloud = instance.vcc.clouds[static_cast<std::size_t>(cloud_idx)];
    const auto& task = instance.tasks[static_cast<std::size_t>(s.next_task_index)];
    return s.free_vms[static_cast<std::size_t>(cloud_idx)] >= task.vm_demand &&
           cloud.v2i_delay_ms <= task.max_delay_ms &&
           cloud.vm_throughput_kbps >= task.min_vm_throughput_kbps;
}

} // namespace

std::vector<MdpAction> legal_actions(const MdpInstance& instance, const MdpState& s) {
    std::vector<MdpAction> actions;
    if (s.terminal) return actions;
    const int n = static_cast<int>(instance.vcc.clouds.size());
    for (int i = 0; i < n; ++i)
        if (cloud_feasible_in_state(instance, s, i)) actions.push_back(MdpAction{i});
    actions.push_back(MdpAction{kPaidCloud});
    return actions;
}

MdpState transition(const MdpState& s, MdpAction a, const MdpInstance& instance) {
    if (s.terminal) throw std::invalid_argument("transition from terminal state");
    MdpState next = s;
    if (!a.is_paid()) {
        if (a.target < 0 || a.target >= static_cast<int>(instance.vcc.clouds.size()))
            throw std::invalid_argument("action targets unknown cloud");
        if (!cloud_feasible_in_state(instance, s, a.target))
            throw std::invalid_argument("action targets infeasible cloud");
        next.free_vms[static_cast<std::size_t>(a.target)] -=
            instance.tasks[static_cast<std::size_t>(s.next_task_index)].vm_demand;
    }
    next.next_task_index = s.next_task_index + 1;
    next.terminal = next.next_task_index == static_cast<int>(instance.tasks.size());
    return next;
}

double step_reward(const MdpState& s, MdpAction a, const MdpState& /*next*/,
                   const MdpInstance& instance) {
    const auto& task = instance.tasks[static_cast<std::size_t>(s.next_task_index)];
    const double n = static_cast<double>(task.vm_demand);
    return a.is_paid() ? -instance.vcc.cost_per_tcc_vm * n : instance.vcc.reward_per_vc_vm * n;
}

// ---------------------------------------------------------------------------
// StateSpace
// ---------------------------------------------------------------------------

std::size_t StateSpace::KeyHash::operator()(const Key& k) const {
    // FNV-1a over the packed free counts.
    std::size_t h = 1469598103934665603ull;
    for (std::uint16_t v : k) {
        h ^= v;
        h *= 1099511628211ull;
    }
    return h;
}

std::shared_ptr<const StateSpace> StateSpace::build(const MdpInstance& instance,
                                                    std::size_t state_cap) {
    auto space = std::make_shared<StateSpace>();
    space->instance_ = std::make_shared<const MdpInstance>(instance);
    const auto& inst = *space->instance_;
    const int n_clouds = static_cast<int>(inst.vcc.clouds.size());
    const int horizon = static_cast<int>(inst.tasks.size());
    space->horizon_ = horizon;

    for (const auto& cloud : inst.vcc.clouds)
        if (cloud.vm_free > 0xffff)
            throw std::invalid_argument("cloud free counts above 65535 are not supported");

    // Attribute eligibility per (cloud, task); capacity uses the initial free
    // count, the most a cloud can ever hold.
    std::vector<std::vector<char>> attr_ok(static_cast<std::size_t>(n_clouds));
    space->last_use_.assign(static_cast<std::size_t>(n_clouds), -1);
    for (int i = 0; i < n_clouds; ++i) {
        const auto& cloud = inst.vcc.clouds[static_cast<std::size_t>(i)];
        attr_ok[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(horizon), 0);
        for (int j = 0; j < horizon; ++j) {
            const auto& task = inst.tasks[static_cast<std::size_t>(j)];
            const bool ok = cloud.v2i_delay_ms <= task.max_delay_ms &&
                            cloud.vm_throughput_kbps >= task.min_vm_throughput_kbps &&
                            task.vm_demand <= cloud.vm_free;
            attr_ok[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ok;
            if (ok) space->last_use_[static_cast<std::size_t>(i)] = j;
        }
    }

    // Clouds eligible for some remaining task, per layer.
    space->active_.resize(static_cast<std::size_t>(horizon) + 1);
    for (int t = 0; t <= horizon; ++t)
        for (int i = 0; i < n_clouds; ++i)
            if (space->last_use_[static_cast<std::size_t>(i)] >= t)
                space->active_[static_cast<std::size_t>(t)].push_back(i);

    space->layer_maps_.resize(static_cast<std::size_t>(horizon) + 1);
    space->layer_offset_.assign(static_cast<std::size_t>(horizon) + 2, 0);

    // Keys of the current layer, in insertion (= enumeration) order.
    std::vector<Key> frontier;
    {
        Key init;
        for (int i : space->active_[0])
            init.push_back(static_cast<std::uint16_t>(
                inst.vcc.clouds[static_cast<std::size_t>(i)].vm_free));
        frontier.push_back(init);
        space->layer_maps_[0].emplace(init, 0);
    }
    space->n_states_ = 1;
    space->edge_first_.push_back(0);

    const double beta_vc = inst.vcc.reward_per_vc_vm;
    const double beta_tc = inst.vcc.cost_per_tcc_vm;
    const double gamma = inst.vcc.penalty_per_idle_vm;

    for (int t = 0; t < horizon; ++t) {
        const auto& active = space->active_[static_cast<std::size_t>(t)];
        const auto& task = inst.tasks[static_cast<std::size_t>(t)];
        space->layer_offset_[static_cast<std::size_t>(t) + 1] = space->n_states_;

        // Positions (within the key) of clouds that survive into t+1, and of
        // clouds retired by this transition.
        std::vector<std::size_t> keep_pos, retire_pos;
        for (std::size_t p = 0; p < active.size(); ++p) {
            if (space->last_use_[static_cast<std::size_t>(active[p])] >= t + 1)
                keep_pos.push_back(p);
            else
                retire_pos.push_back(p);
        }

        auto& next_map = space->layer_maps_[static_cast<std::size_t>(t) + 1];
        std::vector<Key> next_frontier;
        const std::size_t next_layer_base = space->n_states_;

        auto intern = [&](Key&& key) -> std::uint32_t {
            auto [it, inserted] = next_map.emplace(std::move(key), next_frontier.size());
            if (inserted) {
                next_frontier.push_back(it->first);
                ++space->n_states_;
                if (space->n_states_ > state_cap) throw StateCapacityError(state_cap);
            }
            return it->second;
        };

        for (std::size_t si = 0; si < frontier.size(); ++si) {
            const Key& key = frontier[si];
            // Cloud actions in ascending index order, then paid last, so the
            // strictly-greater argmax scan realizes the tie-break.
            for (std::size_t p = 0; p < active.size(); ++p) {
                const int cloud_idx = active[p];
                if (!attr_ok[static_cast<std::size_t>(cloud_idx)][static_cast<std::size_t>(t)])
                    continue;
                if (key[p] < task.vm_demand) continue;
                Key succ;
                succ.reserve(keep_pos.size());
                double retired_free = 0.0;
                for (std::size_t q : keep_pos) {
                    std::uint16_t v = key[q];
                    if (q == p) v = static_cast<std::uint16_t>(v - task.vm_demand);
                    succ.push_back(v);
                }
                for (std::size_t q : retire_pos) {
                    double v = key[q];
                    if (q == p) v -= task.vm_demand;
                    retired_free += v;
                }
                const std::uint32_t local = intern(std::move(succ));
                space->edge_succ_.push_back(static_cast<std::uint32_t>(next_layer_base + local));
                space->edge_reward_.push_back(beta_vc * task.vm_demand - gamma * retired_free);
                space->edge_action_.push_back(cloud_idx);
            }
            {
                Key succ;
                succ.reserve(keep_pos.size());
                for (std::size_t q : keep_pos) succ.push_back(key[q]);
                double retired_free = 0.0;
                for (std::size_t q : retire_pos) retired_free += key[q];
                const std::uint32_t local = intern(std::move(succ));
                space->edge_succ_.push_back(static_cast<std::uint32_t>(next_layer_base + local));
                space->edge_reward_.push_back(-beta_tc * task.vm_demand - gamma * retired_free);
                space->edge_action_.push_back(kPaidCloud);
            }
            space->edge_first_.push_back(space->edge_succ_.size());
        }
        frontier = std::move(next_frontier);
    }
    // Terminal layer: no outgoing edges, one boundary per state.
    for (std::size_t i = 0; i < frontier.size(); ++i)
        space->edge_first_.push_back(space->edge_succ_.size());
    space->layer_offset_[static_cast<std::size_t>(horizon) + 1] = space->n_states_;
    return space;
}

StateSpace::Key StateSpace::key_of(const MdpState& s) const {
    const int t = s.terminal ? horizon_ : s.next_task_index;
    if (t < 0 || t > horizon_) throw std::invalid_argument("task index outside horizon");
    if (s.free_vms.size() != instance_->vcc.clouds.size())
        throw std::invalid_argument("state has wrong cloud count");
    Key key;
    for (int i : active_[static_cast<std::size_t>(t)])
        key.push_back(static_cast<std::uint16_t>(s.free_vms[static_cast<std::size_t>(i)]));
    return key;
}

std::size_t StateSpace::locate(const MdpState& s) const {
    const int t = s.terminal ? horizon_ : s.next_task_index;
    const auto key = key_of(s);
    const auto& map = layer_maps_[static_cast<std::size_t>(t)];
    auto it = map.find(key);
    if (it == map.end()) throw std::out_of_range("state not reachable in enumerated space");
    return layer_begin(t) + it->second;
}

double StateSpace::hidden_penalty(const MdpState& s) const {
    if (horizon_ == 0) return 0.0; // nothing was ever schedulable
    const int t = s.terminal ? horizon_ : s.next_task_index;
    double retired_free = 0.0;
    for (std::size_t i = 0; i < s.free_vms.size(); ++i)
        if (last_use_[i] < t) retired_free += s.free_vms[i];
    return instance_->vcc.penalty_per_idle_vm * retired_free;
}

double StateSpace::backup(std::size_t s, const double* prev, std::int32_t* best_action) const {
    const std::size_t first = edge_first_[s];
    const std::size_t last = edge_first_[s + 1];
    if (first == last) { // terminal
        if (best_action) *best_action = kPaidCloud;
        return 0.0;
    }
    double best = -std::numeric_limits<double>::infinity();
    std::int32_t action = kPaidCloud;
    for (std::size_t e = first; e < last; ++e) {
        const double q = edge_reward_[e] + prev[edge_succ_[e]];
        if (q > best) {
            best = q;
            action = edge_action_[e];
        }
    }
    if (best_action) *best_action = action;
    return best;
}

// ---------------------------------------------------------------------------
// Value iteration
// ---------------------------------------------------------------------------

double ValueTable::value_of(const MdpState& s) const {
    return values_[space_->locate(s)] - space_->hidden_penalty(s);
}

double ValueTable::initial_value() const {
    return value_of(initial_state(space_->instance()));
}

MdpAction Policy::action_for(const MdpState& s) const {
    if (s.terminal || s.next_task_index >= space_->task_count())
        throw std::out_of_range("terminal states carry no action");
    const std::size_t idx = space_->locate(s);
    return MdpAction{actions_[idx]};
}

ViResult value_iteration(const MdpInstance& instance, const ViOptions& options) {
    auto space = StateSpace::build(instance, options.state_cap);
    return detail::run_value_iteration(std::move(space), options, 1);
}

std::pair<double, MdpAction> bellman_backup(const MdpState& s, const ValueTable& values,
                                            const MdpInstance& instance) {
    if (s.terminal) throw std::invalid_argument("bellman backup of a terminal state");
    double best = -std::numeric_limits<double>::infinity();
    MdpAction best_action{kPaidCloud};
    for (const MdpAction a : legal_actions(instance, s)) {
        const MdpState next = transition(s, a, instance);
        const double q = step_reward(s, a, next, instance) + values.value_of(next);
        if (q > best) {
            best = q;
            best_action = a;
        }
    }
    return {best, best_action};
}

ScheduleResult rollout(const Policy& policy, const MdpInstance& instance) {
    ScheduleResult result;
    for (const auto& cloud : instance.vcc.clouds) result.per_vc_used[cloud.id] = 0;
    MdpState s = initial_state(instance);
    while (!s.terminal) {
        const MdpAction a = policy.action_for(s);
        const auto& task = instance.tasks[static_cast<std::size_t>(s.next_task_index)];
        if (a.is_paid()) {
            result.paid_vms += task.vm_demand;
            result.placements.push_back({task.id, kPaidCloud, task.vm_demand});
        } else {
            const int cloud_id = instance.vcc.clouds[static_cast<std::size_t>(a.target)].id;
            result.per_vc_used[cloud_id] += task.vm_demand;
            result.placements.push_back({task.id, cloud_id, task.vm_demand});
        }
        s = transition(s, a, instance);
    }
    result.unused_vms = total_capacity(instance.vcc) - result.vc_placed_vms();
    return result;
}

} // namespace vcsched
