#pragma once

#include "vcsched/greedy.hpp"
#include "vcsched/workload.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace vcsched {

/// A placement problem in canonical order: the flattened task sequence is
/// scheduled one task per decision epoch against the clouds of `vcc`.
struct MdpInstance {
    VccModel vcc;
    std::vector<Task> tasks;

    static MdpInstance from_workload(const VccModel& vcc, std::span<const BagOfTasks> bots);
};

/// Scheduling action: one cloud (by position in the instance's cloud list),
/// or the paid traditional cloud.
struct MdpAction {
    int target = kPaidCloud;
    bool is_paid() const { return target == kPaidCloud; }
    friend bool operator==(const MdpAction&, const MdpAction&) = default;
};

/// Full scheduler state: remaining capacity per cloud plus the position in
/// the task sequence.
struct MdpState {
    std::vector<int> free_vms;
    int next_task_index = 0;
    bool terminal = false;
};

MdpState initial_state(const MdpInstance& instance);

/// All actions legal in `s`: every cloud that satisfies feasible() for the
/// pending task (ascending index), then the paid cloud.
std::vector<MdpAction> legal_actions(const MdpInstance& instance, const MdpState& s);

/// Applies one action. Throws std::invalid_argument on a terminal state or
/// an infeasible cloud target.
MdpState transition(const MdpState& s, MdpAction a, const MdpInstance& instance);

/// Immediate reward of one placement: +beta_vc*n for a cloud, -beta_tc*n for
/// the paid cloud. The idle-VM penalty is not charged per step; it enters as
/// the terminal value -gamma_vc * sum(free_vms).
double step_reward(const MdpState& s, MdpAction a, const MdpState& next,
                   const MdpInstance& instance);

/// Thrown when the reachable state space outgrows the configured cap.
class StateCapacityError : public std::runtime_error {
public:
    explicit StateCapacityError(std::size_t cap)
        : std::runtime_error("reachable state space exceeds cap of " + std::to_string(cap) +
                             " states"),
          cap_(cap) {}
    std::size_t cap() const { return cap_; }

private:
    std::size_t cap_;
};

/// The enumerated reachable state graph, layered by task index.
///
/// States are keyed by the free counts of the clouds still eligible for at
/// least one remaining task. A cloud whose last eligible task has passed can
/// never change again and contributes a fixed idle penalty; it is charged on
/// the transition that retires it and dropped from the key. Values stored
/// over this reduced key differ from full-state values by an
/// action-independent constant per state, so optima, argmax decisions and
/// tie-breaks are identical to iterating over full states, while states that
/// differ only in retired clouds collapse together.
class StateSpace {
public:
    static std::shared_ptr<const StateSpace> build(const MdpInstance& instance,
                                                   std::size_t state_cap);

    std::size_t size() const { return n_states_; }
    int task_count() const { return horizon_; }
    std::size_t layer_begin(int t) const { return layer_offset_[static_cast<std::size_t>(t)]; }
    std::size_t layer_end(int t) const { return layer_offset_[static_cast<std::size_t>(t) + 1]; }

    /// Flat index of the canonical node a full state maps to.
    std::size_t locate(const MdpState& s) const;

    /// Idle penalty already folded away for `s`: gamma times the free VMs of
    /// clouds retired at its layer. Full-state value = W[locate(s)] - this.
    double hidden_penalty(const MdpState& s) const;

    /// One Bellman backup of state `s` against the previous iterate `prev`.
    /// Returns the new value; when `best_action` is non-null it receives the
    /// argmax target (lowest feasible cloud wins ties, paid loses all ties).
    double backup(std::size_t s, const double* prev, std::int32_t* best_action = nullptr) const;

    const MdpInstance& instance() const { return *instance_; }

private:
    friend class ValueTable;
    friend class Policy;

    using Key = std::vector<std::uint16_t>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    using LayerMap = std::unordered_map<Key, std::uint32_t, KeyHash>;

    Key key_of(const MdpState& s) const;

    std::shared_ptr<const MdpInstance> instance_;
    int horizon_ = 0;
    std::size_t n_states_ = 0;
    std::vector<std::size_t> layer_offset_;      // horizon_ + 2 entries
    std::vector<std::vector<int>> active_;       // clouds still eligible, per layer
    std::vector<int> last_use_;                  // last task index eligible per cloud, -1 if none
    std::vector<LayerMap> layer_maps_;           // canonical key -> index within layer

    // CSR edge storage; edge order per state: clouds ascending, then paid.
    std::vector<std::size_t> edge_first_;
    std::vector<std::uint32_t> edge_succ_;       // flat successor index
    std::vector<double> edge_reward_;            // step reward plus retirement charge
    std::vector<std::int32_t> edge_action_;      // cloud index or kPaidCloud
};

struct ViOptions {
    double epsilon = 1e-6;
    std::size_t state_cap = 5'000'000;
};

/// The converged value function over the reachable states.
class ValueTable {
public:
    ValueTable(std::shared_ptr<const StateSpace> space, std::vector<double> values, int sweeps,
               double epsilon)
        : space_(std::move(space)), values_(std::move(values)), sweeps_(sweeps),
          epsilon_(epsilon) {}

    double value_of(const MdpState& s) const;
    double initial_value() const;

    int sweeps() const { return sweeps_; }
    double epsilon() const { return epsilon_; }
    std::size_t states_explored() const { return space_->size(); }

    /// Values in enumeration order (reduced representation); two solvers
    /// agree iff these agree element-for-element.
    std::span<const double> raw_values() const { return values_; }

    const StateSpace& space() const { return *space_; }

private:
    std::shared_ptr<const StateSpace> space_;
    std::vector<double> values_;
    int sweeps_ = 0;
    double epsilon_ = 0.0;
};

/// The extracted scheduling policy over reachable non-terminal states.
class Policy {
public:
    Policy(std::shared_ptr<const StateSpace> space, std::vector<std::int32_t> actions)
        : space_(std::move(space)), actions_(std::move(actions)) {}

    /// Throws std::out_of_range for terminal or unreachable states.
    MdpAction action_for(const MdpState& s) const;

    std::span<const std::int32_t> raw_actions() const { return actions_; }
    const StateSpace& space() const { return *space_; }

private:
    std::shared_ptr<const StateSpace> space_;
    std::vector<std::int32_t> actions_;
};

struct ViResult {
    ValueTable values;
    Policy policy;
};

/// Jacobi value iteration from V=0 until the sup-norm change drops below
/// epsilon, then argmax policy extraction. Converges in at most
/// task_count + 1 sweeps on the layered graph.
ViResult value_iteration(const MdpInstance& instance, const ViOptions& options = {});

/// Max over legal actions of step_reward + V(successor), with the solver's
/// tie-break. `s` must be non-terminal and reachable.
std::pair<double, MdpAction> bellman_backup(const MdpState& s, const ValueTable& values,
                                            const MdpInstance& instance);

/// Applies the policy from the initial state to the horizon and reports the
/// outcome in the same shape as the greedy scheduler.
ScheduleResult rollout(const Policy& policy, const MdpInstance& instance);

namespace detail {
/// Shared by the sequential and block-parallel solvers.
ViResult run_value_iteration(std::shared_ptr<const StateSpace> space, const ViOptions& options,
                             int n_workers);
} // namespace detail

} // namespace vcsched
