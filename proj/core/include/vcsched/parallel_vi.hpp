#pragma once

#include "vcsched/mdp.hpp"

#include <condition_variable>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace vcsched {

/// Contiguous equal-sized blocks over the enumerated state array.
struct BlockPartition {
    int n_blocks = 1;
    std::vector<std::pair<std::size_t, std::size_t>> ranges; // [begin, end) per block

    static BlockPartition even(std::size_t n_states, int n_blocks);
    int block_of(std::size_t state) const;
};

/// Generation barrier: no worker starts sweep k+1 until all finish sweep k.
class SweepBarrier {
public:
    explicit SweepBarrier(int participants) : participants_(participants) {}

    void arrive_and_wait();

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int participants_;
    int waiting_ = 0;
    std::uint64_t generation_ = 0;
};

/// Block-parallel Jacobi value iteration: each worker sweeps its block of
/// states against a read-only snapshot of the previous iterate into a local
/// buffer, flushes the buffer to the global next iterate at sweep end, and
/// synchronizes on a barrier. Successor values are always read from the
/// global previous-iterate snapshot, so the result is bit-identical to the
/// sequential solver for any worker count, with the same sweep count.
ViResult parallel_value_iteration(const MdpInstance& instance, const ViOptions& options = {},
                                  int n_workers = 1);

struct SpeedupRow {
    int workers = 1;
    double wall_ms = 0.0;
    double speedup_vs_one = 1.0;
};

/// Times parallel_value_iteration at each worker count. Informational only;
/// wall times are hardware-dependent.
std::vector<SpeedupRow> measure_speedup(const MdpInstance& instance,
                                        std::span<const int> worker_counts,
                                        const ViOptions& options = {});

} // namespace vcsched
