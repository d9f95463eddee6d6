#include "vcsched/parallel_vi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace vcsched {

BlockPartition BlockPartition::even(std::size_t n_states, int n_blocks) {
    if (n_blocks < 1) throw std::invalid_argument("n_blocks must be >= 1");
    BlockPartition part;
    part.n_blocks = n_blocks;
    const std::size_t base = n_states / static_cast<std::size_t>(n_blocks);
    const std::size_t extra = n_states % static_cast<std::size_t>(n_blocks);
    std::size_t begin = 0;
    for (int b = 0; b < n_blocks; ++b) {
        const std::size_t len = base + (static_cast<std::size_t>(b) < extra ? 1 : 0);
        part.ranges.emplace_back(begin, begin + len);
        begin += len;
    }
    return part;
}

int BlockPartition::block_of(std::size_t state) const {
    for (int b = 0; b < n_blocks; ++b)
        if (state >= ranges[static_cast<std::size_t>(b)].first &&
            state < ranges[static_cast<std::size_t>(b)].second)
            return b;
    return -1;
}

void SweepBarrier::arrive_and_wait() {
    std::unique_lock lock(mutex_);
    const std::uint64_t gen = generation_;
    if (++waiting_ == participants_) {
        waiting_ = 0;
        ++generation_;
        cv_.notify_all();
    } else {
        cv_.wait(lock, [&] { return generation_ != gen; });
    }
}

namespace detail {

ViResult run_value_iteration(std::shared_ptr<const StateSpace> space, const ViOptions& options,
                             int n_workers) {
    if (n_workers < 1) throw std::invalid_argument("n_workers must be >= 1");
    const std::size_t n = space->size();
    std::vector<double> prev(n, 0.0), next(n, 0.0);
    int sweeps = 0;

    if (n_workers == 1) {
        bool converged = false;
        while (!converged) {
            double delta = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                const double v = space->backup(s, prev.data());
                delta = std::max(delta, std::abs(v - prev[s]));
                next[s] = v;
            }
            std::swap(prev, next);
            ++sweeps;
            converged = delta < options.epsilon;
        }
    } else {
        const BlockPartition part = BlockPartition::even(n, n_workers);
        SweepBarrier barrier(n_workers);
        std::vector<double> block_delta(static_cast<std::size_t>(n_workers), 0.0);
        bool stop = false;
        double* prev_ptr = prev.data();
        double* next_ptr = next.data();

        auto worker = [&](int w) {
            const auto [begin, end] = part.ranges[static_cast<std::size_t>(w)];
            std::vector<double> buffer(end - begin);
            while (true) {
                double delta = 0.0;
                for (std::size_t s = begin; s < end; ++s) {
                    const double v = space->backup(s, prev_ptr);
                    delta = std::max(delta, std::abs(v - prev_ptr[s]));
                    buffer[s - begin] = v;
                }
                block_delta[static_cast<std::size_t>(w)] = delta;
                barrier.arrive_and_wait();
                std::copy(buffer.begin(), buffer.end(), next_ptr + begin);
                barrier.arrive_and_wait();
                if (w == 0) {
                    double global = 0.0;
                    for (double d : block_delta) global = std::max(global, d);
                    std::swap(prev_ptr, next_ptr);
                    ++sweeps;
                    stop = global < options.epsilon;
                }
                barrier.arrive_and_wait();
                if (stop) return;
            }
        };

        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker, w);
        for (auto& t : threads) t.join();
        if (prev_ptr != prev.data()) std::swap(prev, next);
    }

    // prev now holds the converged iterate; extract the argmax policy from it.
    std::vector<std::int32_t> actions(n, kPaidCloud);
    for (std::size_t s = 0; s < n; ++s) space->backup(s, prev.data(), &actions[s]);

    ValueTable table(space, std::move(prev), sweeps, options.epsilon);
    Policy policy(std::move(space), std::move(actions));
    return ViResult{std::move(table), std::move(policy)};
}

} // namespace detail

ViResult parallel_value_iteration(const MdpInstance& instance, const ViOptions& options,
                                  int n_workers) {
    auto space = StateSpace::build(instance, options.state_cap);
    return detail::run_value_iteration(std::move(space), options, n_workers);
}

std::vector<SpeedupRow> measure_speedup(const MdpInstance& instance,
                                        std::span<const int> worker_counts,
                                        const ViOptions& options) {
    std::vector<SpeedupRow> rows;
    auto space = StateSpace::build(instance, options.state_cap);
    for (int workers : worker_counts) {
        const auto start = std::chrono::steady_clock::now();
        auto result = detail::run_value_iteration(space, options, workers);
        const auto end = std::chrono::steady_clock::now();
        (void)result;
        SpeedupRow row;
        row.workers = workers;
        row.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
        rows.push_back(row);
    }
    double baseline = rows.empty() ? 0.0 : rows.front().wall_ms;
    for (const auto& row : rows)
        if (row.workers == 1) baseline = row.wall_ms;
    for (auto& row : rows)
        row.speedup_vs_one = row.wall_ms > 0.0 ? baseline / row.wall_ms : 1.0;
    return rows;
}

} // namespace vcsched
