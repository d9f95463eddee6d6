#include <benchmark/benchmark.h>

#include "vcsched/sim.hpp"

using namespace vcsched;

static void BM_Simulate(benchmark::State& state) {
    VanetScenario sc;
    sc.n_vehicles = static_cast<int>(state.range(0));
    sc.sim_duration_ms = 10'000;
    sc.scheme = state.range(1) ? Scheme::kAaa : Scheme::kStatic1609;
    for (auto _ : state) {
        auto trace = run_simulation(sc);
        benchmark::DoNotOptimize(trace.packets.size());
    }
}
BENCHMARK(BM_Simulate)->Args({5, 0})->Args({5, 1})->Args({25, 0})->Args({25, 1})->Args({45, 0})->Args({45, 1});
