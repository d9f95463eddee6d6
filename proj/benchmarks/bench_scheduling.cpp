#include <benchmark/benchmark.h>

#include "vcsched/greedy.hpp"
#include "vcsched/io.hpp"
#include "vcsched/mdp.hpp"
#include "vcsched/parallel_vi.hpp"

using namespace vcsched;

#ifndef VCSCHED_DATA_DIR
#define VCSCHED_DATA_DIR "data"
#endif

namespace {

const ParsedInstance& canonical() {
    static const ParsedInstance inst =
        load_instance(std::string(VCSCHED_DATA_DIR) + "/canonical_instance.txt");
    return inst;
}

const MdpInstance& canonical_mdp() {
    static const MdpInstance inst =
        MdpInstance::from_workload(canonical().vcc, canonical().bots);
    return inst;
}

} // namespace

static void BM_GreedySchedule(benchmark::State& state) {
    const auto& inst = canonical();
    for (auto _ : state) {
        auto r = greedy_schedule(inst.vcc, inst.bots);
        benchmark::DoNotOptimize(r.paid_vms);
    }
}
BENCHMARK(BM_GreedySchedule);

static void BM_StateSpaceBuild(benchmark::State& state) {
    for (auto _ : state) {
        auto space = StateSpace::build(canonical_mdp(), 5'000'000);
        benchmark::DoNotOptimize(space->size());
    }
}
BENCHMARK(BM_StateSpaceBuild);

static void BM_ValueIteration(benchmark::State& state) {
    const int workers = static_cast<int>(state.range(0));
    auto space = StateSpace::build(canonical_mdp(), 5'000'000);
    for (auto _ : state) {
        auto result = detail::run_value_iteration(space, {}, workers);
        benchmark::DoNotOptimize(result.values.sweeps());
    }
    state.counters["states"] = static_cast<double>(space->size());
}
BENCHMARK(BM_ValueIteration)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
