// Acceptance suite: runs every contract criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits non-zero if any fails.

#include "testutil.hpp"
#include "vcsched/greedy.hpp"
#include "vcsched/io.hpp"
#include "vcsched/mdp.hpp"
#include "vcsched/metrics.hpp"
#include "vcsched/parallel_vi.hpp"
#include "vcsched/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace vcsched;
using Clock = std::chrono::steady_clock;

#ifndef VCSCHED_DATA_DIR
#define VCSCHED_DATA_DIR "data"
#endif

namespace {

int failures = 0;

void criterion(int number, const std::string& label, const std::function<void()>& body) {
    try {
        body();
        std::cout << "[PASS] criterion " << number << ": " << label << "\n";
    } catch (const std::exception& e) {
        ++failures;
        std::cout << "[FAIL] criterion " << number << ": " << label << " -- " << e.what() << "\n";
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

void require_close(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
        throw std::runtime_error(msg.str());
    }
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::string kInstancePath = std::string(VCSCHED_DATA_DIR) + "/canonical_instance.txt";
constexpr int kDensities[] = {5, 7, 10, 15, 20, 25, 28, 35, 40, 42, 45};
constexpr std::int64_t kSweepDurationMs = 10'000;
constexpr std::uint64_t kSweepSeed = 42;

SimTrace density_trace(int n, Scheme scheme) {
    VanetScenario sc;
    sc.n_vehicles = n;
    sc.sim_duration_ms = kSweepDurationMs;
    sc.scheme = scheme;
    sc.rng_seed = kSweepSeed;
    return run_simulation(sc);
}

} // namespace

int main() {
    ParsedInstance canon = load_instance(kInstancePath);
    MdpInstance canon_mdp = MdpInstance::from_workload(canon.vcc, canon.bots);
    ScheduleResult mdp_rolled;

    criterion(1, "canonical benchmark rewards (greedy 116, optimal 202.4, < 10 s)", [&] {
        const auto start = Clock::now();
        const auto g = greedy_schedule(canon.vcc, canon.bots);
        const auto vi = value_iteration(canon_mdp);
        mdp_rolled = rollout(vi.policy, canon_mdp);
        const double elapsed = seconds_since(start);

        require_close(greedy_reward(g, canon.vcc), 116.0, 1e-9, "greedy total reward");
        require_close(vi.values.initial_value(), 202.4, 1e-9, "optimal total reward");
        require_close(greedy_reward(mdp_rolled, canon.vcc), 202.4, 1e-9, "rolled-out reward");
        require(g.paid_vms == 85, "greedy paid VMs != 85");
        require(g.unused_vms == 27, "greedy unused VMs != 27");
        require(mdp_rolled.paid_vms == 58, "mdp paid VMs != 58");
        require(mdp_rolled.unused_vms == 0, "mdp unused VMs != 0");
        require(elapsed < 10.0, "benchmark exceeded 10 s");
    });

    criterion(2, "mdp utilization is exactly 100% on every cloud", [&] {
        require(!mdp_rolled.placements.empty(), "criterion 1 must run first");
        const auto util = utilization(mdp_rolled, canon.vcc);
        for (const auto& [id, pct] : util.per_cloud)
            require(pct == 100.0, "cloud " + std::to_string(id) + " below 100%");
        require(util.overall_pct == 100.0, "overall utilization below 100%");
    });

    criterion(3, "optimality oracle on 200 small instances (exact, < 30 s)", [] {
        const auto start = Clock::now();
        std::mt19937_64 rng(1001);
        for (int trial = 0; trial < 200; ++trial) {
            const auto r = testutil::random_instance(rng, {3, 6, 8, 3});
            const auto inst = MdpInstance::from_workload(r.vcc, r.bots);
            const auto vi = value_iteration(inst);
            require_close(vi.values.initial_value(), testutil::brute_force_optimum(inst), 1e-9,
                          "instance " + std::to_string(trial));
        }
        require(seconds_since(start) < 30.0, "oracle run exceeded 30 s");
    });

    criterion(4, "optimal value dominates greedy on 100 larger instances", [] {
        std::mt19937_64 rng(2002);
        for (int trial = 0; trial < 100; ++trial) {
            const auto r = testutil::random_instance(rng, {6, 5, 50, 3});
            const auto inst = MdpInstance::from_workload(r.vcc, r.bots);
            const auto vi = value_iteration(inst);
            const double g = greedy_reward(greedy_schedule(r.vcc, r.bots), r.vcc);
            require(vi.values.initial_value() >= g - 1e-9,
                    "greedy beat the solver on instance " + std::to_string(trial));
        }
    });

    criterion(5, "block-parallel solver is bit-identical for 1/2/4/8 workers", [] {
        std::mt19937_64 rng(3003);
        for (int trial = 0; trial < 50; ++trial) {
            const auto r = testutil::random_instance(rng, {4, 5, 25, 3});
            const auto inst = MdpInstance::from_workload(r.vcc, r.bots);
            const auto seq = value_iteration(inst);
            for (const int workers : {1, 2, 4, 8}) {
                const auto par = parallel_value_iteration(inst, {}, workers);
                require(par.values.raw_values().size() == seq.values.raw_values().size(),
                        "state counts differ");
                require(std::memcmp(par.values.raw_values().data(),
                                    seq.values.raw_values().data(),
                                    seq.values.raw_values().size() * sizeof(double)) == 0,
                        "value tables differ at " + std::to_string(workers) + " workers");
                require(std::memcmp(par.policy.raw_actions().data(),
                                    seq.policy.raw_actions().data(),
                                    seq.policy.raw_actions().size() * sizeof(std::int32_t)) == 0,
                        "policies differ at " + std::to_string(workers) + " workers");
                require(par.values.sweeps() == seq.values.sweeps(), "sweep counts differ");
            }
        }
    });

    criterion(6, "interval budget conserved; saturation collapses to the static split", [] {
        for (const int n : kDensities) {
            const auto trace = density_trace(n, Scheme::kAaa);
            for (const auto& row : trace.intervals) {
                require(std::abs(row.cchi_ms + row.schi_ms - 100.0) <= 1e-3,
                        "budget off by more than 1 us at n=" + std::to_string(n));
                if (row.effective_cch_use_ms >= 50.0)
                    require(row.cchi_ms == 50.0 && row.schi_ms == 50.0,
                            "saturated interval not at the static split");
            }
        }
    });

    criterion(7, "service throughput: adaptive >= static, strict at low density, equal at "
                 "saturation",
              [] {
                  bool strict_low = false;
                  double aaa_max = 0.0, static_max = 0.0;
                  for (const int n : kDensities) {
                      const double stat = vc_throughput(density_trace(n, Scheme::kStatic1609));
                      const double aaa = vc_throughput(density_trace(n, Scheme::kAaa));
                      require(aaa >= stat, "static beat adaptive at n=" + std::to_string(n));
                      if (n < 25 && aaa > stat) strict_low = true;
                      if (n == 45) {
                          aaa_max = aaa;
                          static_max = stat;
                      }
                  }
                  require(strict_low, "no strict improvement at any low-density point");
                  require(aaa_max == static_max,
                          "throughput differs at the saturation density point");
              });

    criterion(8, "conservation, discipline and capacity on 1000 scenarios (< 60 s)", [] {
        const auto start = Clock::now();
        std::mt19937_64 rng(4004);
        for (int trial = 0; trial < 1000; ++trial) {
            VanetScenario sc;
            sc.n_vehicles = std::uniform_int_distribution<int>(1, 25)(rng);
            sc.sim_duration_ms = 100 * std::uniform_int_distribution<int>(1, 10)(rng);
            sc.scheme = rng() % 2 ? Scheme::kAaa : Scheme::kStatic1609;
            sc.bsm_rate_hz = std::uniform_int_distribution<int>(0, 20)(rng);
            sc.vc_rate_hz = std::uniform_int_distribution<int>(0, 20)(rng);
            sc.bsm_size_bits = 400 * std::uniform_int_distribution<int>(1, 8)(rng);
            sc.vc_size_bits = 2000 * std::uniform_int_distribution<int>(1, 8)(rng);
            sc.mac_efficiency = std::uniform_real_distribution<double>(0.3, 1.0)(rng);
            sc.mac_overhead_ms = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
            sc.rng_seed = rng();
            const auto trace = run_simulation(sc);

            const long bsm_per_si = bsm_generated_per_si(sc.bsm_rate_hz, sc.interval.si_ms);
            const long vc_per_si = bsm_generated_per_si(sc.vc_rate_hz, sc.interval.si_ms);
            const std::int64_t si_us = std::llround(sc.interval.si_ms * 1000.0);
            const std::int64_t gi_us = std::llround(sc.interval.gi_ms * 1000.0);
            const double payload_rate = sc.data_rate_kbps * sc.mac_efficiency;

            long bsm_cum = 0, vc_cum = 0;
            for (const auto& row : trace.intervals) {
                bsm_cum += row.bsm_sent;
                vc_cum += row.vc_sent;
                require((row.si_index + 1) * bsm_per_si * sc.n_vehicles ==
                            bsm_cum + row.bsm_queued,
                        "beacon conservation broke");
                require((row.si_index + 1) * vc_per_si * sc.n_vehicles == vc_cum + row.vc_queued,
                        "service packet conservation broke");
            }
            for (const auto& row : trace.intervals) {
                const std::int64_t begin = static_cast<std::int64_t>(row.si_index) * si_us;
                const std::int64_t cchi = std::llround(row.cchi_ms * 1000.0);
                double cch_bits = 0.0, sch_bits = 0.0;
                for (const auto& p : trace.packets) {
                    if (!p.delivered() || p.delivered_at_us <= begin ||
                        p.delivered_at_us > begin + si_us)
                        continue;
                    if (p.kind == PacketKind::kBsm) {
                        require(p.delivered_at_us > begin + gi_us &&
                                    p.delivered_at_us <= begin + cchi,
                                "beacon delivered outside its control interval");
                        cch_bits += static_cast<double>(sc.bsm_size_bits);
                    } else {
                        require(p.delivered_at_us > begin + cchi + gi_us,
                                "service packet delivered outside its service interval");
                        sch_bits += static_cast<double>(sc.vc_size_bits);
                    }
                }
                require(cch_bits <=
                            payload_rate * std::max(0.0, row.cchi_ms - sc.interval.gi_ms) + 1e-9,
                        "control-channel capacity exceeded");
                require(sch_bits <=
                            payload_rate * std::max(0.0, row.schi_ms - sc.interval.gi_ms) + 1e-9,
                        "service-channel capacity exceeded");
            }
        }
        require(seconds_since(start) < 60.0, "property suite exceeded 60 s");
    });

    criterion(9, "migration drop fraction: 1 at t=0, 0 once drained, non-increasing", [] {
        MigrationScenario m;
        m.vm_total_size_kbits = 500.0;
        m.vc_throughput_kbps = 2880.0;
        m.n_vehicles = 25; // 115.2 kbps per-vehicle share
        require(dropped_vm_fraction(m, 0.0) == 1.0, "fraction at t=0 is not 1");
        const double drain_s = 500.0 / per_vehicle_throughput(m.vc_throughput_kbps, m.n_vehicles);
        require(dropped_vm_fraction(m, drain_s) <= 1e-12, "fraction not 0 once drained");
        require(dropped_vm_fraction(m, drain_s + 1.0) == 0.0, "fraction negative after drain");
        double prev = 1.0;
        for (double t = 0.0; t <= drain_s + 2.0; t += 0.1) {
            const double f = dropped_vm_fraction(m, t);
            require(f <= prev + 1e-15, "fraction increased in t");
            prev = f;
        }
    });

    // Informational: the block-parallel timing table (no pass/fail threshold).
    {
        const int counts[] = {1, 2, 4, 8};
        const auto rows = measure_speedup(canon_mdp, counts);
        std::cout << "[info] speedup (informational, hardware-dependent):";
        for (const auto& r : rows)
            std::cout << "  " << r.workers << "w " << r.wall_ms << "ms x" << r.speedup_vs_one;
        std::cout << "\n";
    }

    if (failures == 0) {
        std::cout << "acceptance: all criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << failures << " criterion(s) failed\n";
    return 1;
}
