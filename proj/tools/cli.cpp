#include "cli.hpp"

#include "vcsched/io.hpp"
#include "vcsched/mdp.hpp"
#include "vcsched/metrics.hpp"
#include "vcsched/parallel_vi.hpp"
#include "vcsched/sim.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

namespace vcsched::cli {

namespace {

constexpr int kBenchmarkDensities[] = {5, 7, 10, 15, 20, 25, 28, 35, 40, 42, 45};
constexpr std::int64_t kBenchmarkDurationMs = 10'000;

std::string scheduler_name(SchedulerKind kind) {
    switch (kind) {
    case SchedulerKind::kGreedy: return "greedy";
    case SchedulerKind::kMdp: return "mdp";
    case SchedulerKind::kMdpParallel: return "mdp-parallel";
    }
    return "greedy";
}

SchedulerKind scheduler_from_name(const std::string& name) {
    if (name == "greedy") return SchedulerKind::kGreedy;
    if (name == "mdp") return SchedulerKind::kMdp;
    if (name == "mdp-parallel") return SchedulerKind::kMdpParallel;
    throw ConfigError("unknown scheduler '" + name + "'");
}

struct SchedulerOutcome {
    ScheduleResult result;
    std::optional<SolverDiagnostics> diag;
};

SchedulerOutcome run_scheduler(const RunConfig& cfg, const ParsedInstance& instance,
                               SchedulerKind kind) {
    SchedulerOutcome out;
    if (kind == SchedulerKind::kGreedy) {
        out.result = greedy_schedule(instance.vcc, instance.bots);
        return out;
    }
    const auto mdp = MdpInstance::from_workload(instance.vcc, instance.bots);
    ViOptions options;
    options.epsilon = cfg.epsilon;
    options.state_cap = cfg.state_cap;
    const ViResult vi = kind == SchedulerKind::kMdp
                            ? value_iteration(mdp, options)
                            : parallel_value_iteration(mdp, options, cfg.workers);
    out.result = rollout(vi.policy, mdp);
    out.diag = SolverDiagnostics{vi.values.epsilon(), vi.values.sweeps(),
                                 vi.values.states_explored()};
    return out;
}

int run_simulate(const RunConfig& cfg) {
    VanetScenario scenario = load_scenario(cfg.scenario_path);
    if (cfg.scheme) scenario.scheme = scheme_from_name(*cfg.scheme);
    if (cfg.seed) scenario.rng_seed = *cfg.seed;
    const SimTrace trace = run_simulation(scenario);
    if (!cfg.out_path.empty()) write_file(cfg.out_path, trace_csv(trace));
    std::cout << "scheme=" << scheme_name(scenario.scheme) << " n_vehicles=" << scenario.n_vehicles
              << " vc_throughput_kbps=" << vc_throughput(trace)
              << " bsm_mean_delay_ms=" << bsm_mean_delay(trace)
              << " vc_mean_delay_ms=" << vc_mean_delay(trace) << "\n";
    return kOk;
}

int run_schedule(const RunConfig& cfg) {
    const ParsedInstance instance = load_instance(cfg.instance_path);
    const auto outcome = run_scheduler(cfg, instance, cfg.scheduler);
    const auto breakdown = reward_decomposition(outcome.result, instance.vcc);
    if (!cfg.out_path.empty()) {
        const std::string text = cfg.format == "json"
                                     ? schedule_json(outcome.result, instance.vcc, outcome.diag)
                                     : schedule_csv(outcome.result, instance.vcc, outcome.diag);
        write_file(cfg.out_path, text);
    }
    std::cout << "scheduler=" << scheduler_name(cfg.scheduler)
              << " vc_placed=" << outcome.result.vc_placed_vms()
              << " paid=" << outcome.result.paid_vms << " unused=" << outcome.result.unused_vms
              << " total_reward=" << breakdown.total << "\n";
    if (outcome.diag)
        std::cout << "epsilon=" << outcome.diag->epsilon << " sweeps=" << outcome.diag->sweeps
                  << " states_explored=" << outcome.diag->states_explored << "\n";
    return kOk;
}

void write_series(const std::string& dir, const std::vector<MetricRow>& rows, const VccModel& vcc,
                  const UtilizationReport& greedy_util, const UtilizationReport& mdp_util) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto path = [&](const std::string& name) { return (fs::path(dir) / name).string(); };

    for (const std::string scheme : {"static1609", "aaa"}) {
        std::ostringstream thr, bsm, vcd, intervals;
        thr << "n_vehicles,vc_throughput_kbps\n";
        bsm << "n_vehicles,bsm_delay_ms\n";
        vcd << "n_vehicles,vc_delay_ms\n";
        intervals << "n_vehicles,cchi_ms,schi_ms\n";
        for (const auto& r : rows) {
            if (r.scheme != scheme || r.scheduler != "greedy") continue;
            thr << r.n_vehicles << ',' << r.vc_throughput_kbps << "\n";
            bsm << r.n_vehicles << ',' << r.bsm_delay_ms << "\n";
            vcd << r.n_vehicles << ',' << r.vc_delay_ms << "\n";
            intervals << r.n_vehicles << ',' << r.cchi_ms << ',' << r.schi_ms << "\n";
        }
        write_file(path("vc_throughput_vs_vehicles_" + scheme + ".csv"), thr.str());
        write_file(path("bsm_delay_vs_vehicles_" + scheme + ".csv"), bsm.str());
        write_file(path("vc_delay_vs_vehicles_" + scheme + ".csv"), vcd.str());
        write_file(path("intervals_vs_vehicles_" + scheme + ".csv"), intervals.str());
    }
    for (const auto& [sched, util] :
         {std::pair<std::string, const UtilizationReport*>{"greedy", &greedy_util},
          {"mdp", &mdp_util}}) {
        std::ostringstream out;
        out << "cloud_id,vm_total,utilization_pct\n";
        for (std::size_t i = 0; i < util->per_cloud.size(); ++i)
            out << util->per_cloud[i].first << ',' << vcc.clouds[i].vm_total << ','
                << util->per_cloud[i].second << "\n";
        write_file(path("utilization_per_cloud_" + sched + ".csv"), out.str());
    }
}

int run_benchmark(const RunConfig& cfg) {
    const ParsedInstance instance = load_instance(cfg.instance_path);
    VanetScenario base;
    base.sim_duration_ms = kBenchmarkDurationMs;
    if (!cfg.scenario_path.empty()) base = load_scenario(cfg.scenario_path);
    if (cfg.seed) base.rng_seed = *cfg.seed;

    const auto greedy = run_scheduler(cfg, instance, SchedulerKind::kGreedy);
    const auto mdp = run_scheduler(cfg, instance, SchedulerKind::kMdp);
    const double greedy_total = reward_decomposition(greedy.result, instance.vcc).total;
    const double mdp_total = reward_decomposition(mdp.result, instance.vcc).total;
    const auto greedy_util = utilization(greedy.result, instance.vcc);
    const auto mdp_util = utilization(mdp.result, instance.vcc);

    std::vector<MetricRow> rows;
    for (const int n : kBenchmarkDensities) {
        for (const Scheme scheme : {Scheme::kStatic1609, Scheme::kAaa}) {
            VanetScenario scenario = base;
            scenario.n_vehicles = n;
            scenario.scheme = scheme;
            const SimTrace trace = run_simulation(scenario);
            double cchi_mean = 0.0, schi_mean = 0.0;
            for (const auto& r : trace.intervals) {
                cchi_mean += r.cchi_ms;
                schi_mean += r.schi_ms;
            }
            if (!trace.intervals.empty()) {
                cchi_mean /= static_cast<double>(trace.intervals.size());
                schi_mean /= static_cast<double>(trace.intervals.size());
            }
            for (const SchedulerKind sched : {SchedulerKind::kGreedy, SchedulerKind::kMdp}) {
                const bool is_greedy = sched == SchedulerKind::kGreedy;
                MetricRow row;
                row.scenario_id = "n" + std::to_string(n);
                row.scheme = scheme_name(scheme);
                row.scheduler = scheduler_name(sched);
                row.n_vehicles = n;
                row.vc_throughput_kbps = vc_throughput(trace);
                row.bsm_delay_ms = bsm_mean_delay(trace);
                row.vc_delay_ms = vc_mean_delay(trace);
                row.cchi_ms = cchi_mean;
                row.schi_ms = schi_mean;
                row.utilization_pct =
                    is_greedy ? greedy_util.overall_pct : mdp_util.overall_pct;
                row.reward = is_greedy ? greedy_total : mdp_total;
                row.paid_vms = is_greedy ? greedy.result.paid_vms : mdp.result.paid_vms;
                row.unused_vms = is_greedy ? greedy.result.unused_vms : mdp.result.unused_vms;
                rows.push_back(std::move(row));
            }
        }
    }

    if (!cfg.out_path.empty())
        write_file(cfg.out_path, cfg.format == "json" ? metrics_json(rows) : metrics_csv(rows));
    if (!cfg.series_dir.empty())
        write_series(cfg.series_dir, rows, instance.vcc, greedy_util, mdp_util);

    std::cout << "greedy_total_reward=" << greedy_total << " greedy_paid=" << greedy.result.paid_vms
              << " greedy_unused=" << greedy.result.unused_vms << "\n";
    std::cout << "mdp_total_reward=" << mdp_total << " mdp_paid=" << mdp.result.paid_vms
              << " mdp_unused=" << mdp.result.unused_vms << "\n";
    if (mdp.diag)
        std::cout << "mdp_sweeps=" << mdp.diag->sweeps
                  << " mdp_states_explored=" << mdp.diag->states_explored << "\n";
    return kOk;
}

int run_speedup(const RunConfig& cfg) {
    const ParsedInstance instance = load_instance(cfg.instance_path);
    const auto mdp = MdpInstance::from_workload(instance.vcc, instance.bots);
    ViOptions options;
    options.epsilon = cfg.epsilon;
    options.state_cap = cfg.state_cap;
    std::vector<int> counts = {1, 2, 4, 8};
    if (cfg.workers > 1) counts = {1, cfg.workers};
    const auto rows = measure_speedup(mdp, counts, options);
    const std::string text = speedup_csv(rows);
    if (!cfg.out_path.empty()) write_file(cfg.out_path, text);
    std::cout << text;
    return kOk;
}

} // namespace

int run(const RunConfig& config) {
    try {
        switch (config.subcommand) {
        case Subcommand::kSimulate: return run_simulate(config);
        case Subcommand::kSchedule: return run_schedule(config);
        case Subcommand::kBenchmark: return run_benchmark(config);
        case Subcommand::kSpeedup: return run_speedup(config);
        }
        return kConfigError;
    } catch (const StateCapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Vehicular cloud scheduling toolkit: DSRC interval simulation and "
                 "bag-of-tasks placement"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string scheme, scheduler = "greedy";
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_path, "output file path");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option_function<std::uint64_t>(
               "--seed", [&](std::uint64_t v) { seed = v; seed_set = true; },
               "simulation seed");
    };

    auto* simulate = app.add_subcommand("simulate", "run one channel-switching simulation");
    simulate->add_option("--scenario", cfg.scenario_path, "scenario file")->required();
    simulate->add_option("--scheme", scheme, "static1609 or aaa");
    add_common(simulate);

    auto* schedule = app.add_subcommand("schedule", "place one instance's bags of tasks");
    schedule->add_option("--instance", cfg.instance_path, "instance file")->required();
    schedule->add_option("--scheduler", scheduler, "greedy, mdp or mdp-parallel");
    schedule->add_option("--workers", cfg.workers, "worker threads for mdp-parallel");
    schedule->add_option("--epsilon", cfg.epsilon, "value-iteration convergence threshold");
    schedule->add_option("--state-cap", cfg.state_cap, "reachable state cap");
    add_common(schedule);

    auto* benchmark = app.add_subcommand("benchmark", "full scheduler + channel-scheme sweep");
    benchmark->add_option("--instance", cfg.instance_path, "instance file")->required();
    benchmark->add_option("--scenario", cfg.scenario_path, "base scenario file");
    benchmark->add_option("--epsilon", cfg.epsilon, "value-iteration convergence threshold");
    benchmark->add_option("--state-cap", cfg.state_cap, "reachable state cap");
    benchmark->add_option("--series", cfg.series_dir, "directory for per-figure (x,y) series");
    add_common(benchmark);

    auto* speedup = app.add_subcommand("speedup", "time the parallel solver per worker count");
    speedup->add_option("--instance", cfg.instance_path, "instance file")->required();
    speedup->add_option("--workers", cfg.workers, "largest worker count to time");
    speedup->add_option("--epsilon", cfg.epsilon, "value-iteration convergence threshold");
    add_common(speedup);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    if (simulate->parsed()) cfg.subcommand = Subcommand::kSimulate;
    if (schedule->parsed()) cfg.subcommand = Subcommand::kSchedule;
    if (benchmark->parsed()) cfg.subcommand = Subcommand::kBenchmark;
    if (speedup->parsed()) cfg.subcommand = Subcommand::kSpeedup;
    if (!scheme.empty()) cfg.scheme = scheme;
    if (seed_set) cfg.seed = seed;
    try {
        cfg.scheduler = scheduler_from_name(scheduler);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return run(cfg);
}

} // namespace vcsched::cli
