#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vcsched::cli {

enum class Subcommand { kSimulate, kSchedule, kBenchmark, kSpeedup };

enum class SchedulerKind { kGreedy, kMdp, kMdpParallel };

struct RunConfig {
    Subcommand subcommand = Subcommand::kBenchmark;
    std::string instance_path;
    std::string scenario_path;
    std::optional<std::string> scheme; // "static1609" | "aaa"
    SchedulerKind scheduler = SchedulerKind::kGreedy;
    int workers = 1;
    std::optional<std::uint64_t> seed;
    double epsilon = 1e-6;
    std::size_t state_cap = 5'000'000;
    std::string out_path;
    std::string series_dir; // benchmark only; empty = skip
    std::string format = "csv";
};

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kCapExceeded = 3;
inline constexpr int kIoError = 4;

/// Executes one parsed configuration. Returns an exit code and reports
/// errors on stderr.
int run(const RunConfig& config);

/// Parses argv and runs. This is main() minus the argv plumbing.
int run_cli(const std::vector<std::string>& args);

} // namespace vcsched::cli
