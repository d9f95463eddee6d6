#pragma once

#include "vcsched/greedy.hpp"
#include "vcsched/metrics.hpp"
#include "vcsched/parallel_vi.hpp"
#include "vcsched/sim.hpp"
#include "vcsched/workload.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcsched {

/// Malformed or invalid input file.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file.
class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParsedInstance {
    VccModel vcc;
    std::vector<BagOfTasks> bots;
};

/// Instance file: '#' comments, blank lines ignored, then lines of
///   beta_vc <x> | beta_tc <x> | gamma_vc <x>
///   cloud <id> <vm_total> <vm_throughput_kbps> <v2i_delay_ms>
///   bot <id>
///   task <id> <vm_demand> <max_delay_ms> <min_vm_throughput_kbps>
/// Tasks attach to the most recently opened bot.
ParsedInstance parse_instance(std::istream& in);
ParsedInstance load_instance(const std::string& path);
std::string instance_text(const ParsedInstance& instance);

/// Scenario file: '#' comments and `key value` lines over the keys
///   n_vehicles sim_duration_ms si_ms gi_ms default_cchi_ms default_schi_ms
///   scheme bsm_rate_hz bsm_size_bits vc_rate_hz vc_size_bits data_rate_kbps
///   mac_efficiency mac_overhead_ms rng_seed
/// Unlisted keys are rejected; missing keys keep their defaults.
VanetScenario parse_scenario(std::istream& in, VanetScenario base = {});
VanetScenario load_scenario(const std::string& path);
std::string scenario_text(const VanetScenario& scenario);

std::string scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

/// Per-SI trace as CSV with the columns
/// si_index,cchi_ms,schi_ms,bsm_sent,bsm_queued,bsm_mean_delay_ms,vc_sent,vc_queued,vc_mean_delay_ms
std::string trace_csv(const SimTrace& trace);

struct SolverDiagnostics {
    double epsilon = 0.0;
    int sweeps = 0;
    std::size_t states_explored = 0;
};

/// Placement table plus a key/value summary block.
std::string schedule_csv(const ScheduleResult& result, const VccModel& vcc,
                         const std::optional<SolverDiagnostics>& diag = std::nullopt);
std::string schedule_json(const ScheduleResult& result, const VccModel& vcc,
                          const std::optional<SolverDiagnostics>& diag = std::nullopt);

std::string metrics_csv(const std::vector<MetricRow>& rows);
std::vector<MetricRow> parse_metrics_csv(const std::string& text);
std::string metrics_json(const std::vector<MetricRow>& rows);
std::vector<MetricRow> parse_metrics_json(const std::string& text);

std::string speedup_csv(const std::vector<SpeedupRow>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace vcsched
