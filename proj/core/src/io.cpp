#include "vcsched/io.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vcsched {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

bool skippable(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

[[noreturn]] void bad_line(int lineno, const std::string& line, const std::string& why) {
    throw ConfigError("line " + std::to_string(lineno) + ": " + why + " in '" + line + "'");
}

void reject_trailing(std::istringstream& ls, int lineno, const std::string& line) {
    std::string extra;
    if (ls >> extra) bad_line(lineno, line, "unexpected trailing field '" + extra + "'");
}

std::string target_name(int target) {
    return target == kPaidCloud ? "tcc" : "vc:" + std::to_string(target);
}

} // namespace

ParsedInstance parse_instance(std::istream& in) {
    ParsedInstance p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "beta_vc") {
            if (!(ls >> p.vcc.reward_per_vc_vm)) bad_line(lineno, line, "expected a value");
        } else if (kind == "beta_tc") {
            if (!(ls >> p.vcc.cost_per_tcc_vm)) bad_line(lineno, line, "expected a value");
        } else if (kind == "gamma_vc") {
            if (!(ls >> p.vcc.penalty_per_idle_vm)) bad_line(lineno, line, "expected a value");
        } else if (kind == "cloud") {
            VehicularCloud c;
            if (!(ls >> c.id >> c.vm_total >> c.vm_throughput_kbps >> c.v2i_delay_ms))
                bad_line(lineno, line, "expected: cloud <id> <vm_total> <thr> <delay>");
            c.vm_free = c.vm_total;
            p.vcc.clouds.push_back(c);
        } else if (kind == "bot") {
            BagOfTasks bot;
            if (!(ls >> bot.id)) bad_line(lineno, line, "expected: bot <id>");
            p.bots.push_back(std::move(bot));
        } else if (kind == "task") {
            if (p.bots.empty()) bad_line(lineno, line, "task before any bot");
            Task t;
            if (!(ls >> t.id >> t.vm_demand >> t.max_delay_ms >> t.min_vm_throughput_kbps))
                bad_line(lineno, line, "expected: task <id> <demand> <max_delay> <min_thr>");
            p.bots.back().tasks.push_back(t);
        } else {
            bad_line(lineno, line, "unknown directive '" + kind + "'");
        }
        reject_trailing(ls, lineno, line);
    }
    try {
        validate(p.vcc);
        validate(std::span<const BagOfTasks>(p.bots));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return p;
}

ParsedInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read instance file: " + path);
    return parse_instance(in);
}

std::string instance_text(const ParsedInstance& instance) {
    std::ostringstream out;
    out << "beta_vc " << fmt(instance.vcc.reward_per_vc_vm) << "\n";
    out << "beta_tc " << fmt(instance.vcc.cost_per_tcc_vm) << "\n";
    out << "gamma_vc " << fmt(instance.vcc.penalty_per_idle_vm) << "\n";
    for (const auto& c : instance.vcc.clouds)
        out << "cloud " << c.id << ' ' << c.vm_total << ' ' << fmt(c.vm_throughput_kbps) << ' '
            << fmt(c.v2i_delay_ms) << "\n";
    for (const auto& bot : instance.bots) {
        out << "bot " << bot.id << "\n";
        for (const auto& t : bot.tasks)
            out << "task " << t.id << ' ' << t.vm_demand << ' ' << fmt(t.max_delay_ms) << ' '
                << fmt(t.min_vm_throughput_kbps) << "\n";
    }
    return out.str();
}

std::string scheme_name(Scheme scheme) {
    return scheme == Scheme::kAaa ? "aaa" : "static1609";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "aaa") return Scheme::kAaa;
    if (name == "static1609") return Scheme::kStatic1609;
    throw ConfigError("unknown scheme '" + name + "' (expected static1609 or aaa)");
}

VanetScenario parse_scenario(std::istream& in, VanetScenario base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        std::istringstream ls(line);
        std::string key, value;
        if (!(ls >> key >> value)) bad_line(lineno, line, "expected 'key value'");
        try {
            if (key == "n_vehicles") base.n_vehicles = std::stoi(value);
            else if (key == "sim_duration_ms") base.sim_duration_ms = std::stoll(value);
            else if (key == "si_ms") base.interval.si_ms = std::stod(value);
            else if (key == "gi_ms") base.interval.gi_ms = std::stod(value);
            else if (key == "default_cchi_ms") base.interval.default_cchi_ms = std::stod(value);
            else if (key == "default_schi_ms") base.interval.default_schi_ms = std::stod(value);
            else if (key == "scheme") base.scheme = scheme_from_name(value);
            else if (key == "bsm_rate_hz") base.bsm_rate_hz = std::stod(value);
            else if (key == "bsm_size_bits") base.bsm_size_bits = std::stol(value);
            else if (key == "vc_rate_hz") base.vc_rate_hz = std::stod(value);
            else if (key == "vc_size_bits") base.vc_size_bits = std::stol(value);
            else if (key == "data_rate_kbps") base.data_rate_kbps = std::stod(value);
            else if (key == "mac_efficiency") base.mac_efficiency = std::stod(value);
            else if (key == "mac_overhead_ms") base.mac_overhead_ms = std::stod(value);
            else if (key == "rng_seed") base.rng_seed = std::stoull(value);
            else bad_line(lineno, line, "unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            bad_line(lineno, line, "malformed value '" + value + "'");
        } catch (const std::out_of_range&) {
            bad_line(lineno, line, "value out of range '" + value + "'");
        }
        reject_trailing(ls, lineno, line);
    }
    return base;
}

VanetScenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read scenario file: " + path);
    return parse_scenario(in);
}

std::string scenario_text(const VanetScenario& sc) {
    std::ostringstream out;
    out << "n_vehicles " << sc.n_vehicles << "\n"
        << "sim_duration_ms " << sc.sim_duration_ms << "\n"
        << "si_ms " << fmt(sc.interval.si_ms) << "\n"
        << "gi_ms " << fmt(sc.interval.gi_ms) << "\n"
        << "default_cchi_ms " << fmt(sc.interval.default_cchi_ms) << "\n"
        << "default_schi_ms " << fmt(sc.interval.default_schi_ms) << "\n"
        << "scheme " << scheme_name(sc.scheme) << "\n"
        << "bsm_rate_hz " << fmt(sc.bsm_rate_hz) << "\n"
        << "bsm_size_bits " << sc.bsm_size_bits << "\n"
        << "vc_rate_hz " << fmt(sc.vc_rate_hz) << "\n"
        << "vc_size_bits " << sc.vc_size_bits << "\n"
        << "data_rate_kbps " << fmt(sc.data_rate_kbps) << "\n"
        << "mac_efficiency " << fmt(sc.mac_efficiency) << "\n"
        << "mac_overhead_ms " << fmt(sc.mac_overhead_ms) << "\n"
        << "rng_seed " << sc.rng_seed << "\n";
    return out.str();
}

std::string trace_csv(const SimTrace& trace) {
    std::ostringstream out;
    out << "si_index,cchi_ms,schi_ms,bsm_sent,bsm_queued,bsm_mean_delay_ms,"
           "vc_sent,vc_queued,vc_mean_delay_ms\n";
    for (const auto& r : trace.intervals)
        out << r.si_index << ',' << fmt(r.cchi_ms) << ',' << fmt(r.schi_ms) << ',' << r.bsm_sent
            << ',' << r.bsm_queued << ',' << fmt(r.bsm_mean_delay_ms) << ',' << r.vc_sent << ','
            << r.vc_queued << ',' << fmt(r.vc_mean_delay_ms) << "\n";
    return out.str();
}

std::string schedule_csv(const ScheduleResult& result, const VccModel& vcc,
                         const std::optional<SolverDiagnostics>& diag) {
    std::ostringstream out;
    out << "task_id,target,vms_used\n";
    for (const auto& p : result.placements)
        out << p.task_id << ',' << target_name(p.target) << ',' << p.vms_used << "\n";
    const auto breakdown = reward_decomposition(result, vcc);
    out << "\n";
    out << "summary,key,value\n";
    out << "summary,vc_placed_vms," << result.vc_placed_vms() << "\n";
    out << "summary,paid_vms," << result.paid_vms << "\n";
    out << "summary,unused_vms," << result.unused_vms << "\n";
    out << "summary,total_reward," << fmt(breakdown.total) << "\n";
    if (diag) {
        out << "summary,epsilon," << fmt(diag->epsilon) << "\n";
        out << "summary,sweeps," << diag->sweeps << "\n";
        out << "summary,states_explored," << diag->states_explored << "\n";
    }
    return out.str();
}

std::string schedule_json(const ScheduleResult& result, const VccModel& vcc,
                          const std::optional<SolverDiagnostics>& diag) {
    json j;
    j["placements"] = json::array();
    for (const auto& p : result.placements)
        j["placements"].push_back(
            {{"task_id", p.task_id}, {"target", target_name(p.target)}, {"vms_used", p.vms_used}});
    const auto breakdown = reward_decomposition(result, vcc);
    j["summary"] = {{"vc_placed_vms", result.vc_placed_vms()},
                    {"paid_vms", result.paid_vms},
                    {"unused_vms", result.unused_vms},
                    {"total_reward", breakdown.total}};
    if (diag) {
        j["summary"]["epsilon"] = diag->epsilon;
        j["summary"]["sweeps"] = diag->sweeps;
        j["summary"]["states_explored"] = diag->states_explored;
    }
    return j.dump(2) + "\n";
}

namespace {
const char* kMetricsHeader =
    "scenario_id,scheme,scheduler,n_vehicles,vc_throughput_kbps,bsm_delay_ms,vc_delay_ms,"
    "cchi_ms,schi_ms,utilization_pct,reward,paid_vms,unused_vms";
}

std::string metrics_csv(const std::vector<MetricRow>& rows) {
    std::ostringstream out;
    out << kMetricsHeader << "\n";
    for (const auto& r : rows)
        out << r.scenario_id << ',' << r.scheme << ',' << r.scheduler << ',' << r.n_vehicles << ','
            << fmt(r.vc_throughput_kbps) << ',' << fmt(r.bsm_delay_ms) << ',' << fmt(r.vc_delay_ms)
            << ',' << fmt(r.cchi_ms) << ',' << fmt(r.schi_ms) << ',' << fmt4(r.utilization_pct)
            << ',' << fmt(r.reward) << ',' << r.paid_vms << ',' << r.unused_vms << "\n";
    return out.str();
}

std::vector<MetricRow> parse_metrics_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader)
        throw ConfigError("missing or unexpected metrics header");
    std::vector<MetricRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        std::istringstream ls(line);
        MetricRow r;
        std::string field;
        auto next = [&]() -> std::string {
            if (!std::getline(ls, field, ',')) bad_line(lineno, line, "missing field");
            return field;
        };
        try {
            r.scenario_id = next();
            r.scheme = next();
            r.scheduler = next();
            r.n_vehicles = std::stoi(next());
            r.vc_throughput_kbps = std::stod(next());
            r.bsm_delay_ms = std::stod(next());
            r.vc_delay_ms = std::stod(next());
            r.cchi_ms = std::stod(next());
            r.schi_ms = std::stod(next());
            r.utilization_pct = std::stod(next());
            r.reward = std::stod(next());
            r.paid_vms = std::stol(next());
            r.unused_vms = std::stol(next());
        } catch (const std::exception&) {
            bad_line(lineno, line, "malformed metric row");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string metrics_json(const std::vector<MetricRow>& rows) {
    json j = json::array();
    for (const auto& r : rows)
        j.push_back({{"scenario_id", r.scenario_id},
                     {"scheme", r.scheme},
                     {"scheduler", r.scheduler},
                     {"n_vehicles", r.n_vehicles},
                     {"vc_throughput_kbps", r.vc_throughput_kbps},
                     {"bsm_delay_ms", r.bsm_delay_ms},
                     {"vc_delay_ms", r.vc_delay_ms},
                     {"cchi_ms", r.cchi_ms},
                     {"schi_ms", r.schi_ms},
                     {"utilization_pct", r.utilization_pct},
                     {"reward", r.reward},
                     {"paid_vms", r.paid_vms},
                     {"unused_vms", r.unused_vms}});
    return j.dump(2) + "\n";
}

std::vector<MetricRow> parse_metrics_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("bad metrics json: ") + e.what());
    }
    std::vector<MetricRow> rows;
    for (const auto& item : j) {
        MetricRow r;
        try {
            r.scenario_id = item.at("scenario_id").get<std::string>();
            r.scheme = item.at("scheme").get<std::string>();
            r.scheduler = item.at("scheduler").get<std::string>();
            r.n_vehicles = item.at("n_vehicles").get<int>();
            r.vc_throughput_kbps = item.at("vc_throughput_kbps").get<double>();
            r.bsm_delay_ms = item.at("bsm_delay_ms").get<double>();
            r.vc_delay_ms = item.at("vc_delay_ms").get<double>();
            r.cchi_ms = item.at("cchi_ms").get<double>();
            r.schi_ms = item.at("schi_ms").get<double>();
            r.utilization_pct = item.at("utilization_pct").get<double>();
            r.reward = item.at("reward").get<double>();
            r.paid_vms = item.at("paid_vms").get<long>();
            r.unused_vms = item.at("unused_vms").get<long>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad metric row: ") + e.what());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string speedup_csv(const std::vector<SpeedupRow>& rows) {
    std::ostringstream out;
    out << "workers,wall_ms,speedup_vs_one\n";
    for (const auto& r : rows)
        out << r.workers << ',' << fmt(r.wall_ms) << ',' << fmt(r.speedup_vs_one) << "\n";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

} // namespace vcsched
