#include "vcsched/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace vcsched {

namespace {

void validate(const VanetScenario& sc) {
    if (sc.n_vehicles < 1) throw std::invalid_argument("scenario needs at least one vehicle");
    if (sc.sim_duration_ms < static_cast<std::int64_t>(sc.interval.si_ms))
        throw std::invalid_argument("sim_duration shorter than one synchronization interval");
    if (sc.bsm_rate_hz < 0 || sc.vc_rate_hz < 0)
        throw std::invalid_argument("packet rates must be non-negative");
    if (sc.bsm_size_bits <= 0 || sc.vc_size_bits <= 0)
        throw std::invalid_argument("packet sizes must be positive");
    if (sc.data_rate_kbps <= 0) throw std::invalid_argument("data rate must be positive");
    if (sc.mac_efficiency <= 0 || sc.mac_efficiency > 1)
        throw std::invalid_argument("mac_efficiency must lie in (0, 1]");
    if (sc.mac_overhead_ms < 0) throw std::invalid_argument("mac_overhead must be non-negative");
    if (sc.interval.gi_ms < 0 || sc.interval.si_ms <= 0 ||
        std::abs(sc.interval.default_cchi_ms + sc.interval.default_schi_ms - sc.interval.si_ms) >
            1e-9)
        throw std::invalid_argument("interval config must satisfy cchi + schi = si");
}

std::int64_t to_us(double ms) { return std::llround(ms * 1000.0); }

struct ServeStats {
    long delivered = 0;
    double delay_sum_ms = 0.0;
    std::vector<long> delivered_per_vehicle;
    std::vector<double> delay_sum_per_vehicle;
};

// Serves the per-vehicle FIFO queues round-robin inside one channel window.
// A packet occupies airtime = size/(rate*efficiency) + overhead and must
// finish before the window closes. Transmission is disabled during the
// leading guard interval.
ServeStats serve_window(std::vector<std::deque<std::size_t>>& queues,
                         std::vector<PacketEvent>& packets, std::int64_t window_begin_us,
                         std::int64_t window_end_us, std::int64_t gi_us,
                         std::int64_t airtime_us, std::size_t start_vehicle) {
    ServeStats stats;
    const std::size_t n = queues.size();
    stats.delivered_per_vehicle.assign(n, 0);
    stats.delay_sum_per_vehicle.assign(n, 0.0);
    std::int64_t now = window_begin_us + gi_us;
    if (now >= window_end_us) return stats;

    bool any = true;
    while (any) {
        any = false;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t v = (start_vehicle + k) % n;
            if (queues[v].empty()) continue;
            if (now + airtime_us > window_end_us) return stats;
            const std::size_t pkt = queues[v].front();
            queues[v].pop_front();
            now += airtime_us;
            packets[pkt].delivered_at_us = now;
            const double delay = packets[pkt].delay_ms();
            ++stats.delivered;
            stats.delay_sum_ms += delay;
            ++stats.delivered_per_vehicle[v];
            stats.delay_sum_per_vehicle[v] += delay;
            any = true;
        }
    }
    return stats;
}

} // namespace

SimTrace run_simulation(const VanetScenario& sc) {
    validate(sc);
    SimTrace trace;
    trace.scenario = sc;

    const std::size_t n = static_cast<std::size_t>(sc.n_vehicles);
    const std::int64_t si_us = to_us(sc.interval.si_ms);
    const std::int64_t gi_us = to_us(sc.interval.gi_ms);
    const int n_sync = static_cast<int>(sc.sim_duration_ms / static_cast<std::int64_t>(sc.interval.si_ms));

    const double payload_rate = sc.data_rate_kbps * sc.mac_efficiency; // bits per ms
    // Every packet occupies at least one clock tick.
    const std::int64_t bsm_airtime_us = std::max<std::int64_t>(
        1, to_us(static_cast<double>(sc.bsm_size_bits) / payload_rate + sc.mac_overhead_ms));
    const std::int64_t vc_airtime_us = std::max<std::int64_t>(
        1, to_us(static_cast<double>(sc.vc_size_bits) / payload_rate + sc.mac_overhead_ms));

    const long bsm_per_si = bsm_generated_per_si(sc.bsm_rate_hz, sc.interval.si_ms);
    const long vc_per_si = bsm_generated_per_si(sc.vc_rate_hz, sc.interval.si_ms);

    std::vector<std::deque<std::size_t>> bsm_queues(n), vc_queues(n);
    std::mt19937_64 rng(sc.rng_seed);
    AaaController controller(sc.interval);

    IntervalState state = adapt_intervals(sc.interval, sc.interval.default_cchi_ms);

    for (int si = 0; si < n_sync; ++si) {
        const std::int64_t si_start = static_cast<std::int64_t>(si) * si_us;
        const IntervalState in_force =
            sc.scheme == Scheme::kAaa ? state
                                      : adapt_intervals(sc.interval, sc.interval.default_cchi_ms);
        // Quantize to the microsecond clock; schi picks up the remainder so
        // the SI budget is conserved exactly.
        const std::int64_t cchi_us = std::clamp<std::int64_t>(to_us(in_force.cchi_ms), 0, si_us);
        const std::int64_t schi_us = si_us - cchi_us;

        // Safety beacons become ready at the guard interval opening the SI.
        for (std::size_t v = 0; v < n; ++v) {
            for (long p = 0; p < bsm_per_si; ++p) {
                bsm_queues[v].push_back(trace.packets.size());
                trace.packets.push_back({PacketKind::kBsm, static_cast<int>(v), si_start, kPending});
            }
        }
        const auto cch = serve_window(bsm_queues, trace.packets, si_start, si_start + cchi_us,
                                      gi_us, bsm_airtime_us,
                                      static_cast<std::size_t>(rng() % n));

        // Service packets become ready when the service interval opens.
        const std::int64_t sch_start = si_start + cchi_us;
        for (std::size_t v = 0; v < n; ++v) {
            for (long p = 0; p < vc_per_si; ++p) {
                vc_queues[v].push_back(trace.packets.size());
                trace.packets.push_back({PacketKind::kVc, static_cast<int>(v), sch_start, kPending});
            }
        }
        const auto sch = serve_window(vc_queues, trace.packets, sch_start, si_start + si_us,
                                      gi_us, vc_airtime_us,
                                      static_cast<std::size_t>(rng() % n));

        SiRow row;
        row.si_index = si;
        row.cchi_ms = cchi_us / 1000.0;
        row.schi_ms = schi_us / 1000.0;
        row.inactivity_ms = in_force.inactivity_ms;
        row.effective_cch_use_ms = in_force.effective_cch_use_ms;
        row.bsm_sent = cch.delivered;
        row.bsm_mean_delay_ms = cch.delivered > 0 ? cch.delay_sum_ms / cch.delivered : 0.0;
        row.vc_sent = sch.delivered;
        row.vc_mean_delay_ms = sch.delivered > 0 ? sch.delay_sum_ms / sch.delivered : 0.0;
        long bsm_backlog = 0, vc_backlog = 0;
        std::vector<VehicleSiSample> samples(n);
        for (std::size_t v = 0; v < n; ++v) {
            const long queued = static_cast<long>(bsm_queues[v].size());
            bsm_backlog += queued;
            vc_backlog += static_cast<long>(vc_queues[v].size());
            row.bsm_queue_per_vehicle.push_back(queued);
            row.vc_queue_per_vehicle.push_back(static_cast<long>(vc_queues[v].size()));
            samples[v].generated = static_cast<int>(bsm_per_si);
            samples[v].queued = static_cast<int>(queued);
            samples[v].sent = static_cast<int>(sent_per_si(bsm_per_si, queued));
            samples[v].received = static_cast<int>(cch.delivered_per_vehicle[v]);
            samples[v].delay_sum_ms = cch.delay_sum_per_vehicle[v];
        }
        row.bsm_queued = bsm_backlog;
        row.vc_queued = vc_backlog;
        trace.intervals.push_back(std::move(row));

        if (sc.scheme == Scheme::kAaa)
            state = controller.on_si_complete(samples, bsm_backlog > 0);
    }
    return trace;
}

double vc_throughput(const SimTrace& trace) {
    double bits = 0.0;
    for (const auto& p : trace.packets)
        if (p.kind == PacketKind::kVc && p.delivered()) bits += trace.scenario.vc_size_bits;
    return bits / static_cast<double>(trace.scenario.sim_duration_ms); // bits/ms == kbps
}

namespace {
double mean_delay(const SimTrace& trace, PacketKind kind) {
    double sum = 0.0;
    long count = 0;
    for (const auto& p : trace.packets) {
        if (p.kind == kind && p.delivered()) {
            sum += p.delay_ms();
            ++count;
        }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}
} // namespace

double bsm_mean_delay(const SimTrace& trace) { return mean_delay(trace, PacketKind::kBsm); }
double vc_mean_delay(const SimTrace& trace) { return mean_delay(trace, PacketKind::kVc); }

double dropped_vm_fraction(const MigrationScenario& m, double t_s) {
    if (m.n_vehicles < 1) throw std::invalid_argument("migration needs at least one vehicle");
    if (m.vm_total_size_kbits <= 0) throw std::invalid_argument("vm size must be positive");
    if (t_s < 0) throw std::invalid_argument("time must be non-negative");
    const double share_kbps = m.vc_throughput_kbps / static_cast<double>(m.n_vehicles);
    const double migrated_kbits = t_s * share_kbps;
    return std::max(0.0, 1.0 - migrated_kbits / m.vm_total_size_kbits);
}

} // namespace vcsched
