#pragma once

#include "vcsched/channel.hpp"

#include <cstdint>
#include <vector>

namespace vcsched {

enum class Scheme { kStatic1609, kAaa };

/// One RSU coverage area: n_vehicles OBUs beaconing on the control channel
/// and uploading service packets to the RSU on the service channel.
struct VanetScenario {
    int n_vehicles = 5;
    std::int64_t sim_duration_ms = 1000;
    IntervalConfig interval;
    Scheme scheme = Scheme::kStatic1609;
    double bsm_rate_hz = 10.0;
    long bsm_size_bits = 1600;  // 200 B safety beacon
    double vc_rate_hz = 10.0;
    long vc_size_bits = 12000;  // 1500 B service packet
    double data_rate_kbps = 6000.0;
    double mac_efficiency = 0.8;     // fraction of the raw rate usable for payload
    double mac_overhead_ms = 1.07;   // fixed per-packet channel-access cost
    std::uint64_t rng_seed = 42;
};

enum class PacketKind { kBsm, kVc };

inline constexpr std::int64_t kPending = -1;

/// One packet, timestamped in integer microseconds. BSMs are broadcast on
/// the control channel; VC packets go to the RSU on the service channel.
struct PacketEvent {
    PacketKind kind = PacketKind::kBsm;
    int src_vehicle = 0;
    std::int64_t created_at_us = 0;
    std::int64_t delivered_at_us = kPending;

    bool delivered() const { return delivered_at_us != kPending; }
    double delay_ms() const { return (delivered_at_us - created_at_us) / 1000.0; }
};

/// Per-SI log row.
struct SiRow {
    int si_index = 0;
    double cchi_ms = 0.0;
    double schi_ms = 0.0;
    double inactivity_ms = 0.0;
    double effective_cch_use_ms = 0.0;
    long bsm_sent = 0;   // delivered this SI
    long bsm_queued = 0; // backlog across vehicles at the SI boundary
    double bsm_mean_delay_ms = 0.0;
    long vc_sent = 0;
    long vc_queued = 0;
    double vc_mean_delay_ms = 0.0;
    std::vector<long> bsm_queue_per_vehicle;
    std::vector<long> vc_queue_per_vehicle;
};

struct SimTrace {
    VanetScenario scenario;
    std::vector<SiRow> intervals;     // length = sim_duration / si
    std::vector<PacketEvent> packets; // every generated packet
};

/// Runs the interval-switching simulation. Deterministic for a fixed seed.
/// Throws std::invalid_argument for n_vehicles < 1, sim_duration < si, or
/// non-positive rates/sizes.
SimTrace run_simulation(const VanetScenario& scenario);

/// Total delivered service-channel bits over the run, in kbps.
double vc_throughput(const SimTrace& trace);

/// Mean end-to-end delay over delivered safety beacons, ms (0 if none).
double bsm_mean_delay(const SimTrace& trace);

/// Mean end-to-end delay over delivered service packets, ms (0 if none).
double vc_mean_delay(const SimTrace& trace);

/// A departing vehicle migrating the full image of its VMs to the RSU.
struct MigrationScenario {
    double vm_total_size_kbits = 500.0;
    double departure_time_s = 0.0;
    double vc_throughput_kbps = 0.0; // cloud throughput feeding the migration
    int n_vehicles = 1;
};

/// Fraction of the VM image still undelivered if the vehicle departs at
/// t seconds: max(0, 1 - t * per_vehicle_share / vm_total_size), where the
/// per-vehicle share is vc_throughput / n_vehicles.
double dropped_vm_fraction(const MigrationScenario& m, double t_s);

} // namespace vcsched
