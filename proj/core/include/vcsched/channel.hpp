#pragma once

#include <span>

namespace vcsched {

/// MAC interval layout of the 100 ms synchronization interval.
struct IntervalConfig {
    double si_ms = 100.0;
    double gi_ms = 4.0;
    double default_cchi_ms = 50.0;
    double default_schi_ms = 50.0;
};

/// The interval split currently in force, together with the measurements
/// that produced it.
struct IntervalState {
    double cchi_ms = 50.0;
    double schi_ms = 50.0;
    double inactivity_ms = 0.0;        // I_CCH: unused part of the default CCHI
    double effective_cch_use_ms = 0.0; // U_CCH fed into the adaptation
};

/// One vehicle's control-channel accounting for a single SI.
struct VehicleSiSample {
    int generated = 0;        // safety beacons created this SI
    int sent = 0;             // generated minus still-queued, clamped at 0
    int queued = 0;           // backlog at the channel switch
    int received = 0;         // this vehicle's beacons that were delivered
    double delay_sum_ms = 0.0; // sum of their end-to-end delays
};

/// Running per-epoch averages of control-channel activity.
struct ChannelStats {
    double s_v2v = 0.0; // running mean of sent beacons
    double d_v2v = 0.0; // running mean delay, ms
};

/// Beacons generated per window: rate * window, floored to whole packets.
long bsm_generated_per_si(double rate_hz, double window_ms);

/// Packets that made it out this SI: generated - queued, clamped at 0.
long sent_per_si(long generated, long queued);

/// Mean delay over `received` deliveries; 0 when nothing was received.
double vehicle_mean_delay(double delay_sum_ms, long received);

/// One step of the running-average recurrences:
///   s_v2v <- (s_v2v + sum sent)   / (1 + n_vehicles)
///   d_v2v <- (d_v2v + sum Dv_h)   / (1 + sum received)
/// where Dv_h is each vehicle's mean delay for the SI.
ChannelStats update_running_stats(const ChannelStats& stats,
                                  std::span<const VehicleSiSample> per_vehicle);

/// U_CCH = s_v2v * d_v2v, in ms.
double effective_cch_utilization(const ChannelStats& stats);

/// Shrinks the control interval to its measured utilization and hands the
/// reclaimed time to the service interval. At or above the default CCHI the
/// static split is restored, so the budget cchi + schi is always preserved.
IntervalState adapt_intervals(const IntervalConfig& cfg, double u_cch_ms);

/// Service-channel packets that got out across vehicles:
/// sum of (generated - queued), each clamped at 0.
long vc_packets_sent_in_extended_schi(std::span<const std::pair<long, long>> per_vehicle);

/// Closed-loop interval controller: accumulates the running stats each SI
/// and re-adapts the split once per adaptation epoch (default 10 SIs, i.e.
/// once per UTC second), resetting the averages afterwards.
///
/// An epoch that ends with unsent control-channel backlog is treated as
/// "CCHI not sufficient": the controller restores the default split for the
/// next epoch instead of shrinking further. Without this rule a starved
/// control channel measures zero utilization and the interval never
/// recovers.
class AaaController {
public:
    explicit AaaController(IntervalConfig cfg, int sis_per_epoch = 10);

    const IntervalState& current() const { return state_; }
    const ChannelStats& stats() const { return stats_; }

    /// Feed one completed SI. Returns the state in force for the *next* SI.
    const IntervalState& on_si_complete(std::span<const VehicleSiSample> per_vehicle,
                                        bool cch_backlog);

private:
    IntervalConfig cfg_;
    IntervalState state_;
    ChannelStats stats_;
    int sis_per_epoch_;
    int si_in_epoch_ = 0;
    bool backlog_seen_ = false;
};

} // namespace vcsched
