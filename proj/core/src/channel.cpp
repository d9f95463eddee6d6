#include "vcsched/channel.hpp"

#include <algorithm>
#include <cmath>

namespace vcsched {

long bsm_generated_per_si(double rate_hz, double window_ms) {
    return static_cast<long>(std::floor(rate_hz * window_ms / 1000.0));
}

long sent_per_si(long generated, long queued) {
    return std::max<long>(0, generated - queued);
}

double vehicle_mean_delay(double delay_sum_ms, long received) {
    return received > 0 ? delay_sum_ms / static_cast<double>(received) : 0.0;
}

ChannelStats update_running_stats(const ChannelStats& stats,
                                  std::span<const VehicleSiSample> per_vehicle) {
    double sent_sum = 0.0;
    double mean_delay_sum = 0.0;
    long received_sum = 0;
    for (const auto& v : per_vehicle) {
        sent_sum += static_cast<double>(v.sent);
        mean_delay_sum += vehicle_mean_delay(v.delay_sum_ms, v.received);
        received_sum += v.received;
    }
    const double n = static_cast<double>(per_vehicle.size());
    ChannelStats out;
    out.s_v2v = (stats.s_v2v + sent_sum) / (1.0 + n);
    out.d_v2v = (stats.d_v2v + mean_delay_sum) / (1.0 + static_cast<double>(received_sum));
    return out;
}

double effective_cch_utilization(const ChannelStats& stats) {
    return stats.s_v2v * stats.d_v2v;
}

IntervalState adapt_intervals(const IntervalConfig& cfg, double u_cch_ms) {
    IntervalState st;
    st.effective_cch_use_ms = u_cch_ms;
    if (u_cch_ms < cfg.default_cchi_ms) {
        st.inactivity_ms = cfg.default_cchi_ms - u_cch_ms;
        st.cchi_ms = u_cch_ms;
        st.schi_ms = cfg.default_schi_ms + st.inactivity_ms;
    } else {
        st.inactivity_ms = 0.0;
        st.cchi_ms = cfg.default_cchi_ms;
        st.schi_ms = cfg.default_schi_ms;
    }
    return st;
}

long vc_packets_sent_in_extended_schi(std::span<const std::pair<long, long>> per_vehicle) {
    long sum = 0;
    for (const auto& [generated, queued] : per_vehicle)
        sum += sent_per_si(generated, queued);
    return sum;
}

AaaController::AaaController(IntervalConfig cfg, int sis_per_epoch)
    : cfg_(cfg), sis_per_epoch_(sis_per_epoch) {
    state_.cchi_ms = cfg.default_cchi_ms;
    state_.schi_ms = cfg.default_schi_ms;
}

const IntervalState& AaaController::on_si_complete(std::span<const VehicleSiSample> per_vehicle,
                                                   bool cch_backlog) {
    backlog_seen_ = cch_backlog;
    ++si_in_epoch_;
    if (si_in_epoch_ < sis_per_epoch_) {
        stats_ = update_running_stats(stats_, per_vehicle);
        return state_;
    }
    // Epoch boundary: adapt from the accumulated averages, then reset them.
    const double u = backlog_seen_ ? cfg_.default_cchi_ms : effective_cch_utilization(stats_);
    state_ = adapt_intervals(cfg_, u);
    stats_ = ChannelStats{};
    si_in_epoch_ = 0;
    backlog_seen_ = false;
    return state_;
}

} // namespace vcsched
