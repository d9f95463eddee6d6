#include <doctest.h>

#include "vcsched/channel.hpp"

#include <random>
#include <vector>

using namespace vcsched;

TEST_CASE("bsm_generated_per_si floors rate * window") {
    CHECK(bsm_generated_per_si(10.0, 100.0) == 1);
    CHECK(bsm_generated_per_si(0.0, 250.0) == 0);
    CHECK(bsm_generated_per_si(50.0, 100.0) == 5);
}

TEST_CASE("sent_per_si clamps at zero") {
    CHECK(sent_per_si(1, 0) == 1);
    CHECK(sent_per_si(1, 1) == 0);
    CHECK(sent_per_si(5, 2) == 3);
    CHECK(sent_per_si(1, 11) == 0);
}

TEST_CASE("vehicle_mean_delay uses the empty-average convention") {
    CHECK(vehicle_mean_delay(10.0, 10) == doctest::Approx(1.0));
    CHECK(vehicle_mean_delay(0.0, 0) == 0.0);
    CHECK(vehicle_mean_delay(3.0, 2) == doctest::Approx(1.5));
}

TEST_CASE("update_running_stats follows the recurrences") {
    std::vector<VehicleSiSample> four(4);
    for (auto& v : four) v.sent = 1;

    ChannelStats stats;
    stats = update_running_stats(stats, four);
    CHECK(stats.s_v2v == doctest::Approx(0.8)); // (0 + 4) / (1 + 4)
    CHECK(stats.d_v2v == 0.0);                  // 0 / (1 + 0), no receptions

    stats = update_running_stats(stats, four);
    CHECK(stats.s_v2v == doctest::Approx(0.96)); // (0.8 + 4) / 5

    // Hand-unrolled third step with receptions: each vehicle received twice
    // with mean delay 1.5 ms.
    for (auto& v : four) {
        v.received = 2;
        v.delay_sum_ms = 3.0;
    }
    stats = update_running_stats(stats, four);
    CHECK(stats.s_v2v == doctest::Approx((0.96 + 4.0) / 5.0));
    CHECK(stats.d_v2v == doctest::Approx((0.0 + 4 * 1.5) / (1.0 + 8.0)));
}

TEST_CASE("effective_cch_utilization is the product of the running means") {
    CHECK(effective_cch_utilization({10.0, 1.0}) == doctest::Approx(10.0));
    CHECK(effective_cch_utilization({0.0, 123.0}) == 0.0);
    CHECK(effective_cch_utilization({6.3, 1.513}) == doctest::Approx(9.53).epsilon(5e-4));
}

TEST_CASE("adapt_intervals reclaims inactivity for the service interval") {
    IntervalConfig cfg;

    auto st = adapt_intervals(cfg, 9.53);
    CHECK(st.cchi_ms == doctest::Approx(9.53));
    CHECK(st.schi_ms == doctest::Approx(90.47));
    CHECK(st.inactivity_ms == doctest::Approx(40.47));

    st = adapt_intervals(cfg, 50.0); // saturated: static split
    CHECK(st.cchi_ms == 50.0);
    CHECK(st.schi_ms == 50.0);

    st = adapt_intervals(cfg, 0.0);
    CHECK(st.cchi_ms == 0.0);
    CHECK(st.schi_ms == 100.0);
}

TEST_CASE("adapt_intervals conserves the SI budget and is idempotent and monotone") {
    IntervalConfig cfg;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u_dist(0.0, 80.0);
    double prev_u = -1.0, prev_cchi = 0.0, prev_schi = 0.0;
    std::vector<double> us;
    for (int i = 0; i < 500; ++i) us.push_back(u_dist(rng));
    std::sort(us.begin(), us.end());
    for (double u : us) {
        const auto st = adapt_intervals(cfg, u);
        CHECK(st.cchi_ms + st.schi_ms == doctest::Approx(100.0).epsilon(1e-12));
        CHECK(st.cchi_ms <= cfg.default_cchi_ms);
        CHECK(st.schi_ms >= cfg.default_schi_ms);

        const auto again = adapt_intervals(cfg, st.cchi_ms);
        CHECK(again.cchi_ms == st.cchi_ms);
        CHECK(again.schi_ms == st.schi_ms);

        if (prev_u >= 0.0) { // monotone in u
            CHECK(st.cchi_ms >= prev_cchi);
            CHECK(st.schi_ms <= prev_schi);
        }
        if (u >= cfg.default_cchi_ms) { // degrades to the static standard
            CHECK(st.cchi_ms == cfg.default_cchi_ms);
            CHECK(st.schi_ms == cfg.default_schi_ms);
        }
        prev_u = u;
        prev_cchi = st.cchi_ms;
        prev_schi = st.schi_ms;
    }
}

TEST_CASE("vc_packets_sent_in_extended_schi sums clamped differences") {
    std::vector<std::pair<long, long>> five(5, {1, 0});
    CHECK(vc_packets_sent_in_extended_schi(five) == 5);

    std::vector<std::pair<long, long>> all_queued(5, {2, 2});
    CHECK(vc_packets_sent_in_extended_schi(all_queued) == 0);

    std::vector<std::pair<long, long>> mixed = {{2, 0}, {2, 1}, {2, 2}};
    CHECK(vc_packets_sent_in_extended_schi(mixed) == 3);
}

TEST_CASE("controller adapts once per epoch and resets its averages") {
    IntervalConfig cfg;
    AaaController ctl(cfg, 10);
    std::vector<VehicleSiSample> samples(4);
    for (auto& v : samples) {
        v.generated = 1;
        v.sent = 1;
        v.received = 1;
        v.delay_sum_ms = 5.0;
    }
    for (int si = 0; si < 9; ++si) {
        const auto& st = ctl.on_si_complete(samples, false);
        CHECK(st.cchi_ms == 50.0); // still the default split mid-epoch
    }
    const auto& adapted = ctl.on_si_complete(samples, false);
    CHECK(adapted.cchi_ms < 50.0); // measured activity is far below 50 ms
    CHECK(adapted.cchi_ms + adapted.schi_ms == doctest::Approx(100.0));
    CHECK(ctl.stats().s_v2v == 0.0); // averages reset at the epoch boundary
    CHECK(ctl.stats().d_v2v == 0.0);
}

TEST_CASE("controller treats backlog as an insufficient control interval") {
    IntervalConfig cfg;
    AaaController ctl(cfg, 2);
    std::vector<VehicleSiSample> light(2);
    for (auto& v : light) {
        v.sent = 1;
        v.received = 1;
        v.delay_sum_ms = 2.0;
    }
    ctl.on_si_complete(light, false);
    const auto& st = ctl.on_si_complete(light, true); // backlog at the boundary
    CHECK(st.cchi_ms == cfg.default_cchi_ms);
    CHECK(st.schi_ms == cfg.default_schi_ms);
}
