#include <doctest.h>

#include "testutil.hpp"
#include "vcsched/greedy.hpp"
#include "vcsched/io.hpp"

#include <random>

using namespace vcsched;

#ifndef VCSCHED_DATA_DIR
#define VCSCHED_DATA_DIR "data"
#endif

TEST_CASE("greedy fills a single feasible cloud completely") {
    VccModel vcc;
    vcc.clouds.push_back({1, 5, 5, 100.0, 10.0});
    std::vector<BagOfTasks> bots{{1, {}}};
    for (int t = 0; t < 5; ++t) bots[0].tasks.push_back({t + 1, 1, 50.0, 50.0});
    const auto r = greedy_schedule(vcc, bots);
    CHECK(r.paid_vms == 0);
    CHECK(r.unused_vms == 0);
    CHECK(r.per_vc_used.at(1) == 5);
}

TEST_CASE("greedy falls back to the paid cloud when nothing is feasible") {
    VccModel vcc;
    vcc.clouds.push_back({1, 10, 10, 100.0, 500.0}); // delay beyond every task
    std::vector<BagOfTasks> bots{{1, {}}};
    for (int t = 0; t < 4; ++t) bots[0].tasks.push_back({t + 1, 1, 50.0, 50.0});
    const auto r = greedy_schedule(vcc, bots);
    CHECK(r.paid_vms == 4);
    CHECK(r.unused_vms == 10);
    for (const auto& p : r.placements) CHECK(p.target == kPaidCloud);
}

TEST_CASE("canonical fixture reproduces the published greedy outcome") {
    const auto inst = load_instance(std::string(VCSCHED_DATA_DIR) + "/canonical_instance.txt");
    const auto r = greedy_schedule(inst.vcc, inst.bots);
    CHECK(r.paid_vms == 85);
    CHECK(r.unused_vms == 27);
    CHECK(r.vc_placed_vms() == 245);
    CHECK(greedy_reward(r, inst.vcc) == doctest::Approx(116.0).epsilon(1e-12));

    // Per-cloud leftovers behind the 27 total.
    const std::vector<std::pair<int, long>> unused = {{2, 1}, {4, 2}, {5, 4},  {7, 4},
                                                      {8, 1}, {9, 1}, {10, 7}, {11, 7}};
    for (const auto& cloud : inst.vcc.clouds) {
        long expected = 0;
        for (const auto& [id, count] : unused)
            if (id == cloud.id) expected = count;
        CHECK(cloud.vm_total - r.per_vc_used.at(cloud.id) == expected);
    }
}

TEST_CASE("greedy_reward evaluates the gain/cost/penalty formula") {
    VccModel empty;
    ScheduleResult all_paid;
    all_paid.paid_vms = 10;
    empty.cost_per_tcc_vm = 1.2;
    CHECK(greedy_reward(all_paid, empty) == doctest::Approx(-12.0));

    VccModel vcc;
    const std::vector<int> sizes = {5, 7, 10, 15, 20, 25, 28, 35, 40, 42, 45};
    ScheduleResult perfect;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        vcc.clouds.push_back({static_cast<int>(i) + 1, sizes[i], sizes[i], 100.0, 10.0});
        perfect.per_vc_used[static_cast<int>(i) + 1] = sizes[i];
    }
    CHECK(greedy_reward(perfect, vcc) == doctest::Approx(272.0));
}

TEST_CASE("greedy placements respect feasibility at placement time") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        auto inst = testutil::random_instance(rng, {5, 8, 25, 3});
        const auto r = greedy_schedule(inst.vcc, inst.bots);
        auto clouds = inst.vcc.clouds;
        const auto tasks = flatten_tasks(inst.bots);
        REQUIRE(r.placements.size() == tasks.size());
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const auto& p = r.placements[i];
            CHECK(p.vms_used == tasks[i].vm_demand);
            if (p.target == kPaidCloud) continue;
            auto it = std::find_if(clouds.begin(), clouds.end(),
                                   [&](const auto& c) { return c.id == p.target; });
            REQUIRE(it != clouds.end());
            CHECK(feasible(*it, tasks[i]));
            it->vm_free -= p.vms_used;
        }
        CHECK(r.paid_vms + r.vc_placed_vms() == total_demand(inst.bots));
        CHECK(r.unused_vms == total_capacity(inst.vcc) - r.vc_placed_vms());
    }
}

TEST_CASE("greedy is online-consistent: prefixes match the full run") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = testutil::random_instance(rng, {4, 6, 15, 2});
        const auto full = greedy_schedule(inst.vcc, inst.bots);
        const auto tasks = flatten_tasks(inst.bots);
        std::uniform_int_distribution<std::size_t> cut_dist(0, tasks.size());
        const std::size_t cut = cut_dist(rng);
        std::vector<BagOfTasks> prefix{{1, std::vector<Task>(tasks.begin(), tasks.begin() + cut)}};
        const auto part = greedy_schedule(inst.vcc, prefix);
        for (std::size_t i = 0; i < cut; ++i) {
            CHECK(part.placements[i].target == full.placements[i].target);
            CHECK(part.placements[i].vms_used == full.placements[i].vms_used);
        }
    }
}
