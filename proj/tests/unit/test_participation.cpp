#include <doctest.h>

#include <set>

#include "atsssf/participation.hpp"
#include "atsssf/rng.hpp"
#include "oracle_state_trace.hpp"

using namespace atsssf;

TEST_CASE("register_clients starts everyone included with zero counters") {
    const auto statuses = register_clients({3, 1, 2});
    REQUIRE(statuses.size() == 3);
    for (const auto& [id, st] : statuses) {
        CHECK(st.status == Participation::kIncluded);
        CHECK(st.rounds_above_tau == 0);
    }
    CHECK(register_clients({}).empty());

    std::vector<int> hundred(100);
    for (int i = 0; i < 100; ++i) hundred[i] = i;
    CHECK(register_clients(hundred).size() == 100);
}

TEST_CASE("register_clients rejects duplicates") {
    CHECK_THROWS(register_clients({1, 2, 1}));
}

TEST_CASE("no omissions when everyone clears the threshold") {
    auto statuses = register_clients({0, 1, 2, 3, 4});
    SmoothedTrust s{{0, 0.9}, {1, 0.9}, {2, 0.9}, {3, 0.9}, {4, 0.9}};
    const auto d = decide_round(statuses, s, 0.75, 3);
    CHECK(d.omitted_now.empty());
    CHECK(d.readmitted_now.empty());
    CHECK(d.active_set == std::set<int>{0, 1, 2, 3, 4});
}

TEST_CASE("the cap omits only the m lowest scores") {
    auto statuses = register_clients({0, 1, 2, 3, 4});
    SmoothedTrust s{{0, 0.5}, {1, 0.6}, {2, 0.7}, {3, 0.72}, {4, 0.9}};
    const auto d = decide_round(statuses, s, 0.75, 3);
    CHECK(d.omitted_now == std::set<int>{0, 1, 2});
    CHECK(d.active_set == std::set<int>{3, 4});
    CHECK(statuses.at(3).status == Participation::kIncluded);
}

TEST_CASE("omission ties break by ascending client id") {
    auto statuses = register_clients({5, 2, 9, 7});
    SmoothedTrust s{{5, 0.5}, {2, 0.5}, {9, 0.5}, {7, 0.5}};
    const auto d = decide_round(statuses, s, 0.75, 2);
    CHECK(d.omitted_now == std::set<int>{2, 5});
}

TEST_CASE("m = 0 never omits") {
    auto statuses = register_clients({0, 1});
    SmoothedTrust s{{0, 0.1}, {1, 0.2}};
    const auto d = decide_round(statuses, s, 0.75, 0);
    CHECK(d.omitted_now.empty());
    CHECK(d.active_set == std::set<int>{0, 1});
}

TEST_CASE("readmission needs two consecutive rounds at or above tau") {
    auto statuses = register_clients({0});
    statuses.at(0).status = Participation::kOmitted;

    // Trajectory 0.8, 0.74, 0.8, 0.8: the dip resets the streak, so
    // readmission lands on the fourth round only.
    auto d = decide_round(statuses, {{0, 0.8}}, 0.75, 3);
    CHECK(d.readmitted_now.empty());
    CHECK(statuses.at(0).rounds_above_tau == 1);

    d = decide_round(statuses, {{0, 0.74}}, 0.75, 3);
    CHECK(d.readmitted_now.empty());
    CHECK(statuses.at(0).rounds_above_tau == 0);

    d = decide_round(statuses, {{0, 0.8}}, 0.75, 3);
    CHECK(d.readmitted_now.empty());

    d = decide_round(statuses, {{0, 0.8}}, 0.75, 3);
    CHECK(d.readmitted_now == std::set<int>{0});
    CHECK(statuses.at(0).status == Participation::kIncluded);
    CHECK(statuses.at(0).rounds_above_tau == 0);
    CHECK(d.active_set == std::set<int>{0});
}

TEST_CASE("exactly tau counts as above (inclusive readmission, strict omission)") {
    auto statuses = register_clients({0, 1});
    statuses.at(0).status = Participation::kOmitted;
    SmoothedTrust s{{0, 0.75}, {1, 0.75}};
    auto d = decide_round(statuses, s, 0.75, 3);
    CHECK(d.omitted_now.empty());              // 0.75 is not < 0.75
    CHECK(statuses.at(0).rounds_above_tau == 1);  // 0.75 counts toward readmission
}

TEST_CASE("decide_round demands a score for every client") {
    auto statuses = register_clients({0, 1});
    CHECK_THROWS(decide_round(statuses, {{0, 0.9}}, 0.75, 3));
}

TEST_CASE("scripted trajectories match the independent trace oracle") {
    // Mixed cohort: a stable client, a flapper, a persistent offender and a
    // recovering client.
    std::map<int, std::vector<double>> trust{
        {0, {0.9, 0.9, 0.9, 0.9, 0.9, 0.9}},
        {1, {0.7, 0.8, 0.7, 0.8, 0.8, 0.7}},
        {2, {0.2, 0.1, 0.2, 0.1, 0.2, 0.1}},
        {3, {0.5, 0.6, 0.8, 0.8, 0.9, 0.9}},
    };
    const auto expected = oracle::state_trace(trust, 0.75, 3);

    auto statuses = register_clients({0, 1, 2, 3});
    for (std::size_t t = 0; t < 6; ++t) {
        SmoothedTrust s;
        for (const auto& [id, seq] : trust) s[id] = seq[t];
        const auto d = decide_round(statuses, s, 0.75, 3);
        CHECK(d.omitted_now == expected[t].omitted_now);
        CHECK(d.readmitted_now == expected[t].readmitted_now);
        CHECK(d.active_set == expected[t].active);
    }
}

TEST_CASE("random trajectories: oracle equivalence and invariants") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(8));
        const int m = static_cast<int>(rng.uniform_index(4));
        const std::size_t rounds = 30;
        std::map<int, std::vector<double>> trust;
        std::vector<int> ids;
        for (int i = 0; i < n; ++i) {
            ids.push_back(i);
            auto& seq = trust[i];
            for (std::size_t t = 0; t < rounds; ++t) seq.push_back(rng.uniform());
        }
        const auto expected = oracle::state_trace(trust, 0.75, m);

        auto statuses = register_clients(ids);
        std::size_t included_entering = statuses.size();
        for (std::size_t t = 0; t < rounds; ++t) {
            SmoothedTrust s;
            for (const auto& [id, seq] : trust) s[id] = seq[t];
            const auto d = decide_round(statuses, s, 0.75, m);

            REQUIRE(d.omitted_now == expected[t].omitted_now);
            REQUIRE(d.readmitted_now == expected[t].readmitted_now);
            REQUIRE(d.active_set == expected[t].active);

            CHECK(d.omitted_now.size() <= static_cast<std::size_t>(m));
            CHECK(static_cast<long>(d.active_set.size()) >=
                  static_cast<long>(included_entering) - static_cast<long>(m));
            for (int id : d.omitted_now) CHECK(d.readmitted_now.count(id) == 0);
            for (int id : d.readmitted_now) {
                CHECK(trust.at(id)[t] >= 0.75);
                REQUIRE(t >= 1);
                CHECK(trust.at(id)[t - 1] >= 0.75);
            }
            included_entering = d.active_set.size();
        }
    }
}

TEST_CASE("never-below-tau trajectories produce zero omissions") {
    std::map<int, std::vector<double>> trust{{0, {0.8, 0.9, 1.0}}, {1, {0.76, 0.8, 0.75}}};
    const auto rounds = oracle::state_trace(trust, 0.75, 3);
    auto statuses = register_clients({0, 1});
    for (std::size_t t = 0; t < 3; ++t) {
        SmoothedTrust s{{0, trust[0][t]}, {1, trust[1][t]}};
        const auto d = decide_round(statuses, s, 0.75, 3);
        CHECK(d.omitted_now.empty());
        CHECK(rounds[t].omitted_now.empty());
    }
}
