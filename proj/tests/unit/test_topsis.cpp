#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "atsssf/rng.hpp"
#include "atsssf/topsis.hpp"
#include "oracle_topsis.hpp"

using namespace atsssf;

namespace {

DecisionMatrix make_matrix(const std::vector<std::vector<double>>& rows) {
    DecisionMatrix d;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        d.client_ids.push_back(static_cast<int>(i));
        d.rows.push_back({rows[i][0], rows[i][1], rows[i][2], rows[i][3]});
    }
    return d;
}

DecisionMatrix random_matrix(Rng& rng, std::size_t n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(kCriteria));
    for (auto& row : rows)
        for (double& v : row) v = rng.uniform();
    return make_matrix(rows);
}

}  // namespace

TEST_CASE("normalize_columns divides by the Euclidean column norm") {
    // A 3-4-5 column: [3,4] scaled into [0.6, 0.8]. Entries are scaled to
    // [0,1] first to satisfy the matrix contract.
    auto d = make_matrix({{0.3, 0.5, 0.5, 0.5}, {0.4, 0.5, 0.5, 0.5}});
    const auto r = normalize_columns(d);
    CHECK(r[0][0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(r[1][0] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("normalize_columns maps a single client to unit entries") {
    auto d = make_matrix({{0.5, 0.5, 0.5, 0.5}});
    const auto r = normalize_columns(d);
    for (double v : r[0]) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalize_columns leaves an all-zero column at zero") {
    auto d = make_matrix({{0.0, 0.2, 0.0, 0.1}, {0.0, 0.4, 0.0, 0.9}});
    const auto r = normalize_columns(d);
    CHECK(r[0][0] == 0.0);
    CHECK(r[1][0] == 0.0);
    CHECK(r[0][2] == 0.0);
    CHECK(r[1][2] == 0.0);
}

TEST_CASE("normalize_columns matches independent recomputation on a random 5x4 matrix") {
    Rng rng(5);
    auto d = random_matrix(rng, 5);
    const auto r = normalize_columns(d);
    for (std::size_t j = 0; j < kCriteria; ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < 5; ++i) norm += d.rows[i][j] * d.rows[i][j];
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(r[i][j] == doctest::Approx(d.rows[i][j] / norm).epsilon(1e-12));
    }
}

TEST_CASE("ideal_solutions picks column-wise extremes") {
    std::vector<std::array<double, kCriteria>> v{{1, 0, 0.5, 0.2}, {0, 1, 0.25, 0.8}};
    const auto [a_plus, a_minus] = ideal_solutions(v);
    CHECK(a_plus == std::array<double, kCriteria>{1, 1, 0.5, 0.8});
    CHECK(a_minus == std::array<double, kCriteria>{0, 0, 0.25, 0.2});
}

TEST_CASE("ideal_solutions on a single row degenerates to that row") {
    std::vector<std::array<double, kCriteria>> v{{0.1, 0.2, 0.3, 0.4}};
    const auto [a_plus, a_minus] = ideal_solutions(v);
    CHECK(a_plus == v[0]);
    CHECK(a_minus == v[0]);
}

TEST_CASE("ideal_solutions matches an element-wise scan on a random 6x4 matrix") {
    Rng rng(6);
    std::vector<std::array<double, kCriteria>> v(6);
    for (auto& row : v)
        for (double& x : row) x = rng.uniform();
    const auto [a_plus, a_minus] = ideal_solutions(v);
    for (std::size_t j = 0; j < kCriteria; ++j) {
        double mx = v[0][j], mn = v[0][j];
        for (const auto& row : v) {
            mx = std::max(mx, row[j]);
            mn = std::min(mn, row[j]);
        }
        CHECK(a_plus[j] == mx);
        CHECK(a_minus[j] == mn);
    }
}

TEST_CASE("closeness is 1 at the ideal and 0 at the anti-ideal") {
    auto d = make_matrix({{0.9, 0.9, 0.9, 0.9}, {0.1, 0.1, 0.1, 0.1}});
    const auto scores = topsis_scores(d, CriteriaWeights{});
    CHECK(scores.at(0) == 1.0);
    CHECK(scores.at(1) == 0.0);
}

TEST_CASE("closeness of the middle of three uniform rows is exactly one half") {
    auto d = make_matrix(
        {{0.9, 0.9, 0.9, 0.9}, {0.5, 0.5, 0.5, 0.5}, {0.1, 0.1, 0.1, 0.1}});
    const auto scores = topsis_scores(d, CriteriaWeights{});
    CHECK(scores.at(1) == doctest::Approx(0.5).epsilon(1e-12));
    const auto expected = oracle::topsis({{0.9, 0.9, 0.9, 0.9},
                                          {0.5, 0.5, 0.5, 0.5},
                                          {0.1, 0.1, 0.1, 0.1}},
                                         {0, 1, 2}, {0.25, 0.25, 0.25, 0.25});
    for (const auto& [id, score] : expected)
        CHECK(scores.at(id) == doctest::Approx(score).epsilon(1e-12));
}

TEST_CASE("identical clients all score 1") {
    auto d = make_matrix({{0.6, 0.7, 0.6, 0.65},
                          {0.6, 0.7, 0.6, 0.65},
                          {0.6, 0.7, 0.6, 0.65}});
    const auto scores = topsis_scores(d, CriteriaWeights{});
    for (const auto& [id, score] : scores) CHECK(score == 1.0);
}

TEST_CASE("scores agree with the independent oracle on random matrices") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(8);
        auto d = random_matrix(rng, n);
        const auto scores = topsis_scores(d, CriteriaWeights{});
        std::vector<std::vector<double>> rows;
        for (const auto& row : d.rows) rows.emplace_back(row.begin(), row.end());
        const auto expected = oracle::topsis(rows, d.client_ids, {0.25, 0.25, 0.25, 0.25});
        for (const auto& [id, score] : expected) {
            CHECK(std::fabs(scores.at(id) - score) <= 1e-9);
            CHECK(scores.at(id) >= 0.0);
            CHECK(scores.at(id) <= 1.0);
        }
    }
}

TEST_CASE("a dominant client scores 1") {
    Rng rng(123);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(6);
        auto d = random_matrix(rng, n);
        for (std::size_t j = 0; j < kCriteria; ++j) {
            double mx = 0.0;
            for (const auto& row : d.rows) mx = std::max(mx, row[j]);
            d.rows[0][j] = std::min(1.0, mx + 0.05);
        }
        const auto scores = topsis_scores(d, CriteriaWeights{});
        CHECK(scores.at(0) == 1.0);
        for (const auto& [id, score] : scores) CHECK(score <= scores.at(0));
    }
}

TEST_CASE("positive column scaling leaves scores unchanged") {
    Rng rng(321);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(6);
        auto d = random_matrix(rng, n);
        auto scaled = d;
        const std::size_t j = rng.uniform_index(kCriteria);
        double mx = 0.0;
        for (const auto& row : d.rows) mx = std::max(mx, row[j]);
        const double c = (mx > 0.0) ? rng.uniform(0.1, 1.0) / mx : 0.5;
        for (auto& row : scaled.rows) row[j] *= c;
        const auto base = topsis_scores(d, CriteriaWeights{});
        const auto after = topsis_scores(scaled, CriteriaWeights{});
        for (const auto& [id, score] : base)
            CHECK(after.at(id) == doctest::Approx(score).epsilon(1e-9));
    }
}

TEST_CASE("permuting rows permutes scores identically") {
    Rng rng(55);
    auto d = random_matrix(rng, 6);
    DecisionMatrix p;
    const std::vector<std::size_t> order{4, 2, 0, 5, 1, 3};
    for (std::size_t i : order) {
        p.client_ids.push_back(d.client_ids[i]);
        p.rows.push_back(d.rows[i]);
    }
    const auto base = topsis_scores(d, CriteriaWeights{});
    const auto perm = topsis_scores(p, CriteriaWeights{});
    for (const auto& [id, score] : base) CHECK(perm.at(id) == score);
}

TEST_CASE("weights must be non-negative and sum to 1") {
    auto d = make_matrix({{0.5, 0.5, 0.5, 0.5}});
    CriteriaWeights bad;
    bad.w = {0.5, 0.5, 0.5, -0.5};
    CHECK_THROWS(topsis_scores(d, bad));
    bad.w = {0.3, 0.3, 0.3, 0.3};
    CHECK_THROWS(topsis_scores(d, bad));
}

TEST_CASE("decision matrix entries outside [0,1] are rejected") {
    DecisionMatrix d;
    d.client_ids = {0};
    d.rows.push_back({1.2, 0.5, 0.5, 0.5});
    CHECK_THROWS(topsis_scores(d, CriteriaWeights{}));
}

TEST_CASE("oracle cases round-trip through the CSV fixture format") {
    Rng rng(77);
    std::vector<oracle::TopsisCase> cases;
    for (int i = 0; i < 5; ++i) {
        oracle::TopsisCase c;
        const std::size_t n = 1 + rng.uniform_index(5);
        for (std::size_t r = 0; r < n; ++r) {
            c.ids.push_back(static_cast<int>(r));
            c.rows.push_back({rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()});
        }
        c.weights = {0.25, 0.25, 0.25, 0.25};
        c.expected = oracle::topsis(c.rows, c.ids, c.weights);
        cases.push_back(std::move(c));
    }
    const auto path = std::filesystem::temp_directory_path() / "topsis_cases.csv";
    oracle::write_cases_csv(cases, path.string());
    const auto loaded = oracle::read_cases_csv(path.string());
    REQUIRE(loaded.size() == cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i)
        for (const auto& [id, score] : cases[i].expected)
            CHECK(loaded[i].expected.at(id) == doctest::Approx(score).epsilon(1e-15));
    std::filesystem::remove(path);
}
