#include <doctest.h>

#include <cmath>

#include "atsssf/rng.hpp"
#include "atsssf/smoothing.hpp"

using namespace atsssf;

TEST_CASE("trust_variance of equal scores is zero") {
    CHECK(trust_variance({{0, 0.7}, {1, 0.7}, {2, 0.7}}) == 0.0);
}

TEST_CASE("trust_variance of {0,1} is 0.25") {
    CHECK(trust_variance({{0, 0.0}, {1, 1.0}}) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("trust_variance matches a two-pass computation on random scores") {
    Rng rng(3);
    TrustScores scores;
    for (int i = 0; i < 10; ++i) scores[i] = rng.uniform();
    double mean = 0.0;
    for (const auto& [id, v] : scores) mean += v;
    mean /= 10.0;
    double var = 0.0;
    for (const auto& [id, v] : scores) var += (v - mean) * (v - mean);
    var /= 10.0;
    CHECK(trust_variance(scores) == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("trust_variance rejects an empty score set") {
    CHECK_THROWS(trust_variance({}));
}

TEST_CASE("adapt_alpha halves above the threshold") {
    SmootherState s;
    s.mode = SmootherMode::kAdaptive;
    s.alpha = 0.3;
    s.variance_threshold = 0.01;
    CHECK(adapt_alpha(s, 0.02).alpha == doctest::Approx(0.15).epsilon(1e-15));
}

TEST_CASE("adapt_alpha grows by 0.05 up to the cap below the threshold") {
    SmootherState s;
    s.mode = SmootherMode::kAdaptive;
    s.alpha = 0.98;
    CHECK(adapt_alpha(s, 0.001).alpha == 1.0);
    s.alpha = 0.5;
    CHECK(adapt_alpha(s, 0.0).alpha == doctest::Approx(0.55).epsilon(1e-15));
}

TEST_CASE("adapt_alpha clamps at the floor") {
    SmootherState s;
    s.mode = SmootherMode::kAdaptive;
    s.alpha = 0.08;
    s.alpha_floor = 0.05;
    CHECK(adapt_alpha(s, 0.5).alpha == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("static mode never changes alpha") {
    SmootherState s;
    s.mode = SmootherMode::kStatic;
    s.alpha = 0.3;
    CHECK(adapt_alpha(s, 0.5).alpha == 0.3);
    CHECK(adapt_alpha(s, 0.0).alpha == 0.3);
}

TEST_CASE("alpha stays within [floor, 1] under any variance sequence") {
    Rng rng(9);
    SmootherState s;
    s.mode = SmootherMode::kAdaptive;
    s.alpha = 0.3;
    for (int t = 0; t < 500; ++t) {
        s = adapt_alpha(s, rng.uniform() < 0.5 ? rng.uniform() : 0.0);
        CHECK(s.alpha >= s.alpha_floor);
        CHECK(s.alpha <= 1.0);
    }
}

TEST_CASE("ema_update blends prev and raw") {
    SmoothedTrust prev{{0, 1.0}};
    const auto out = ema_update(prev, {{0, 0.5}}, 0.3);
    CHECK(out.at(0) == doctest::Approx(0.85).epsilon(1e-15));
}

TEST_CASE("ema_update at alpha 1 returns the raw scores") {
    SmoothedTrust prev{{0, 0.2}, {1, 0.9}};
    const auto out = ema_update(prev, {{0, 0.7}, {1, 0.1}}, 1.0);
    CHECK(out.at(0) == 0.7);
    CHECK(out.at(1) == 0.1);
}

TEST_CASE("ema_update rejects unknown clients") {
    SmoothedTrust prev{{0, 1.0}};
    CHECK_THROWS(ema_update(prev, {{5, 0.5}}, 0.3));
}

TEST_CASE("constant input contracts geometrically over 20 rounds") {
    const double c = 0.3, alpha = 0.3;
    SmoothedTrust s{{0, 1.0}};
    for (int t = 0; t < 20; ++t) s = ema_update(s, {{0, c}}, alpha);
    CHECK(std::fabs(s.at(0) - c) <= std::pow(0.7, 20) * std::fabs(1.0 - c) + 1e-12);
}

TEST_CASE("EMA boundedness, fixed point and exact per-round contraction") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = 0.01 + 0.99 * rng.uniform();
        const double c = rng.uniform();
        const double start = rng.uniform();
        SmoothedTrust s{{0, start}};

        const auto fixed = ema_update({{0, c}}, {{0, c}}, alpha);
        CHECK(fixed.at(0) == c);

        double prev_err = std::fabs(start - c);
        for (int t = 0; t < 30; ++t) {
            s = ema_update(s, {{0, c}}, alpha);
            CHECK(s.at(0) >= 0.0);
            CHECK(s.at(0) <= 1.0);
            const double err = std::fabs(s.at(0) - c);
            CHECK(std::fabs(err - (1.0 - alpha) * prev_err) <= 1e-12);
            prev_err = err;
        }
    }
}

TEST_CASE("adaptive trajectory is a pure function of the variance sequence") {
    Rng rng(13);
    std::vector<double> sigmas;
    for (int t = 0; t < 100; ++t) sigmas.push_back(rng.uniform(0.0, 0.05));
    auto run = [&sigmas]() {
        SmootherState s;
        s.mode = SmootherMode::kAdaptive;
        std::vector<double> alphas;
        for (double v : sigmas) {
            s = adapt_alpha(s, v);
            alphas.push_back(s.alpha);
        }
        return alphas;
    };
    CHECK(run() == run());
}

TEST_CASE("smoother state validation") {
    SmootherState s;
    s.alpha = 0.01;
    s.alpha_floor = 0.05;
    CHECK_THROWS(s.validate());
    s.alpha = 1.5;
    CHECK_THROWS(s.validate());
}
