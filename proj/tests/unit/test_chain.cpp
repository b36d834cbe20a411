#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hyperprop/chain.hpp"
#include "hyperprop/model.hpp"
#include "hyperprop/rng.hpp"
#include "support/stats.hpp"

using hyperprop::FiniteDistribution;
using hyperprop::ModelParams;
using hyperprop::RngStream;

TEST_CASE("stats support: gamma_q matches even-df closed forms") {
    // Q(1, x) = exp(-x); Q(2, x) = (1 + x) exp(-x).
    for (double x : {0.1, 0.5, 1.0, 2.5, 7.0, 20.0}) {
        CHECK(teststats::gamma_q(1.0, x) ==
              doctest::Approx(std::exp(-x)).epsilon(1e-12));
        CHECK(teststats::gamma_q(2.0, x) ==
              doctest::Approx((1.0 + x) * std::exp(-x)).epsilon(1e-12));
    }
    CHECK(teststats::gamma_q(3.5, 0.0) == 1.0);
}

TEST_CASE("chain: binomial sampler degenerate cases") {
    RngStream rng(1, 0);
    CHECK(hyperprop::sample_binomial(0, 0.5, rng) == 0);
    CHECK(hyperprop::sample_binomial(10, 0.0, rng) == 0);
    CHECK(hyperprop::sample_binomial(10, 1.0, rng) == 10);
    CHECK_THROWS_AS(hyperprop::sample_binomial(10, -0.1, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(hyperprop::sample_binomial(10, 1.5, rng),
                    std::invalid_argument);
    for (int i = 0; i < 1000; ++i) {
        CHECK(hyperprop::sample_binomial(7, 0.4, rng) <= 7);
    }
}

static void check_binomial_fit(uint64_t m, double p, int draws,
                               uint64_t seed) {
    RngStream rng(seed, 0);
    std::vector<double> observed(m + 1, 0.0);
    for (int i = 0; i < draws; ++i) {
        uint64_t k = hyperprop::sample_binomial(m, p, rng);
        REQUIRE(k <= m);
        observed[k] += 1.0;
    }
    auto pmf = teststats::binomial_pmf_table(m, p);
    std::vector<double> expected(m + 1);
    for (uint64_t k = 0; k <= m; ++k) expected[k] = pmf[k] * draws;
    auto res = teststats::chi_square_from_counts(observed, expected);
    INFO("m=", m, " p=", p, " stat=", res.stat, " bins=", res.bins);
    CHECK(res.p_value > 0.001);
}

TEST_CASE("chain: inversion-path samples fit the exact pmf") {
    check_binomial_fit(8, 0.3, 1000000, 42);
    check_binomial_fit(5, 0.5, 400000, 43);
    check_binomial_fit(12, 0.9, 400000, 44);
    check_binomial_fit(1, 0.25, 200000, 45);
}

TEST_CASE("chain: rejection-path samples fit the exact pmf") {
    // m * min(p, 1-p) > 30 exercises the transformed-rejection branch.
    check_binomial_fit(200, 0.3, 300000, 46);
    check_binomial_fit(200, 0.7, 300000, 47);
    check_binomial_fit(150, 0.5, 300000, 48);
    check_binomial_fit(5000, 0.02, 200000, 49);
}

TEST_CASE("chain: sampler mean at a large-m point") {
    RngStream rng(50, 0);
    const uint64_t m = 100000;
    const double p = 0.37;
    const int draws = 20000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        sum += double(hyperprop::sample_binomial(m, p, rng));
    }
    double mean = sum / draws;
    double se = std::sqrt(double(m) * p * (1 - p) / draws);
    CHECK(std::fabs(mean - double(m) * p) < 5.0 * se);
}

TEST_CASE("chain: zero step probability dies at exactly y0") {
    RngStream rng(2, 0);
    auto traj = hyperprop::simulate_with(100, 3, 10, rng,
                                         [](uint64_t) { return 0.0; });
    REQUIRE(traj.hitting_time.has_value());
    CHECK(*traj.hitting_time == 3);
    CHECK(traj.survived_to == 3);
    REQUIRE(traj.steps.size() == 3);
    for (const auto& s : traj.steps) CHECK(s.z == 0);
    CHECK(traj.steps[0].y == 3);
    CHECK(traj.steps[2].y == 1);
}

TEST_CASE("chain: zero horizon runs no steps") {
    ModelParams params(64, 0.5, 1.0);
    RngStream rng(3, 0);
    auto traj = hyperprop::simulate(params, 1, 0, rng);
    CHECK(traj.steps.empty());
    CHECK(traj.survived_to == 0);
    CHECK_FALSE(traj.hitting_time.has_value());

    RngStream srng(3, 1);
    auto est = hyperprop::survival_prob(params, 1, 0, 500, srng);
    CHECK(est.estimate == 1.0);
    CHECK(est.std_error == 0.0);
    CHECK(est.trials == 500);
}

TEST_CASE("chain: forced-extinction survival estimate is exactly zero") {
    RngStream rng(4, 0);
    int survived = 0;
    for (int i = 0; i < 200; ++i) {
        RngStream child = rng.child(i);
        auto traj = hyperprop::simulate_with(50, 1, 2, child,
                                             [](uint64_t) { return 0.0; });
        if (!traj.hitting_time.has_value()) ++survived;
    }
    CHECK(survived == 0);
}

TEST_CASE("chain: input validation") {
    ModelParams params(64, 0.5, 1.0);
    RngStream rng(5, 0);
    CHECK_THROWS_AS(hyperprop::simulate(params, 0, 5, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(hyperprop::simulate(params, 65, 5, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(hyperprop::simulate(params, 1, 65, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(hyperprop::survival_prob(params, 1, 5, 0, rng),
                    std::invalid_argument);
}

TEST_CASE("chain: trajectories satisfy the update rule and bounds") {
    ModelParams params(256, 0.3, 1.2);
    RngStream rng(6, 0);
    int died = 0, survived = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        RngStream child = rng.child(rep);
        uint64_t horizon = 1 + child.next_below(200);
        uint64_t y0 = 1 + child.next_below(4);
        auto traj = hyperprop::simulate(params, y0, horizon, child);

        CHECK(traj.y0 == y0);
        CHECK(traj.survived_to == traj.steps.size());
        uint64_t y = y0;
        for (const auto& s : traj.steps) {
            CHECK(s.y == y);
            CHECK(s.y >= 1);
            CHECK(s.t + s.y <= 256);
            CHECK(s.z <= 256 - s.t - s.y);
            y = y + s.z - 1;
        }
        if (traj.hitting_time.has_value()) {
            ++died;
            CHECK(y == 0);
            CHECK(*traj.hitting_time == traj.steps.size());
            CHECK(*traj.hitting_time <= horizon);
        } else {
            ++survived;
            CHECK(y >= 1);
            CHECK(traj.steps.size() == horizon);
        }
    }
    CHECK(died > 100);
    CHECK(survived > 100);
}

TEST_CASE("chain: survival estimate is deterministic and matches a manual loop") {
    ModelParams params(512, 0.5, 1.0);
    RngStream r1(7, 0);
    RngStream r2(7, 0);
    auto a = hyperprop::survival_prob(params, 1, 20, 2000, r1);
    auto b = hyperprop::survival_prob(params, 1, 20, 2000, r2);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);

    RngStream r3(7, 0);
    int alive = 0;
    for (uint64_t i = 0; i < 2000; ++i) {
        RngStream child = r3.child(i);
        auto traj = hyperprop::simulate(params, 1, 20, child);
        if (!traj.hitting_time.has_value()) ++alive;
    }
    CHECK(a.estimate == double(alive) / 2000.0);
    double p_hat = a.estimate;
    CHECK(a.std_error ==
          doctest::Approx(std::sqrt(p_hat * (1 - p_hat) / 2000.0)));
}

TEST_CASE("chain: finite distribution constructor verifies its invariants") {
    CHECK_THROWS_AS(FiniteDistribution({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteDistribution({0, 1}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteDistribution({1, 0}, {0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(FiniteDistribution({0, 0}, {0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(FiniteDistribution({0, 1}, {0.5, -0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(FiniteDistribution({0, 1}, {0.5, 0.4}),
                    std::invalid_argument);
    CHECK_NOTHROW(FiniteDistribution({-2, 5}, {0.25, 0.75}));
}

TEST_CASE("chain: point mass and binomial constructors") {
    auto pm = FiniteDistribution::point_mass(-3);
    CHECK(pm.support() == std::vector<int64_t>{-3});
    CHECK(pm.probs() == std::vector<double>{1.0});
    CHECK(pm.cdf(-4) == 0.0);
    CHECK(pm.cdf(-3) == 1.0);

    auto b = FiniteDistribution::from_binomial(2, 0.5);
    REQUIRE(b.support() == std::vector<int64_t>{0, 1, 2});
    CHECK(b.probs()[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(b.probs()[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b.probs()[2] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(b.cdf(1) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(b.min() == 0);
    CHECK(b.max() == 2);

    auto degenerate = FiniteDistribution::from_binomial(5, 0.0);
    CHECK(degenerate.support() == std::vector<int64_t>{0});
    auto sure = FiniteDistribution::from_binomial(3, 1.0);
    CHECK(sure.support() == std::vector<int64_t>{3});
}

TEST_CASE("chain: dominance hand-checked pairs") {
    auto b2 = FiniteDistribution::from_binomial(2, 0.5);
    auto b1 = FiniteDistribution::from_binomial(1, 0.5);
    CHECK(hyperprop::dominates(b2, b1));
    CHECK_FALSE(hyperprop::dominates(b1, b2));

    auto lo = FiniteDistribution::from_binomial(1, 0.3);
    auto hi = FiniteDistribution::from_binomial(1, 0.6);
    CHECK(hyperprop::dominates(hi, lo));
    CHECK_FALSE(hyperprop::dominates(lo, hi));

    // Crossing CDFs dominate in neither direction.
    FiniteDistribution spread({0, 10}, {0.5, 0.5});
    FiniteDistribution middle({5}, {1.0});
    CHECK_FALSE(hyperprop::dominates(spread, middle));
    CHECK_FALSE(hyperprop::dominates(middle, spread));
}

TEST_CASE("chain: dominance is reflexive and respects shifts") {
    RngStream rng(8, 0);
    for (int rep = 0; rep < 50; ++rep) {
        RngStream child = rng.child(rep);
        size_t k = 1 + child.next_below(5);
        std::vector<int64_t> support;
        int64_t v = -int64_t(child.next_below(4));
        for (size_t i = 0; i < k; ++i) {
            support.push_back(v);
            v += 1 + int64_t(child.next_below(3));
        }
        std::vector<double> probs(k);
        double total = 0.0;
        for (auto& q : probs) {
            q = 0.05 + child.next_unit();
            total += q;
        }
        for (auto& q : probs) q /= total;
        FiniteDistribution d(support, probs);
        CHECK(hyperprop::dominates(d, d));

        std::vector<int64_t> shifted = support;
        for (auto& s : shifted) s += 2;
        FiniteDistribution up(shifted, probs);
        CHECK(hyperprop::dominates(up, d));
        CHECK_FALSE(hyperprop::dominates(d, up));
    }
}

TEST_CASE("chain: binomial families are monotone in m and p") {
    for (uint64_t m = 1; m <= 12; ++m) {
        for (uint64_t mp = 1; mp <= m; ++mp) {
            for (double p : {0.2, 0.5, 0.8}) {
                auto big = FiniteDistribution::from_binomial(m, p);
                auto small = FiniteDistribution::from_binomial(mp, p);
                CHECK(hyperprop::dominates(big, small));
            }
        }
        auto lo = FiniteDistribution::from_binomial(m, 0.35);
        auto hi = FiniteDistribution::from_binomial(m, 0.65);
        CHECK(hyperprop::dominates(hi, lo));
        if (m >= 1) CHECK_FALSE(hyperprop::dominates(lo, hi));
    }
}
