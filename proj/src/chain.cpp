#include "hyperprop/chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperprop {

namespace {

// CDF inversion; exact and one uniform per draw. q <= 0.5 expected.
uint64_t binomial_inversion(uint64_t m, double q, RngStream& rng) {
    const double md = static_cast<double>(m);
    const double ratio = q / (1.0 - q);
    double pmf = std::exp(md * std::log1p(-q));
    double cdf = pmf;
    const double u = rng.next_unit();
    uint64_t k = 0;
    while (u > cdf && k < m) {
        pmf *= ratio * (md - static_cast<double>(k)) / static_cast<double>(k + 1);
        ++k;
        cdf += pmf;
    }
    return k;
}

// Transformed rejection with squeeze (Hormann's BTRS), valid for m*q >= 10.
// The final acceptance test compares against the exact log pmf, so the
// sampler is exact; the squeeze only short-circuits a region proven to lie
// inside the acceptance set.
uint64_t binomial_btrs(uint64_t m, double q, RngStream& rng) {
    const double md = static_cast<double>(m);
    const double np = md * q;
    const double spq = std::sqrt(np * (1.0 - q));
    const double b = 1.15 + 2.53 * spq;
    const double a = -0.0873 + 0.0248 * b + 0.01 * q;
    const double c = np + 0.5;
    const double v_r = 0.92 - 4.2 / b;
    const double alpha = (2.83 + 5.1 / b) * spq;
    const double lpq = std::log(q / (1.0 - q));
    const double mode = std::floor((md + 1.0) * q);
    const double h = std::lgamma(mode + 1.0) + std::lgamma(md - mode + 1.0);
    for (;;) {
        const double u = rng.next_unit() - 0.5;
        const double v = rng.next_open_unit();
        const double us = 0.5 - std::fabs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + c);
        if (kd < 0.0 || kd > md) continue;
        if (us >= 0.07 && v <= v_r) return static_cast<uint64_t>(kd);
        const double lhs = std::log(v * alpha / (a / (us * us) + b));
        const double rhs = h - std::lgamma(kd + 1.0) - std::lgamma(md - kd + 1.0) +
                           (kd - mode) * lpq;
        if (lhs <= rhs) return static_cast<uint64_t>(kd);
    }
}

}  // namespace

uint64_t sample_binomial(uint64_t m, double p, RngStream& rng) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("binomial p must lie in [0, 1]");
    }
    if (m == 0 || p == 0.0) return 0;
    if (p == 1.0) return m;
    const bool flip = p > 0.5;
    const double q = flip ? 1.0 - p : p;
    const uint64_t k = (static_cast<double>(m) * q <= 30.0)
                           ? binomial_inversion(m, q, rng)
                           : binomial_btrs(m, q, rng);
    return flip ? m - k : k;
}

ChainTrajectory simulate_with(uint64_t n, uint64_t y0, uint64_t horizon,
                              RngStream& rng,
                              const std::function<double(uint64_t)>& step_prob) {
    if (y0 < 1) throw std::invalid_argument("chain requires y0 >= 1");
    if (y0 > n) throw std::invalid_argument("chain requires y0 <= n");
    if (horizon > n) throw std::invalid_argument("chain requires horizon <= n");
    ChainTrajectory traj;
    traj.y0 = y0;
    uint64_t y = y0;
    uint64_t t = 0;
    for (;;) {
        if (y == 0) {
            traj.hitting_time = t;
            break;
        }
        if (t == horizon) break;
        const uint64_t m = n - t - y;  // t + y <= n holds inductively
        const uint64_t z = sample_binomial(m, step_prob(t), rng);
        traj.steps.push_back({t, y, z});
        y = y + z - 1;
        ++t;
    }
    traj.survived_to = t;
    return traj;
}

ChainTrajectory simulate(const ModelParams& params, uint64_t y0,
                         uint64_t horizon, RngStream& rng) {
    return simulate_with(params.n(), y0, horizon, rng, [&](uint64_t t) {
        return activation_probability(params, t);
    });
}

SurvivalEstimate survival_prob(const ModelParams& params, uint64_t y0,
                               uint64_t horizon, uint64_t trials,
                               RngStream& rng) {
    if (trials < 1) throw std::invalid_argument("survival_prob requires trials >= 1");
    uint64_t alive = 0;
    for (uint64_t i = 0; i < trials; ++i) {
        RngStream stream = rng.child(i);
        if (!simulate(params, y0, horizon, stream).hitting_time) ++alive;
    }
    SurvivalEstimate out;
    out.trials = trials;
    out.estimate = static_cast<double>(alive) / static_cast<double>(trials);
    out.std_error =
        std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
    return out;
}

FiniteDistribution::FiniteDistribution(std::vector<int64_t> support,
                                       std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
    if (support_.empty() || support_.size() != probs_.size()) {
        throw std::invalid_argument(
            "distribution needs matching nonempty support and probabilities");
    }
    double sum = 0.0;
    for (size_t i = 0; i < support_.size(); ++i) {
        if (i > 0 && support_[i] <= support_[i - 1]) {
            throw std::invalid_argument(
                "distribution support must be strictly increasing");
        }
        if (!(probs_[i] > 0.0)) {
            throw std::invalid_argument("distribution probabilities must be positive");
        }
        sum += probs_[i];
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("distribution probabilities must sum to 1");
    }
}

FiniteDistribution FiniteDistribution::point_mass(int64_t value) {
    return FiniteDistribution({value}, {1.0});
}

FiniteDistribution FiniteDistribution::from_binomial(uint64_t m, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("binomial p must lie in [0, 1]");
    }
    if (m == 0 || p == 0.0) return point_mass(0);
    if (p == 1.0) return point_mass(static_cast<int64_t>(m));
    const double md = static_cast<double>(m);
    const double ratio = p / (1.0 - p);
    std::vector<int64_t> support;
    std::vector<double> probs;
    double pmf = std::exp(md * std::log1p(-p));
    for (uint64_t k = 0;; ++k) {
        if (pmf > 0.0) {  // drop underflowed tail entries
            support.push_back(static_cast<int64_t>(k));
            probs.push_back(pmf);
        }
        if (k == m) break;
        pmf *= ratio * (md - static_cast<double>(k)) / static_cast<double>(k + 1);
    }
    return FiniteDistribution(std::move(support), std::move(probs));
}

double FiniteDistribution::cdf(int64_t t) const {
    double acc = 0.0;
    for (size_t i = 0; i < support_.size() && support_[i] <= t; ++i) {
        acc += probs_[i];
    }
    return acc;
}

bool dominates(const FiniteDistribution& f, const FiniteDistribution& g) {
    const auto& fs = f.support();
    const auto& gs = g.support();
    size_t i = 0, j = 0;
    double cf = 0.0, cg = 0.0;
    while (i < fs.size() || j < gs.size()) {
        int64_t t;
        if (i < fs.size() && j < gs.size()) {
            t = std::min(fs[i], gs[j]);
        } else if (i < fs.size()) {
            t = fs[i];
        } else {
            t = gs[j];
        }
        if (i < fs.size() && fs[i] == t) cf += f.probs()[i++];
        if (j < gs.size() && gs[j] == t) cg += g.probs()[j++];
        if (cf > cg + 1e-12) return false;
    }
    return true;
}

}  // namespace hyperprop
