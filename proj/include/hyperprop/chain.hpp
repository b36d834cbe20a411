#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hyperprop/model.hpp"
#include "hyperprop/rng.hpp"

namespace hyperprop {

// One exact draw from Binomial(m, p). CDF inversion while m*min(p,1-p) <= 30,
// exact transformed rejection above. Bit-reproducible given the stream.
uint64_t sample_binomial(uint64_t m, double p, RngStream& rng);

struct ChainStep {
    uint64_t t;  // step index
    uint64_t y;  // active count before the step
    uint64_t z;  // fresh activations sampled this step
};

// Graph-free trajectory of the active-count process:
//   Y_{t+1} = Y_t + Z_t - 1,  Z_t ~ Binomial(n - t - Y_t, p(t))
// where p(t) is the per-vertex activation probability at step t.
struct ChainTrajectory {
    uint64_t y0 = 0;
    std::vector<ChainStep> steps;
    std::optional<uint64_t> hitting_time;  // first t with Y_t = 0
    uint64_t survived_to = 0;              // steps executed before stopping
};

// Core driver with an arbitrary per-step success probability.
ChainTrajectory simulate_with(uint64_t n, uint64_t y0, uint64_t horizon,
                              RngStream& rng,
                              const std::function<double(uint64_t)>& step_prob);

// Binds step_prob to the model's activation probability.
ChainTrajectory simulate(const ModelParams& params, uint64_t y0,
                         uint64_t horizon, RngStream& rng);

struct SurvivalEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    uint64_t trials = 0;
};

// Fraction of independent trajectories that never hit zero before the
// horizon. Trial i runs on rng.child(i), so the estimate is independent of
// evaluation order.
SurvivalEstimate survival_prob(const ModelParams& params, uint64_t y0,
                               uint64_t horizon, uint64_t trials,
                               RngStream& rng);

// Probability distribution on a finite set of integers. Support is strictly
// increasing, probabilities are positive and sum to 1 within 1e-12.
class FiniteDistribution {
  public:
    FiniteDistribution(std::vector<int64_t> support, std::vector<double> probs);

    static FiniteDistribution point_mass(int64_t value);
    static FiniteDistribution from_binomial(uint64_t m, double p);

    const std::vector<int64_t>& support() const { return support_; }
    const std::vector<double>& probs() const { return probs_; }
    int64_t min() const { return support_.front(); }
    int64_t max() const { return support_.back(); }

    double cdf(int64_t t) const;  // Pr[X <= t]

  private:
    std::vector<int64_t> support_;
    std::vector<double> probs_;
};

// True iff cdf_f(t) <= cdf_g(t) for every t (f stochastically at least g).
// Non-strict comparison with 1e-12 slack for float roundoff.
bool dominates(const FiniteDistribution& f, const FiniteDistribution& g);

}  // namespace hyperprop
