#pragma once

#include <cstdint>
#include <string>

namespace hyperprop {

// Parameter triple for the random hypergraph G(n, p2, p3): n vertices,
// each pair included as a 2-edge with probability p2 = (1-epsilon)/n,
// each triple included as a 3-edge with probability p3 = r/(n ln n).
class ModelParams {
public:
    ModelParams(uint64_t n, double epsilon, double r);

    uint64_t n() const { return n_; }
    double epsilon() const { return epsilon_; }
    double r() const { return r_; }

    double p2() const { return p2_; }
    double p3() const { return p3_; }

private:
    uint64_t n_;
    double epsilon_;
    double r_;
    double p2_;
    double p3_;
};

// Probability that a fixed unexplored vertex is activated while exploring
// one vertex at step t, i.e. 1 - (1-p2)(1-p3)^t, evaluated in log domain.
// Requires 0 <= t <= n.
double activation_probability(const ModelParams& params, uint64_t t);

// Mean-growth rate functions of the exploration process at rescaled time x:
//   lambda(x)  = 1 - epsilon + r x      (frontier drift)
//   lambda1(x) = 1 - epsilon + r x / 2  (used by the size-gap cutoff)
//   lambda2(x) = (1 - epsilon)/2 + r x / 6
struct LambdaValues {
    double lambda;
    double lambda1;
    double lambda2;
};
LambdaValues lambda_values(double epsilon, double r, double x);

// The connectivity exponent I(epsilon, r): integral over [0, epsilon/r] of
// 1 - lambda(w) + log(lambda(w)), with closed form
//   -(1/r) * (epsilon - epsilon^2/2 + (1-epsilon) ln(1-epsilon)),
// where (1-epsilon) ln(1-epsilon) := 0 at epsilon = 1. Always negative.
double threshold_integral(double epsilon, double r);

// Same quantity by adaptive Simpson quadrature of the defining integral
// (independent of the closed form). At epsilon = 1 the integrand has an
// integrable log singularity at 0; the lower limit is shifted to
// delta = 1e-12 and the exact tail integral of 1 - r w + log(r w) over
// [0, delta] is added back. Throws std::runtime_error if the evaluation
// budget is exhausted before reaching `tol`.
double threshold_integral_quadrature(double epsilon, double r,
                                     double tol = 1e-10);

// The r at which I(epsilon, r) equals `target` (target < 0):
// r* = (epsilon - epsilon^2/2 + (1-epsilon) ln(1-epsilon)) / (-target).
double critical_r(double epsilon, double target);

// Size-gap cutoff coefficient: max(1, lambda1^{-1}(10)) = max(1, 2(9+epsilon)/r).
// Components larger than k0 * ln n are expected to reach nearly full size.
double k0(double epsilon, double r);

// Tail-bound coefficient K1(c) = (e-1) * ((1-epsilon) k0 + c k0^2 / 2),
// bounding the total frontier mass accumulated over k0 * ln n steps.
double k1(double epsilon, double r, double c);

enum class Regime { Subcritical, NearCritical, Supercritical };

// Subcritical iff I < -1 - tol, Supercritical iff I > -1 + tol,
// NearCritical inside the band. tol >= 0.
Regime classify_regime(double integral, double tol = 0.05);

const char* regime_name(Regime regime);

struct ThresholdReport {
    double epsilon;
    double r;
    double integral;       // I(epsilon, r)
    Regime regime;
    double near_tol;       // band half-width used for classification
    double critical_r;     // r solving I(epsilon, r) = -1
    double k0;
    double c;              // the c used for k1 (default 2 - I)
    double k1;
};

// Sentinel for make_threshold_report's c parameter: use c = 2 - I.
inline constexpr double kDefaultC = -1.0;

ThresholdReport make_threshold_report(double epsilon, double r,
                                      double near_tol = 0.05,
                                      double c = kDefaultC);

}  // namespace hyperprop
