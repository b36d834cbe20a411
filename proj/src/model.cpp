#include "hyperprop/model.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperprop {

namespace {

void validate_epsilon_r(double epsilon, double r) {
    if (!(epsilon > 0.0) || !(epsilon <= 1.0)) {
        throw std::invalid_argument(
            "epsilon must lie in (0, 1], got " + std::to_string(epsilon));
    }
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("r must be positive and finite, got " +
                                    std::to_string(r));
    }
}

// epsilon - epsilon^2/2 + (1-epsilon) ln(1-epsilon), the numerator of -I*r.
// Strictly positive on (0, 1]; the log term vanishes at epsilon = 1.
double integral_numerator(double epsilon) {
    if (epsilon == 1.0) return 0.5;
    return epsilon - 0.5 * epsilon * epsilon +
           (1.0 - epsilon) * std::log1p(-epsilon);
}

}  // namespace

ModelParams::ModelParams(uint64_t n, double epsilon, double r)
    : n_(n), epsilon_(epsilon), r_(r) {
    if (n < 3) {
        throw std::invalid_argument("n must be at least 3, got " +
                                    std::to_string(n));
    }
    validate_epsilon_r(epsilon, r);
    double nd = static_cast<double>(n);
    p2_ = (1.0 - epsilon) / nd;
    p3_ = r / (nd * std::log(nd));
    if (!(p3_ < 1.0)) {
        throw std::invalid_argument(
            "p3 = r/(n ln n) must be below 1; r too large for this n");
    }
}

double activation_probability(const ModelParams& params, uint64_t t) {
    if (t > params.n()) {
        throw std::out_of_range("step t exceeds horizon n: t = " +
                                std::to_string(t));
    }
    if (t == 0) return params.p2();
    double log_term = std::log1p(-params.p2()) +
                      static_cast<double>(t) * std::log1p(-params.p3());
    return -std::expm1(log_term);
}

LambdaValues lambda_values(double epsilon, double r, double x) {
    validate_epsilon_r(epsilon, r);
    double base = 1.0 - epsilon;
    return LambdaValues{base + r * x, base + 0.5 * r * x,
                        0.5 * base + r * x / 6.0};
}

double threshold_integral(double epsilon, double r) {
    validate_epsilon_r(epsilon, r);
    return -integral_numerator(epsilon) / r;
}

namespace {

struct QuadratureState {
    double epsilon;
    double r;
    double abs_tol;      // total error budget
    double total_len;    // length of the outer interval
    long evals = 0;
    long max_evals = 2'000'000;

    double f(double w) {
        ++evals;
        double lam = 1.0 - epsilon + r * w;
        return 1.0 - lam + std::log(lam);
    }
};

// Adaptive Simpson with an error budget proportional to subinterval length,
// so deep refinement near one endpoint cannot starve the tolerance.
double simpson_recurse(QuadratureState& st, double a, double fa, double m,
                       double fm, double b, double fb, double whole,
                       int depth) {
    if (st.evals > st.max_evals) {
        throw std::runtime_error(
            "threshold quadrature failed to converge within evaluation "
            "budget");
    }
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = st.f(lm);
    double frm = st.f(rm);
    double h = b - a;
    double left = (h / 12.0) * (fa + 4.0 * flm + fm);
    double right = (h / 12.0) * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    double budget = 15.0 * st.abs_tol * (h / st.total_len);
    if (depth <= 0 || std::fabs(delta) <= budget) {
        if (depth <= 0 && std::fabs(delta) > budget) {
            throw std::runtime_error(
                "threshold quadrature failed to converge (depth limit)");
        }
        return left + right + delta / 15.0;
    }
    return simpson_recurse(st, a, fa, lm, flm, m, fm, left, depth - 1) +
           simpson_recurse(st, m, fm, rm, frm, b, fb, right, depth - 1);
}

}  // namespace

double threshold_integral_quadrature(double epsilon, double r, double tol) {
    validate_epsilon_r(epsilon, r);
    if (!(tol > 0.0)) {
        throw std::invalid_argument("quadrature tol must be positive");
    }
    double hi = epsilon / r;
    double lo = 0.0;
    double tail = 0.0;
    if (epsilon == 1.0) {
        // log(r w) is integrable but unbounded at 0: integrate the exact
        // tail of 1 - r w + log(r w) over [0, delta] analytically.
        const double delta = 1e-12;
        tail = delta * std::log(r * delta) - 0.5 * r * delta * delta;
        lo = delta;
    }
    QuadratureState st{epsilon, r, tol, hi - lo};
    double fa = st.f(lo);
    double fb = st.f(hi);
    double mid = 0.5 * (lo + hi);
    double fm = st.f(mid);
    double whole = ((hi - lo) / 6.0) * (fa + 4.0 * fm + fb);
    return tail + simpson_recurse(st, lo, fa, mid, fm, hi, fb, whole, 64);
}

double critical_r(double epsilon, double target) {
    if (!(epsilon > 0.0) || !(epsilon <= 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0, 1]");
    }
    if (!(target < 0.0)) {
        throw std::invalid_argument(
            "critical_r target must be negative (I is always negative)");
    }
    return integral_numerator(epsilon) / (-target);
}

double k0(double epsilon, double r) {
    validate_epsilon_r(epsilon, r);
    return std::max(1.0, 2.0 * (9.0 + epsilon) / r);
}

double k1(double epsilon, double r, double c) {
    validate_epsilon_r(epsilon, r);
    if (!(c >= 0.0)) {
        throw std::invalid_argument("k1 requires c >= 0");
    }
    double K = k0(epsilon, r);
    return (std::exp(1.0) - 1.0) * ((1.0 - epsilon) * K + 0.5 * c * K * K);
}

Regime classify_regime(double integral, double tol) {
    if (!(tol >= 0.0)) {
        throw std::invalid_argument("regime tol must be nonnegative");
    }
    if (integral < -1.0 - tol) return Regime::Subcritical;
    if (integral > -1.0 + tol) return Regime::Supercritical;
    return Regime::NearCritical;
}

const char* regime_name(Regime regime) {
    switch (regime) {
        case Regime::Subcritical: return "Subcritical";
        case Regime::NearCritical: return "NearCritical";
        case Regime::Supercritical: return "Supercritical";
    }
    return "?";
}

ThresholdReport make_threshold_report(double epsilon, double r,
                                      double near_tol, double c) {
    double integral = threshold_integral(epsilon, r);
    if (c == kDefaultC) c = 2.0 - integral;
    ThresholdReport rep;
    rep.epsilon = epsilon;
    rep.r = r;
    rep.integral = integral;
    rep.regime = classify_regime(integral, near_tol);
    rep.near_tol = near_tol;
    rep.critical_r = critical_r(epsilon, -1.0);
    rep.k0 = k0(epsilon, r);
    rep.c = c;
    rep.k1 = k1(epsilon, r, c);
    return rep;
}

}  // namespace hyperprop
