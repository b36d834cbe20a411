#include "hyperprop/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hyperprop {

namespace {

constexpr double kTol = 1e-12;

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

}  // namespace

CycleLemmaReport verify_cycle_lemma(const FiniteDistribution& dist, uint64_t n,
                                    uint64_t budget) {
    if (n < 1 || n > 16) {
        throw std::invalid_argument("cycle lemma verifier requires 1 <= n <= 16");
    }
    const auto& sup = dist.support();
    const auto& pr = dist.probs();
    const size_t s = sup.size();
    uint64_t tuples = 1;
    for (uint64_t i = 0; i < n; ++i) {
        if (tuples > budget / s) {
            throw std::invalid_argument("cycle lemma enumeration budget exceeded");
        }
        tuples *= s;
    }

    double pr_a = 0.0, pr_b = 0.0;
    std::vector<size_t> idx(n, 0);
    for (;;) {
        double prob = 1.0;
        int64_t sum = 0;
        bool prefixes_ok = true;
        for (uint64_t i = 0; i < n; ++i) {
            sum += sup[idx[i]];
            prob *= pr[idx[i]];
            if (sum < 0) prefixes_ok = false;
        }
        if (prefixes_ok) pr_a += prob;
        if (sum >= 0) pr_b += prob;

        uint64_t pos = n;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < s) break;
            idx[pos] = 0;
            if (pos == 0) goto done;
        }
    }
done:
    CycleLemmaReport report;
    report.n = n;
    report.pr_all_prefixes = pr_a;
    report.pr_total = pr_b;
    report.tuples = tuples;
    report.holds = pr_b / static_cast<double>(n) <= pr_a + kTol && pr_a <= pr_b + kTol;
    return report;
}

namespace {

void check_family_dist(const FiniteDistribution& d, const char* which,
                       std::string& failure) {
    if (!failure.empty()) return;
    if (d.min() < 0) {
        failure = std::string(which) + " family takes a negative value";
    } else if (d.support().size() > 4) {
        throw std::invalid_argument("dominance verifier requires supports of size <= 4");
    }
}

}  // namespace

DominanceReport verify_dominance_lemma(const DominanceConfig& config) {
    const uint64_t n = config.thresholds.size();
    if (n < 1 || n > 4) {
        throw std::invalid_argument(
            "dominance verifier requires 1 to 4 threshold steps");
    }
    if (!config.upper || !config.lower) {
        throw std::invalid_argument("dominance config needs both families");
    }
    const int64_t q = static_cast<int64_t>(config.decrement);
    DominanceReport report;
    report.name = config.name;

    if (config.margin < config.start) {
        report.failure = "margin below the start value";
        return report;
    }
    for (uint64_t k = 1; k <= n; ++k) {
        if (config.thresholds[k - 1] > config.margin - static_cast<int64_t>(k) * q) {
            report.failure = "threshold above margin - k*q";
            return report;
        }
    }

    // Reachable states per step, ignoring thresholds (superset of what the
    // truncated processes visit).
    std::vector<std::set<int64_t>> reach(n + 1);
    reach[0].insert(config.start);
    for (uint64_t k = 0; k < n; ++k) {
        for (int64_t z : reach[k]) {
            const FiniteDistribution fu = config.upper(k, z);
            const FiniteDistribution fl = config.lower(k, z);
            check_family_dist(fu, "upper", report.failure);
            check_family_dist(fl, "lower", report.failure);
            if (!report.failure.empty()) return report;
            for (int64_t x : fu.support()) reach[k + 1].insert(z + x - q);
            for (int64_t x : fl.support()) reach[k + 1].insert(z + x - q);
        }
    }

    // Hypothesis 1: lowering the state by one and shifting the argument by
    // one can only raise the lower family's cdf.
    for (uint64_t k = 0; k < n; ++k) {
        for (int64_t z : reach[k]) {
            const FiniteDistribution cur = config.lower(k, z);
            const FiniteDistribution prev = config.lower(k, z - 1);
            check_family_dist(prev, "lower", report.failure);
            if (!report.failure.empty()) return report;
            for (int64_t s : cur.support()) {
                if (cur.cdf(s) > prev.cdf(s + 1) + kTol) {
                    report.failure = "shift condition fails on the lower family";
                    return report;
                }
            }
        }
    }

    // Hypothesis 2: the upper family dominates the lower one on every
    // reachable state within the margin window.
    for (uint64_t k = 0; k < n; ++k) {
        const int64_t cap = config.margin - static_cast<int64_t>(k) * q;
        for (int64_t z : reach[k]) {
            if (z > cap) continue;
            if (!dominates(config.upper(k, z), config.lower(k, z))) {
                report.failure = "upper family does not dominate the lower one";
                return report;
            }
        }
    }
    report.hypotheses_met = true;

    // Exact DP over truncated state distributions.
    auto run = [&](const std::function<FiniteDistribution(uint64_t, int64_t)>& fam) {
        std::map<int64_t, double> cur{{config.start, 1.0}};
        for (uint64_t k = 0; k < n; ++k) {
            std::map<int64_t, double> next;
            for (const auto& [z, pz] : cur) {
                const FiniteDistribution d = fam(k, z);
                const auto& sup = d.support();
                for (size_t i = 0; i < sup.size(); ++i) {
                    const int64_t to = z + sup[i] - q;
                    if (to > config.thresholds[k]) next[to] += pz * d.probs()[i];
                }
                ++report.states_checked;
            }
            cur = std::move(next);
        }
        double total = 0.0;
        for (const auto& [z, pz] : cur) total += pz;
        return total;
    };
    report.upper_prob = run(config.upper);
    report.lower_prob = run(config.lower);
    report.holds = report.upper_prob >= report.lower_prob - kTol;
    return report;
}

std::vector<DominanceConfig> default_dominance_configs() {
    std::vector<DominanceConfig> out;

    DominanceConfig equal;
    equal.name = "equal-families";
    equal.upper = [](uint64_t, int64_t) {
        return FiniteDistribution::from_binomial(2, 0.5);
    };
    equal.lower = equal.upper;
    equal.decrement = 1;
    equal.start = 1;
    equal.margin = 7;
    equal.thresholds = {0, 0, 0};
    out.push_back(std::move(equal));

    DominanceConfig split;
    split.name = "separated-binomials";
    split.upper = [](uint64_t, int64_t) {
        return FiniteDistribution::from_binomial(2, 0.6);
    };
    split.lower = [](uint64_t, int64_t) {
        return FiniteDistribution::from_binomial(2, 0.4);
    };
    split.decrement = 1;
    split.start = 1;
    split.margin = 7;
    split.thresholds = {0, 0, 0};
    out.push_back(std::move(split));

    DominanceConfig statedep;
    statedep.name = "state-dependent";
    auto base_p = [](int64_t z) {
        return std::clamp(0.3 + 0.1 * static_cast<double>(z), 0.0, 0.9);
    };
    statedep.upper = [base_p](uint64_t, int64_t z) {
        return FiniteDistribution::from_binomial(2, base_p(z) + 0.1);
    };
    statedep.lower = [base_p](uint64_t, int64_t z) {
        return FiniteDistribution::from_binomial(2, base_p(z));
    };
    statedep.decrement = 1;
    statedep.start = 1;
    statedep.margin = 7;
    statedep.thresholds = {0, 0, 0};
    out.push_back(std::move(statedep));

    return out;
}

std::string to_text(const CycleLemmaReport& r, const std::string& label) {
    std::ostringstream os;
    os << "cycle inequality [" << label << "]: n=" << r.n
       << " Pr(prefixes>=0)=" << fmt(r.pr_all_prefixes)
       << " Pr(total>=0)=" << fmt(r.pr_total) << " bound=["
       << fmt(r.pr_total / static_cast<double>(r.n)) << ", " << fmt(r.pr_total)
       << "] holds=" << (r.holds ? "yes" : "NO") << " (" << r.tuples << " tuples)";
    return os.str();
}

std::string to_kv(const CycleLemmaReport& r, const std::string& label) {
    std::ostringstream os;
    os << "cycle_lemma label=" << label << " n=" << r.n
       << " pr_all_prefixes=" << fmt(r.pr_all_prefixes)
       << " pr_total=" << fmt(r.pr_total) << " tuples=" << r.tuples
       << " holds=" << (r.holds ? 1 : 0);
    return os.str();
}

std::string to_text(const DominanceReport& r) {
    std::ostringstream os;
    os << "dominance [" << r.name << "]: ";
    if (!r.hypotheses_met) {
        os << "hypotheses unmet (" << r.failure << ")";
        return os.str();
    }
    os << "Pr(upper survives)=" << fmt(r.upper_prob)
       << " Pr(lower survives)=" << fmt(r.lower_prob)
       << " holds=" << (r.holds ? "yes" : "NO") << " (" << r.states_checked
       << " states)";
    return os.str();
}

std::string to_kv(const DominanceReport& r) {
    std::ostringstream os;
    os << "dominance_lemma name=" << r.name
       << " hypotheses_met=" << (r.hypotheses_met ? 1 : 0);
    if (!r.hypotheses_met) {
        os << " failure=\"" << r.failure << "\"";
        return os.str();
    }
    os << " upper_prob=" << fmt(r.upper_prob) << " lower_prob=" << fmt(r.lower_prob)
       << " states=" << r.states_checked << " holds=" << (r.holds ? 1 : 0);
    return os.str();
}

}  // namespace hyperprop
