#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hyperprop/chain.hpp"

namespace hyperprop {

// Exhaustive check of the cycle inequality for i.i.d. X_1..X_n:
//   Pr(B)/n <= Pr(A) <= Pr(B)
// with A = {every prefix sum >= 0} and B = {total sum >= 0}.
struct CycleLemmaReport {
    uint64_t n = 0;
    double pr_all_prefixes = 0.0;  // Pr(A)
    double pr_total = 0.0;         // Pr(B)
    uint64_t tuples = 0;           // outcome tuples enumerated
    bool holds = false;
};

// Enumerates all |support|^n outcome tuples. Throws when that count exceeds
// the budget.
CycleLemmaReport verify_cycle_lemma(const FiniteDistribution& dist, uint64_t n,
                                    uint64_t budget = 65536);

// Coupled pair of additive processes
//   S_{k+1} = S_k + X_k - q,  X_k | S_k ~ upper(k, S_k)
//   T_{k+1} = T_k + Y_k - q,  Y_k | T_k ~ lower(k, T_k)
// starting at S_0 = T_0 = start. Subject to two hypotheses
//   1. lower(k, z).cdf(l) <= lower(k, z-1).cdf(l+1) for all k, z, l
//   2. dominates(upper(k, z), lower(k, z)) whenever z <= margin - k*q
// and thresholds l_k <= margin - k*q, the survival probability
// Pr[S_k > l_k for all k] is at least the same probability for T.
struct DominanceConfig {
    std::string name;
    std::function<FiniteDistribution(uint64_t k, int64_t z)> upper;  // F family
    std::function<FiniteDistribution(uint64_t k, int64_t z)> lower;  // G family
    uint64_t decrement = 1;           // q
    int64_t start = 1;                // S_0 = T_0
    int64_t margin = 0;               // M
    std::vector<int64_t> thresholds;  // l_1..l_n
};

struct DominanceReport {
    std::string name;
    bool hypotheses_met = false;
    std::string failure;       // first violated hypothesis, empty when met
    double upper_prob = 0.0;   // Pr[S_k > l_k for all k]
    double lower_prob = 0.0;   // Pr[T_k > l_k for all k]
    bool holds = false;
    uint64_t states_checked = 0;
};

// Exact dynamic programming over state distributions, never Monte-Carlo.
// Hypotheses are pre-checked over every state reachable within the horizon;
// an unmet hypothesis yields hypotheses_met=false rather than a violation.
DominanceReport verify_dominance_lemma(const DominanceConfig& config);

// Shipped configurations exercised by tests and the verify-lemmas command.
std::vector<DominanceConfig> default_dominance_configs();

std::string to_text(const CycleLemmaReport& report, const std::string& label);
std::string to_kv(const CycleLemmaReport& report, const std::string& label);
std::string to_text(const DominanceReport& report);
std::string to_kv(const DominanceReport& report);

}  // namespace hyperprop
