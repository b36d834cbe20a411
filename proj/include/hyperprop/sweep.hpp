#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperprop/propagation.hpp"

namespace hyperprop {

// Grid experiment description, loaded from a JSON document whose keys mirror
// the field names below. size_cap is the only optional field (absent or null
// selects default_size_cap). Unknown keys are rejected.
struct SweepConfig {
    std::vector<uint32_t> n_list;
    std::vector<double> epsilon_grid;
    std::vector<double> r_grid;
    uint64_t trials_per_cell = 0;
    uint64_t base_seed = 0;
    Engine engine = Engine::Closure;
    CensusMode start_mode = CensusMode::EdgeSeed;
    uint64_t census_samples = 0;
    std::optional<uint64_t> size_cap;
    std::string output_path;
};

SweepConfig parse_sweep_config(const std::string& json_text);
SweepConfig load_sweep_config(const std::string& path);

// Throws invalid_argument naming the violated invariant.
void validate(const SweepConfig& config);

struct SweepResult {
    uint64_t rows = 0;
    uint64_t errors = 0;  // rows whose trial failed (connected column "error")
};

extern const char* const kSweepCsvComment;
extern const char* const kSweepCsvHeader;

// Census cap used when the config leaves size_cap unset: components either
// stay logarithmic or span nearly everything, so capping at
// max(K1 * ln n, 0.95 n) loses nothing the census cares about.
uint64_t default_size_cap(uint32_t n, double epsilon, double r);

// One row per (cell, trial); cells enumerate n_list x epsilon_grid x r_grid
// in that nesting order. Trial (cell c, index t) runs on stream
// RngStream(base_seed, c).child(t) regardless of scheduling, and rows are
// emitted in task order, so output is byte-identical for any worker count
// (HYPERPROP_THREADS overrides the default of one worker per core).
// Per-trial failures become "error" rows; I/O failures throw runtime_error.
SweepResult run_sweep(const SweepConfig& config);

const char* engine_token(Engine engine);
const char* start_mode_token(CensusMode mode);

}  // namespace hyperprop
