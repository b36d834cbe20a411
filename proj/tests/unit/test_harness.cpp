#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "hyperprop/model.hpp"
#include "hyperprop/rng.hpp"
#include "hyperprop/sweep.hpp"

using hyperprop::CensusMode;
using hyperprop::Engine;
using hyperprop::SweepConfig;

namespace {

const char* kValidConfig = R"({
    "n_list": [16, 24],
    "epsilon_grid": [0.5],
    "r_grid": [1.0, 2.0],
    "trials_per_cell": 2,
    "base_seed": 77,
    "engine": "closure",
    "start_mode": "edge-seed",
    "census_samples": 20,
    "size_cap": null,
    "output_path": "harness_out.csv"
})";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Drops the trailing runtime_ms field from data rows so timing noise does not
// affect byte comparisons.
std::string strip_runtime(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line.rfind("n,", 0) != 0) {
            auto pos = line.rfind(',');
            REQUIRE(pos != std::string::npos);
            line.resize(pos);
        }
        out << line << '\n';
    }
    return out.str();
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
        rows.push_back(line);
    }
    return rows;
}

}  // namespace

TEST_CASE("harness: a full config document parses") {
    auto cfg = hyperprop::parse_sweep_config(kValidConfig);
    CHECK(cfg.n_list == std::vector<uint32_t>{16, 24});
    CHECK(cfg.epsilon_grid == std::vector<double>{0.5});
    CHECK(cfg.r_grid == std::vector<double>{1.0, 2.0});
    CHECK(cfg.trials_per_cell == 2);
    CHECK(cfg.base_seed == 77);
    CHECK(cfg.engine == Engine::Closure);
    CHECK(cfg.start_mode == CensusMode::EdgeSeed);
    CHECK(cfg.census_samples == 20);
    CHECK_FALSE(cfg.size_cap.has_value());
    CHECK(cfg.output_path == "harness_out.csv");
    CHECK_NOTHROW(hyperprop::validate(cfg));
}

TEST_CASE("harness: config parsing rejects malformed documents") {
    CHECK_THROWS_AS(hyperprop::parse_sweep_config("not json"),
                    std::invalid_argument);
    CHECK_THROWS_AS(hyperprop::parse_sweep_config("[1,2,3]"),
                    std::invalid_argument);

    auto doc = std::string(kValidConfig);
    auto with_unknown = doc;
    with_unknown.insert(with_unknown.rfind('}'), ", \"bogus_key\": 1");
    CHECK_THROWS_AS(hyperprop::parse_sweep_config(with_unknown),
                    std::invalid_argument);

    // Remove a required key.
    auto missing = doc;
    auto pos = missing.find("\"base_seed\": 77,");
    REQUIRE(pos != std::string::npos);
    missing.erase(pos, std::string("\"base_seed\": 77,").size());
    CHECK_THROWS_AS(hyperprop::parse_sweep_config(missing),
                    std::invalid_argument);

    auto bad_engine = doc;
    pos = bad_engine.find("\"closure\"");
    bad_engine.replace(pos, 9, "\"magic\"");
    CHECK_THROWS_AS(hyperprop::parse_sweep_config(bad_engine),
                    std::invalid_argument);
}

TEST_CASE("harness: engine accepts the process alias and round trips tokens") {
    auto doc = std::string(kValidConfig);
    auto pos = doc.find("\"closure\"");
    doc.replace(pos, 9, "\"explore\"");
    auto cfg = hyperprop::parse_sweep_config(doc);
    CHECK(cfg.engine == Engine::Explore);

    CHECK(std::string(hyperprop::engine_token(Engine::Closure)) == "closure");
    CHECK(std::string(hyperprop::engine_token(Engine::Explore)) ==
          "paper-process");
    CHECK(std::string(hyperprop::start_mode_token(CensusMode::SingleVertex)) ==
          "single-vertex");
    CHECK(std::string(hyperprop::start_mode_token(CensusMode::Pair)) == "pair");
    CHECK(std::string(hyperprop::start_mode_token(CensusMode::EdgeSeed)) ==
          "edge-seed");
}

TEST_CASE("harness: validation names the violated invariant") {
    auto cfg = hyperprop::parse_sweep_config(kValidConfig);

    auto broken = cfg;
    broken.n_list.clear();
    CHECK_THROWS_AS(hyperprop::validate(broken), std::invalid_argument);

    broken = cfg;
    broken.trials_per_cell = 0;
    CHECK_THROWS_AS(hyperprop::validate(broken), std::invalid_argument);

    broken = cfg;
    broken.output_path.clear();
    CHECK_THROWS_AS(hyperprop::validate(broken), std::invalid_argument);

    broken = cfg;
    broken.epsilon_grid = {1.5};
    CHECK_THROWS_AS(hyperprop::validate(broken), std::invalid_argument);

    broken = cfg;
    broken.r_grid = {-0.5};
    CHECK_THROWS_AS(hyperprop::validate(broken), std::invalid_argument);
}

TEST_CASE("harness: default size cap clamps to n or to the 0.95 floor") {
    CHECK(hyperprop::default_size_cap(64, 0.5, 1.0) == 64);
    // Large r shrinks K1 far enough that the 0.95 n floor binds.
    CHECK(hyperprop::default_size_cap(4096, 0.5, 100.0) == 3892);
}

TEST_CASE("harness: sweep output is deterministic and thread independent") {
    auto cfg = hyperprop::parse_sweep_config(kValidConfig);
    cfg.output_path = "harness_det_a.csv";
    auto res_a = hyperprop::run_sweep(cfg);
    CHECK(res_a.rows == 2 * 1 * 2 * 2);
    CHECK(res_a.errors == 0);

    cfg.output_path = "harness_det_b.csv";
    auto res_b = hyperprop::run_sweep(cfg);
    CHECK(res_b.rows == res_a.rows);

    auto a = read_file("harness_det_a.csv");
    auto b = read_file("harness_det_b.csv");
    CHECK(strip_runtime(a) == strip_runtime(b));

    REQUIRE(setenv("HYPERPROP_THREADS", "3", 1) == 0);
    cfg.output_path = "harness_det_c.csv";
    auto res_c = hyperprop::run_sweep(cfg);
    REQUIRE(unsetenv("HYPERPROP_THREADS") == 0);
    CHECK(res_c.rows == res_a.rows);
    auto c = read_file("harness_det_c.csv");
    CHECK(strip_runtime(a) == strip_runtime(c));

    std::remove("harness_det_a.csv");
    std::remove("harness_det_b.csv");
    std::remove("harness_det_c.csv");
}

TEST_CASE("harness: bogus thread override is rejected") {
    auto cfg = hyperprop::parse_sweep_config(kValidConfig);
    cfg.output_path = "harness_threads.csv";
    REQUIRE(setenv("HYPERPROP_THREADS", "zero", 1) == 0);
    CHECK_THROWS_AS(hyperprop::run_sweep(cfg), std::invalid_argument);
    REQUIRE(setenv("HYPERPROP_THREADS", "0", 1) == 0);
    CHECK_THROWS_AS(hyperprop::run_sweep(cfg), std::invalid_argument);
    REQUIRE(unsetenv("HYPERPROP_THREADS") == 0);
    std::remove("harness_threads.csv");
}

TEST_CASE("harness: row fields carry the documented quantities") {
    SweepConfig cfg;
    cfg.n_list = {16};
    cfg.epsilon_grid = {1.0};
    cfg.r_grid = {0.5};
    cfg.trials_per_cell = 3;
    cfg.base_seed = 99;
    cfg.engine = Engine::Closure;
    cfg.start_mode = CensusMode::EdgeSeed;
    cfg.census_samples = 0;
    cfg.output_path = "harness_fields.csv";
    auto res = hyperprop::run_sweep(cfg);
    CHECK(res.rows == 3);

    auto csv = read_file("harness_fields.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == std::string(hyperprop::kSweepCsvComment));
    std::getline(in, line);
    CHECK(line == std::string(hyperprop::kSweepCsvHeader));

    auto rows = data_rows(csv);
    REQUIRE(rows.size() == 3);
    for (uint64_t trial = 0; trial < rows.size(); ++trial) {
        auto f = split_csv(rows[trial]);
        REQUIRE(f.size() == 16);
        CHECK(f[0] == "16");
        CHECK(std::stod(f[1]) == 1.0);
        CHECK(std::stod(f[2]) == 0.5);
        CHECK(std::stod(f[3]) == hyperprop::threshold_integral(1.0, 0.5));
        CHECK(f[4] == "NearCritical");
        CHECK(f[5] == std::to_string(trial));
        // Trial streams are derived from (base_seed, cell index 0, trial).
        auto expect = hyperprop::RngStream(99, 0).child(trial).stream_seed();
        CHECK(f[6] == std::to_string(expect));
        CHECK(f[7] == "closure");
        CHECK(f[8] == "edge-seed");
        CHECK((f[9] == "0" || f[9] == "1"));
        CHECK(std::stoull(f[10]) <= 16);
        CHECK(f[11] == "0");  // census disabled
        double k0_log_n = std::stod(f[12]);
        CHECK(k0_log_n ==
              hyperprop::k0(1.0, 0.5) * std::log(16.0));
        CHECK(f[13] == "0");  // epsilon = 1: no 2-edges
        CHECK(std::stoull(f[14]) < 600);
    }
    std::remove("harness_fields.csv");
}

TEST_CASE("harness: subcritical cells decide disconnected") {
    SweepConfig cfg;
    cfg.n_list = {512};
    cfg.epsilon_grid = {1.0};
    cfg.r_grid = {0.1};
    cfg.trials_per_cell = 10;
    cfg.base_seed = 5;
    cfg.engine = Engine::Closure;
    cfg.start_mode = CensusMode::EdgeSeed;
    cfg.census_samples = 0;
    cfg.output_path = "harness_sub.csv";
    auto res = hyperprop::run_sweep(cfg);
    CHECK(res.rows == 10);
    CHECK(res.errors == 0);
    auto rows = data_rows(read_file("harness_sub.csv"));
    REQUIRE(rows.size() == 10);
    for (const auto& row : rows) {
        auto f = split_csv(row);
        CHECK(f[4] == "Subcritical");
        CHECK(f[9] == "0");
        CHECK(std::stoull(f[10]) < 512 / 2);
    }
    std::remove("harness_sub.csv");
}

TEST_CASE("harness: per-trial failures become error rows") {
    SweepConfig cfg;
    // C(n,3) for this n overflows 64 bits, so sampling throws inside the
    // trial; the sweep must keep going and mark the row.
    cfg.n_list = {5000000};
    cfg.epsilon_grid = {1.0};
    cfg.r_grid = {0.1};
    cfg.trials_per_cell = 2;
    cfg.base_seed = 1;
    cfg.engine = Engine::Closure;
    cfg.start_mode = CensusMode::EdgeSeed;
    cfg.census_samples = 0;
    cfg.output_path = "harness_err.csv";
    auto res = hyperprop::run_sweep(cfg);
    CHECK(res.rows == 2);
    CHECK(res.errors == 2);
    auto rows = data_rows(read_file("harness_err.csv"));
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        auto f = split_csv(row);
        REQUIRE(f.size() == 16);
        CHECK(f[9] == "error");
        CHECK(f[10].empty());
        CHECK(f[11].empty());
        CHECK(f[13].empty());
        CHECK(f[14].empty());
    }
    std::remove("harness_err.csv");
}

TEST_CASE("harness: unwritable output path throws") {
    SweepConfig cfg;
    cfg.n_list = {16};
    cfg.epsilon_grid = {0.5};
    cfg.r_grid = {1.0};
    cfg.trials_per_cell = 1;
    cfg.base_seed = 2;
    cfg.engine = Engine::Closure;
    cfg.start_mode = CensusMode::EdgeSeed;
    cfg.census_samples = 0;
    cfg.output_path = "no_such_dir/harness.csv";
    CHECK_THROWS_AS(hyperprop::run_sweep(cfg), std::runtime_error);
}
