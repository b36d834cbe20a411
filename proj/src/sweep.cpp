#include "hyperprop/sweep.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "hyperprop/chain.hpp"
#include "hyperprop/hypergraph.hpp"
#include "hyperprop/model.hpp"

namespace hyperprop {

const char* const kSweepCsvComment = "# hyperprop sweep csv v1";
const char* const kSweepCsvHeader =
    "n,epsilon,r,I,regime,trial_index,seed,engine,start_mode,connected,"
    "max_component,good_count,k0_log_n,edges2_count,edges3_count,runtime_ms";

const char* engine_token(Engine engine) {
    return engine == Engine::Closure ? "closure" : "paper-process";
}

const char* start_mode_token(CensusMode mode) {
    switch (mode) {
        case CensusMode::SingleVertex: return "single-vertex";
        case CensusMode::Pair: return "pair";
        default: return "edge-seed";
    }
}

namespace {

Engine parse_engine(const std::string& s) {
    if (s == "closure") return Engine::Closure;
    if (s == "paper-process" || s == "explore") return Engine::Explore;
    throw std::invalid_argument("engine must be \"closure\" or \"paper-process\"");
}

CensusMode parse_start_mode(const std::string& s) {
    if (s == "single-vertex") return CensusMode::SingleVertex;
    if (s == "pair") return CensusMode::Pair;
    if (s == "edge-seed") return CensusMode::EdgeSeed;
    throw std::invalid_argument(
        "start_mode must be \"single-vertex\", \"pair\" or \"edge-seed\"");
}

std::string fmt_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("sweep config is not valid JSON: ") +
                                    e.what());
    }
    static const char* const known[] = {
        "n_list",      "epsilon_grid",   "r_grid",   "trials_per_cell",
        "base_seed",   "engine",         "start_mode", "census_samples",
        "size_cap",    "output_path"};
    try {
        if (!doc.is_object()) {
            throw std::invalid_argument("sweep config must be a JSON object");
        }
        for (const auto& item : doc.items()) {
            bool ok = false;
            for (const char* k : known) ok = ok || item.key() == k;
            if (!ok) {
                throw std::invalid_argument("unknown sweep config key: " + item.key());
            }
        }
        SweepConfig cfg;
        cfg.n_list = doc.at("n_list").get<std::vector<uint32_t>>();
        cfg.epsilon_grid = doc.at("epsilon_grid").get<std::vector<double>>();
        cfg.r_grid = doc.at("r_grid").get<std::vector<double>>();
        cfg.trials_per_cell = doc.at("trials_per_cell").get<uint64_t>();
        cfg.base_seed = doc.at("base_seed").get<uint64_t>();
        cfg.engine = parse_engine(doc.at("engine").get<std::string>());
        cfg.start_mode = parse_start_mode(doc.at("start_mode").get<std::string>());
        cfg.census_samples = doc.at("census_samples").get<uint64_t>();
        if (doc.contains("size_cap") && !doc.at("size_cap").is_null()) {
            cfg.size_cap = doc.at("size_cap").get<uint64_t>();
        }
        cfg.output_path = doc.at("output_path").get<std::string>();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad sweep config field: ") + e.what());
    }
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open sweep config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_config(ss.str());
}

void validate(const SweepConfig& config) {
    if (config.n_list.empty() || config.epsilon_grid.empty() ||
        config.r_grid.empty()) {
        throw std::invalid_argument("sweep grids must be nonempty");
    }
    if (config.trials_per_cell < 1) {
        throw std::invalid_argument("sweep requires trials_per_cell >= 1");
    }
    if (config.output_path.empty()) {
        throw std::invalid_argument("sweep requires an output_path");
    }
    for (uint32_t n : config.n_list) {
        for (double eps : config.epsilon_grid) {
            for (double r : config.r_grid) {
                ModelParams check(n, eps, r);  // throws on invalid cells
                (void)check;
            }
        }
    }
}

uint64_t default_size_cap(uint32_t n, double epsilon, double r) {
    const double integral = threshold_integral(epsilon, r);
    const double log_cap =
        k1(epsilon, r, 2.0 - integral) * std::log(static_cast<double>(n));
    const double cap = std::max(log_cap, 0.95 * static_cast<double>(n));
    return static_cast<uint64_t>(
        std::min(std::ceil(cap), static_cast<double>(n)));
}

namespace {

struct Cell {
    uint32_t n;
    double epsilon;
    double r;
    uint64_t index;
};

unsigned worker_count() {
    if (const char* env = std::getenv("HYPERPROP_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > 1024) {
            throw std::invalid_argument(
                "HYPERPROP_THREADS must be an integer in [1, 1024]");
        }
        return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::string run_trial(const SweepConfig& config, const Cell& cell,
                      uint64_t trial) {
    const auto start = std::chrono::steady_clock::now();
    const RngStream trial_stream =
        RngStream(config.base_seed, cell.index).child(trial);
    const double integral = threshold_integral(cell.epsilon, cell.r);
    const double k0_log_n =
        k0(cell.epsilon, cell.r) * std::log(static_cast<double>(cell.n));

    std::ostringstream row;
    row << cell.n << ',' << fmt_double(cell.epsilon) << ',' << fmt_double(cell.r)
        << ',' << fmt_double(integral) << ','
        << regime_name(classify_regime(integral)) << ',' << trial << ','
        << trial_stream.stream_seed() << ',' << engine_token(config.engine) << ','
        << start_mode_token(config.start_mode) << ',';

    auto elapsed_ms = [&start] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    };
    try {
        const ModelParams params(cell.n, cell.epsilon, cell.r);
        RngStream gen_rng = trial_stream.child(0);
        const Hypergraph g = sample_hypergraph(params, gen_rng);
        const ConnectivityResult conn = decide_connectivity(g);
        uint64_t good = 0;
        if (config.census_samples > 0) {
            RngStream census_rng = trial_stream.child(1);
            const uint64_t cap =
                config.size_cap ? *config.size_cap
                                : default_size_cap(cell.n, cell.epsilon, cell.r);
            good = run_census(g, params, config.census_samples, config.start_mode,
                              config.engine, census_rng, cap)
                       .good_count;
        }
        row << (conn.connected ? 1 : 0) << ',' << conn.max_closure_size << ','
            << good << ',' << fmt_double(k0_log_n) << ',' << g.edges2().size()
            << ',' << g.edges3().size() << ',' << elapsed_ms();
        return row.str();
    } catch (const std::exception&) {
        row << "error,,," << fmt_double(k0_log_n) << ",,," << elapsed_ms();
        return row.str();
    }
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
    validate(config);
    std::vector<Cell> cells;
    for (uint32_t n : config.n_list) {
        for (double eps : config.epsilon_grid) {
            for (double r : config.r_grid) {
                cells.push_back({n, eps, r, cells.size()});
            }
        }
    }
    const uint64_t total = cells.size() * config.trials_per_cell;
    std::vector<std::string> rows(total);
    std::atomic<uint64_t> next{0};

    auto work = [&] {
        for (;;) {
            const uint64_t i = next.fetch_add(1);
            if (i >= total) break;
            rows[i] = run_trial(config, cells[i / config.trials_per_cell],
                                i % config.trials_per_cell);
        }
    };
    const unsigned workers =
        static_cast<unsigned>(std::min<uint64_t>(worker_count(), total));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open sweep output: " + config.output_path);
    }
    out << kSweepCsvComment << '\n' << kSweepCsvHeader << '\n';
    SweepResult result;
    for (const auto& row : rows) {
        out << row << '\n';
        ++result.rows;
        if (row.find(",error,") != std::string::npos) ++result.errors;
    }
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing sweep output: " +
                                 config.output_path);
    }
    return result;
}

}  // namespace hyperprop
