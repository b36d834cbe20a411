#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "hyperprop/chain.hpp"
#include "hyperprop/hypergraph.hpp"
#include "hyperprop/lemmas.hpp"
#include "hyperprop/model.hpp"
#include "hyperprop/propagation.hpp"
#include "hyperprop/sweep.hpp"

namespace {

using namespace hyperprop;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNotConnected = 3;
constexpr int kExitInternal = 4;

std::string edge_vertices(const Hypergraph& g, EdgeRef ref) {
    std::ostringstream os;
    if (ref.arity == 2) {
        const Edge2& e = g.edges2()[ref.index];
        os << e.u << ' ' << e.v;
    } else {
        const Edge3& e = g.edges3()[ref.index];
        os << e.u << ' ' << e.v << ' ' << e.w;
    }
    return os.str();
}

void write_certificate(const Hypergraph& g, const PropagationRun& run,
                       std::ostream& out) {
    out << "step 0: e" << run.seed.size() << " ->";
    for (uint32_t v : run.seed) out << ' ' << v;
    out << '\n';
    uint64_t k = 1;
    for (const auto& entry : run.sequence) {
        out << "step " << k++ << ": e" << unsigned(entry.edge.arity) << ' '
            << edge_vertices(g, entry.edge) << " -> " << entry.vertex << '\n';
    }
}

void write_obstruction(const ConnectivityResult& res, std::ostream& out) {
    out << "obstruction sets=" << res.obstruction.size()
        << " max_closure=" << res.max_closure_size << '\n';
    for (const auto& set : res.obstruction) {
        out << "closed:";
        for (uint32_t v : set) out << ' ' << v;
        out << '\n';
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

int cmd_gen(uint32_t n, double epsilon, double r, uint64_t seed,
            const std::string& out_path) {
    const ModelParams params(n, epsilon, r);
    RngStream rng(seed, 0);
    const Hypergraph g = sample_hypergraph(params, rng);
    g.save_file(out_path);
    std::cout << "wrote " << out_path << ": n=" << g.n()
              << " edges2=" << g.edges2().size() << " edges3=" << g.edges3().size()
              << '\n';
    return kExitOk;
}

int cmd_check(const std::string& in_path, const std::string& cert_path) {
    const Hypergraph g = Hypergraph::load_file(in_path);
    ConnectivityOptions opts;
    opts.collect_obstruction = !cert_path.empty();
    const ConnectivityResult res = decide_connectivity(g, opts);
    if (res.connected) {
        const PropagationRun& run = *res.witness;
        std::cout << "propagation connected: seed edge of " << run.seed.size()
                  << " vertices plus " << run.sequence.size() << " steps covers n="
                  << g.n() << '\n';
        if (!cert_path.empty()) {
            auto out = open_out(cert_path);
            write_certificate(g, run, out);
        }
        return kExitOk;
    }
    std::cout << "not propagation connected: " << res.obstruction.size()
              << " maximal closed sets, largest closure " << res.max_closure_size
              << " of n=" << g.n() << '\n';
    if (!cert_path.empty()) {
        auto out = open_out(cert_path);
        write_obstruction(res, out);
    }
    return kExitNotConnected;
}

int cmd_census(const std::string& in_path, uint32_t n, double epsilon, double r,
               uint64_t gen_seed, uint64_t census_seed, uint64_t samples,
               const std::string& mode_tok, const std::string& engine_tok,
               uint64_t size_cap, const std::string& csv_path) {
    CensusMode mode;
    if (mode_tok == "single-vertex") mode = CensusMode::SingleVertex;
    else if (mode_tok == "pair") mode = CensusMode::Pair;
    else if (mode_tok == "edge-seed") mode = CensusMode::EdgeSeed;
    else throw std::invalid_argument("unknown census mode: " + mode_tok);
    Engine engine;
    if (engine_tok == "closure") engine = Engine::Closure;
    else if (engine_tok == "paper-process" || engine_tok == "explore")
        engine = Engine::Explore;
    else throw std::invalid_argument("unknown census engine: " + engine_tok);

    Hypergraph g = [&] {
        if (!in_path.empty()) return Hypergraph::load_file(in_path);
        const ModelParams gen_params(n, epsilon, r);
        RngStream rng(gen_seed, 0);
        return sample_hypergraph(gen_params, rng);
    }();
    const ModelParams params(g.n(), epsilon, r);
    RngStream rng(census_seed, 0);
    const ComponentCensus census =
        run_census(g, params, samples, mode, engine, rng, size_cap);

    std::cout << "census: samples=" << samples << " mode=" << mode_tok
              << " engine=" << engine_tok << " n=" << g.n() << '\n';
    std::cout << "max_size=" << census.max_size << " good_count=" << census.good_count
              << " good_threshold=" << census.good_threshold << '\n';
    std::cout << "histogram:";
    for (size_t b = 0; b < census.histogram.size(); ++b) {
        if (census.histogram[b] == 0) continue;
        std::cout << " [" << (1ull << b) << ',' << (1ull << (b + 1))
                  << ")=" << census.histogram[b];
    }
    std::cout << '\n';
    if (!csv_path.empty()) {
        auto out = open_out(csv_path);
        out << "sample,size\n";
        for (size_t i = 0; i < census.samples.size(); ++i) {
            out << i << ',' << census.samples[i].size << '\n';
        }
    }
    return kExitOk;
}

int cmd_chain(uint32_t n, double epsilon, double r, uint64_t y0, uint64_t horizon,
              uint64_t trials, uint64_t seed) {
    const ModelParams params(n, epsilon, r);
    RngStream rng(seed, 0);
    const SurvivalEstimate est = survival_prob(params, y0, horizon, trials, rng);
    std::cout << "chain: n=" << n << " y0=" << y0 << " horizon=" << horizon
              << " trials=" << trials << '\n';
    std::printf("estimate=%.9g std_error=%.9g\n", est.estimate, est.std_error);
    return kExitOk;
}

int cmd_threshold(double epsilon, bool has_r, double r, bool has_target,
                  double target) {
    if (has_r == has_target) {
        throw std::invalid_argument("threshold needs exactly one of --r / --target");
    }
    if (has_target) r = critical_r(epsilon, target);
    const ThresholdReport rep = make_threshold_report(epsilon, r);
    std::printf("I=%.12f\n", rep.integral);
    std::printf("regime=%s\n", regime_name(rep.regime));
    std::printf("K0=%.12g\n", rep.k0);
    std::printf("K1=%.12g\n", rep.k1);
    std::printf("critical_r=%.12g\n", rep.critical_r);
    return kExitOk;
}

int cmd_sweep(const std::string& config_path) {
    const SweepConfig config = load_sweep_config(config_path);
    const SweepResult result = run_sweep(config);
    std::cout << "sweep: " << result.rows << " rows (" << result.errors
              << " errors) -> " << config.output_path << '\n';
    return result.errors == 0 ? kExitOk : kExitInternal;
}

int cmd_verify_lemmas(uint64_t budget) {
    bool all_ok = true;
    auto run_cycle = [&](const std::string& label, const FiniteDistribution& dist,
                         uint64_t n) {
        const CycleLemmaReport rep = verify_cycle_lemma(dist, n, budget);
        std::cout << to_text(rep, label) << '\n' << to_kv(rep, label) << '\n';
        all_ok = all_ok && rep.holds;
    };

    const FiniteDistribution pm1({-1, 1}, {0.5, 0.5});
    for (uint64_t n = 2; n <= 8; ++n) run_cycle("pm1", pm1, n);
    run_cycle("point-plus1", FiniteDistribution::point_mass(1), 4);
    const FiniteDistribution uniform3({-1, 0, 1}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    for (uint64_t n = 2; n <= 6; ++n) run_cycle("uniform3", uniform3, n);
    const FiniteDistribution binom2_shifted({-1, 0, 1}, {0.25, 0.5, 0.25});
    for (uint64_t n = 2; n <= 6; ++n) run_cycle("binom2-shifted", binom2_shifted, n);
    const FiniteDistribution skewed({-1, 2}, {2.0 / 3, 1.0 / 3});
    for (uint64_t n = 2; n <= 6; ++n) run_cycle("skewed", skewed, n);

    for (const DominanceConfig& config : default_dominance_configs()) {
        const DominanceReport rep = verify_dominance_lemma(config);
        std::cout << to_text(rep) << '\n' << to_kv(rep) << '\n';
        all_ok = all_ok && rep.hypotheses_met && rep.holds;
    }
    if (!all_ok) {
        std::cout << "lemma suite FAILED\n";
        return kExitInternal;
    }
    std::cout << "all lemma suites passed\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation laboratory for propagation connectivity on random "
                 "hypergraphs with 2-edges and 3-edges"};
    app.require_subcommand(1);
    std::function<int()> action;

    // gen
    uint32_t gen_n = 0;
    double gen_eps = 0, gen_r = 0;
    uint64_t gen_seed = 0;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "sample a random hypergraph to a file");
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--epsilon", gen_eps, "edge density parameter in [0,1]")
        ->required();
    gen->add_option("--r", gen_r, "triple density parameter > 0")->required();
    gen->add_option("--seed", gen_seed, "generator seed")->required();
    gen->add_option("--out", gen_out, "output path")->required();
    gen->callback([&] {
        action = [&] { return cmd_gen(gen_n, gen_eps, gen_r, gen_seed, gen_out); };
    });

    // check
    std::string check_in, check_cert;
    auto* check =
        app.add_subcommand("check", "decide propagation connectivity of a file");
    check->add_option("--in", check_in, "hypergraph file")->required();
    check->add_option("--certificate", check_cert,
                      "write witness or obstruction here");
    check->callback([&] {
        action = [&] { return cmd_check(check_in, check_cert); };
    });

    // census
    std::string cen_in, cen_mode = "single-vertex", cen_engine = "closure", cen_csv;
    uint32_t cen_n = 0;
    double cen_eps = 0, cen_r = 0;
    uint64_t cen_gen_seed = 1, cen_seed = 1, cen_samples = 0, cen_cap = 0;
    auto* census = app.add_subcommand(
        "census", "sample component sizes from random seeds");
    census->add_option("--in", cen_in, "hypergraph file (otherwise generate)");
    census->add_option("--n", cen_n, "vertex count when generating");
    census->add_option("--epsilon", cen_eps, "edge density parameter")->required();
    census->add_option("--r", cen_r, "triple density parameter")->required();
    census->add_option("--seed", cen_gen_seed, "generator seed when generating");
    census->add_option("--census-seed", cen_seed, "seed-sampling stream");
    census->add_option("--samples", cen_samples, "number of sampled seeds")
        ->required();
    census->add_option("--mode", cen_mode, "single-vertex | pair | edge-seed");
    census->add_option("--engine", cen_engine, "closure | paper-process");
    census->add_option("--size-cap", cen_cap, "stop runs beyond this size (0 = off)");
    census->add_option("--csv", cen_csv, "write per-sample sizes here");
    census->callback([&] {
        action = [&] {
            if (cen_in.empty() && cen_n == 0) {
                throw std::invalid_argument("census needs --in or --n");
            }
            return cmd_census(cen_in, cen_n, cen_eps, cen_r, cen_gen_seed, cen_seed,
                              cen_samples, cen_mode, cen_engine, cen_cap, cen_csv);
        };
    });

    // chain
    uint32_t ch_n = 0;
    double ch_eps = 0, ch_r = 0;
    uint64_t ch_y0 = 1, ch_horizon = 0, ch_trials = 0, ch_seed = 1;
    auto* chain = app.add_subcommand(
        "chain", "survival probability of the active-count process");
    chain->add_option("--n", ch_n, "vertex count")->required();
    chain->add_option("--epsilon", ch_eps, "edge density parameter")->required();
    chain->add_option("--r", ch_r, "triple density parameter")->required();
    chain->add_option("--y0", ch_y0, "initial active count")->required();
    chain->add_option("--horizon", ch_horizon, "step horizon")->required();
    chain->add_option("--trials", ch_trials, "Monte-Carlo trials")->required();
    chain->add_option("--seed", ch_seed, "base seed");
    chain->callback([&] {
        action = [&] {
            return cmd_chain(ch_n, ch_eps, ch_r, ch_y0, ch_horizon, ch_trials,
                             ch_seed);
        };
    });

    // threshold
    double th_eps = 0, th_r = 0, th_target = 0;
    auto* threshold = app.add_subcommand(
        "threshold", "threshold integral, regime and constants");
    threshold->add_option("--epsilon", th_eps, "edge density parameter")->required();
    auto* th_r_opt = threshold->add_option("--r", th_r, "triple density parameter");
    auto* th_t_opt =
        threshold->add_option("--target", th_target, "solve for r with I = target");
    threshold->callback([&] {
        action = [&] {
            return cmd_threshold(th_eps, th_r_opt->count() > 0, th_r,
                                 th_t_opt->count() > 0, th_target);
        };
    });

    // sweep
    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "run a grid experiment to CSV");
    sweep->add_option("--config", sweep_config, "JSON config path")->required();
    sweep->callback([&] {
        action = [&] { return cmd_sweep(sweep_config); };
    });

    // verify-lemmas
    uint64_t budget = 65536;
    auto* lemmas = app.add_subcommand(
        "verify-lemmas", "exhaustive checks of the two supporting inequalities");
    lemmas->add_option("--budget", budget, "max outcome tuples per cycle case");
    lemmas->callback([&] {
        action = [&] { return cmd_verify_lemmas(budget); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        return action();
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
