#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hyperprop/hypergraph.hpp"
#include "hyperprop/model.hpp"
#include "hyperprop/rng.hpp"

namespace hyperprop {

struct EdgeRef {
    uint8_t arity;   // 2 or 3
    uint32_t index;  // into edges2() or edges3()
    friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

// One marking event: `edge` had exactly one unmarked vertex, `vertex`.
struct SequenceEntry {
    EdgeRef edge;
    uint32_t vertex;
};

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(uint32_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}
    void set(uint32_t i) { words_[i >> 6] |= uint64_t(1) << (i & 63); }
    bool test(uint32_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    uint32_t size() const { return bits_; }
    uint64_t count() const;

private:
    uint32_t bits_ = 0;
    std::vector<uint64_t> words_;
};

// Replayable record of a closure or exploration run.
// Invariant: size == seed-distinct-count + sequence.size(); every sequence
// entry's edge has, at replay time, exactly one unmarked vertex (the entry's).
struct PropagationRun {
    std::vector<uint32_t> seed;
    Bitset marked;
    std::vector<SequenceEntry> sequence;
    uint64_t size = 0;
    uint64_t survived_to = 0;  // closure: firings executed; exploration:
                               // vertices explored before the frontier died
                               // or the step cap hit
};

enum class FireOrder { FIFO, LIFO, Random };

struct ClosureOptions {
    FireOrder order = FireOrder::FIFO;
    uint64_t size_cap = 0;     // 0 = none; halt once |marked| exceeds the cap
    RngStream* rng = nullptr;  // required for FireOrder::Random
};

// Shared engine over one immutable graph; scratch state is epoch-stamped so
// repeated runs cost O(touched), not O(n + m). Results of the last run stay
// valid until the next run on the same object.
class Propagator {
public:
    explicit Propagator(const Hypergraph& g);

    // Closure marking: starting from the seed, any edge with exactly one
    // unmarked vertex marks that vertex, until no edge applies (or the
    // size cap is exceeded). The final marked set does not depend on the
    // firing order; the recorded sequence does.
    void run_closure(std::span<const uint32_t> seed,
                     const ClosureOptions& opts = {});

    // Frontier exploration: vertices are unexplored, active, or explored.
    // Active vertices are explored in activation (FIFO) order; exploring v
    // activates every unexplored u joined to v by a 2-edge, or by a 3-edge
    // whose third vertex is already explored (merely active does not count).
    // Terminates when no active vertex remains, or after max_steps > 0
    // explorations. If z_per_step is given it receives the number of
    // activations at each executed step.
    void run_explore(std::span<const uint32_t> seed, uint64_t max_steps = 0,
                     std::vector<uint32_t>* z_per_step = nullptr);

    uint64_t size() const { return order_.size(); }
    uint64_t survived_to() const { return survived_; }
    // Marked vertices of the last run, in marking/activation order.
    std::span<const uint32_t> marked_list() const { return order_; }
    std::span<const SequenceEntry> sequence() const { return seq_; }
    bool is_marked(uint32_t v) const { return mark_epoch_[v] == epoch_; }

    PropagationRun materialize() const;

    const Hypergraph& graph() const { return *g_; }

private:
    void next_epoch();
    void mark(uint32_t v);
    uint8_t bump(uint32_t eid);
    void activate(uint32_t v, EdgeRef via, bool record);

    const Hypergraph* g_;
    uint32_t epoch_ = 0;
    std::vector<uint32_t> mark_epoch_;  // per vertex
    std::vector<uint32_t> act_idx_;     // exploration order index, per vertex
    std::vector<uint32_t> cnt_epoch_;   // per 3-edge
    std::vector<uint8_t> cnt_;          // per 3-edge: marked vertices so far
    std::vector<uint32_t> order_;       // marked vertices in order
    std::vector<SequenceEntry> seq_;
    std::vector<EdgeRef> pending_;
    std::vector<uint32_t> last_seed_;
    uint64_t survived_ = 0;
};

// Convenience single-run wrappers.
PropagationRun closure(const Hypergraph& g, std::span<const uint32_t> seed,
                       const ClosureOptions& opts = {});
PropagationRun explore(const Hypergraph& g, std::span<const uint32_t> seed,
                       uint64_t max_steps = 0,
                       std::vector<uint32_t>* z_per_step = nullptr);

struct ConnectivityOptions {
    bool collect_obstruction = false;
    // Obstruction sets kept at most (diagnostic output; largest survive the
    // maximality filter anyway).
    uint64_t max_obstruction_sets = 50000;
};

struct ConnectivityResult {
    bool connected = false;
    // Present when connected: run whose seed is the vertex set of the first
    // edge of a propagation sequence covering V.
    std::optional<PropagationRun> witness;
    // When collect_obstruction and not connected: the maximal closed vertex
    // sets found (sorted vertex lists), including singletons for vertices
    // in no edge.
    std::vector<std::vector<uint32_t>> obstruction;
    uint64_t max_closure_size = 0;  // exact max over all edge-seeded closures
    uint64_t closures_run = 0;      // closures actually executed (diagnostic)
};

// Decides whether some edge can start a propagation sequence covering all of
// V, by running closures from every edge seed with two sound prunings:
// seeds whose vertices all lie in one previously computed closed set are
// skipped (their closure cannot leave it), and seeds interacting with no
// other edge close immediately on themselves. max_closure_size is exact.
// Requires n >= 2.
ConnectivityResult decide_connectivity(const Hypergraph& g,
                                       const ConnectivityOptions& opts = {});

// Reference decision by memoized exhaustive search over marked-set states,
// with no confluence assumption and no pruning. Requires n <= 10 (and n >= 2).
bool oracle_bruteforce(const Hypergraph& g);

enum class CensusMode { SingleVertex, Pair, EdgeSeed };
enum class Engine { Closure, Explore };

struct CensusSample {
    std::vector<uint32_t> seed;
    uint64_t size;
};

struct ComponentCensus {
    std::vector<CensusSample> samples;
    uint64_t max_size = 0;
    // histogram[b] counts samples with size in [2^b, 2^(b+1)).
    std::vector<uint64_t> histogram;
    uint64_t good_count = 0;     // samples with size >= good_threshold
    double good_threshold = 0;   // k0(epsilon, r) * ln n
};

// Component-size census over `samples` uniformly chosen seeds. size_cap > 0
// truncates individual runs (closure: marked-size cap; exploration: step
// cap); good counting is unaffected as long as the cap is at least the
// good threshold. params must describe the same n as the graph.
ComponentCensus run_census(const Hypergraph& g, const ModelParams& params,
                           uint64_t samples, CensusMode mode, Engine engine,
                           RngStream& rng, uint64_t size_cap = 0);

}  // namespace hyperprop
