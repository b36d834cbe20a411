#include "hyperprop/propagation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_set>

namespace hyperprop {

uint64_t Bitset::count() const {
    uint64_t total = 0;
    for (uint64_t w : words_) total += std::popcount(w);
    return total;
}

Propagator::Propagator(const Hypergraph& g)
    : g_(&g),
      mark_epoch_(g.n(), 0),
      act_idx_(g.n(), 0),
      cnt_epoch_(g.edges3().size(), 0),
      cnt_(g.edges3().size(), 0) {}

void Propagator::next_epoch() {
    if (++epoch_ == 0) {  // epoch counter wrapped: wipe stamps once
        std::fill(mark_epoch_.begin(), mark_epoch_.end(), 0);
        std::fill(cnt_epoch_.begin(), cnt_epoch_.end(), 0);
        epoch_ = 1;
    }
    order_.clear();
    seq_.clear();
    pending_.clear();
    survived_ = 0;
}

uint8_t Propagator::bump(uint32_t eid) {
    if (cnt_epoch_[eid] != epoch_) {
        cnt_epoch_[eid] = epoch_;
        cnt_[eid] = 0;
    }
    return ++cnt_[eid];
}

void Propagator::mark(uint32_t v) {
    mark_epoch_[v] = epoch_;
    order_.push_back(v);
    for (const auto& nbr : g_->neighbors2(v)) {
        if (mark_epoch_[nbr.vertex] != epoch_) {
            pending_.push_back({2, nbr.edge});
        }
    }
    for (uint32_t eid : g_->incident3(v)) {
        if (bump(eid) == 2) {  // exactly one vertex still unmarked
            pending_.push_back({3, eid});
        }
    }
}

void Propagator::run_closure(std::span<const uint32_t> seed,
                             const ClosureOptions& opts) {
    if (seed.empty()) throw std::invalid_argument("closure seed must be nonempty");
    if (opts.order == FireOrder::Random && opts.rng == nullptr) {
        throw std::invalid_argument("random firing order needs an RngStream");
    }
    next_epoch();
    last_seed_.assign(seed.begin(), seed.end());
    for (uint32_t v : seed) {
        if (v >= g_->n()) throw std::invalid_argument("seed vertex out of range");
        if (mark_epoch_[v] != epoch_) mark(v);
    }
    auto capped = [&] {
        return opts.size_cap != 0 && order_.size() > opts.size_cap;
    };
    size_t head = 0;
    while (head < pending_.size() && !capped()) {
        EdgeRef er;
        switch (opts.order) {
            case FireOrder::FIFO:
                er = pending_[head++];
                break;
            case FireOrder::LIFO:
                er = pending_.back();
                pending_.pop_back();
                break;
            case FireOrder::Random: {
                size_t j = head + static_cast<size_t>(opts.rng->next_below(
                                      pending_.size() - head));
                std::swap(pending_[j], pending_.back());
                er = pending_.back();
                pending_.pop_back();
                break;
            }
        }
        uint32_t target = UINT32_MAX;
        int unmarked = 0;
        if (er.arity == 2) {
            const Edge2& e = g_->edges2()[er.index];
            for (uint32_t x : {e.u, e.v}) {
                if (mark_epoch_[x] != epoch_) {
                    ++unmarked;
                    target = x;
                }
            }
        } else {
            const Edge3& e = g_->edges3()[er.index];
            for (uint32_t x : {e.u, e.v, e.w}) {
                if (mark_epoch_[x] != epoch_) {
                    ++unmarked;
                    target = x;
                }
            }
        }
        if (unmarked != 1) continue;  // stale entry: resolved meanwhile
        mark(target);
        seq_.push_back({er, target});
        ++survived_;
    }
}

void Propagator::activate(uint32_t v, EdgeRef via, bool record) {
    mark_epoch_[v] = epoch_;
    act_idx_[v] = static_cast<uint32_t>(order_.size());
    order_.push_back(v);
    if (record) seq_.push_back({via, v});
}

void Propagator::run_explore(std::span<const uint32_t> seed,
                             uint64_t max_steps,
                             std::vector<uint32_t>* z_per_step) {
    if (seed.empty()) throw std::invalid_argument("explore seed must be nonempty");
    next_epoch();
    last_seed_.assign(seed.begin(), seed.end());
    for (uint32_t v : seed) {
        if (v >= g_->n()) throw std::invalid_argument("seed vertex out of range");
        if (mark_epoch_[v] != epoch_) activate(v, EdgeRef{0, 0}, false);
    }
    uint64_t t = 0;
    for (;; ++t) {
        if (t == order_.size()) break;                 // frontier died
        if (max_steps != 0 && t == max_steps) break;   // step cap
        uint32_t v = order_[t];
        uint32_t z = 0;
        for (const auto& nbr : g_->neighbors2(v)) {
            if (mark_epoch_[nbr.vertex] != epoch_) {
                activate(nbr.vertex, EdgeRef{2, nbr.edge}, true);
                ++z;
            }
        }
        for (uint32_t eid : g_->incident3(v)) {
            const Edge3& e = g_->edges3()[eid];
            uint32_t a = e.u == v ? e.v : e.u;
            uint32_t b = e.w == v ? e.v : e.w;
            // one partner must already be explored (index before t), the
            // other unexplored
            bool a_on = mark_epoch_[a] == epoch_;
            bool b_on = mark_epoch_[b] == epoch_;
            if (!a_on && b_on && act_idx_[b] < t) {
                activate(a, EdgeRef{3, eid}, true);
                ++z;
            } else if (!b_on && a_on && act_idx_[a] < t) {
                activate(b, EdgeRef{3, eid}, true);
                ++z;
            }
        }
        if (z_per_step) z_per_step->push_back(z);
    }
    survived_ = t;
}

PropagationRun Propagator::materialize() const {
    PropagationRun run;
    run.seed = last_seed_;
    run.marked = Bitset(g_->n());
    for (uint32_t v : order_) run.marked.set(v);
    run.sequence.assign(seq_.begin(), seq_.end());
    run.size = order_.size();
    run.survived_to = survived_;
    return run;
}

PropagationRun closure(const Hypergraph& g, std::span<const uint32_t> seed,
                       const ClosureOptions& opts) {
    Propagator p(g);
    p.run_closure(seed, opts);
    return p.materialize();
}

PropagationRun explore(const Hypergraph& g, std::span<const uint32_t> seed,
                       uint64_t max_steps, std::vector<uint32_t>* z_per_step) {
    Propagator p(g);
    p.run_explore(seed, max_steps, z_per_step);
    return p.materialize();
}

namespace {

// Middle vertex of a 3-edge relative to vertex x (the two partners).
inline std::pair<uint32_t, uint32_t> partners(const Edge3& e, uint32_t x) {
    if (e.u == x) return {e.v, e.w};
    if (e.v == x) return {e.u, e.w};
    return {e.u, e.v};
}

}  // namespace

ConnectivityResult decide_connectivity(const Hypergraph& g,
                                       const ConnectivityOptions& opts) {
    const uint32_t n = g.n();
    if (n < 2) throw std::invalid_argument("connectivity needs n >= 2");
    const auto e2 = g.edges2();
    const auto e3 = g.edges3();
    ConnectivityResult res;

    // Pair-link scan: flag every edge that shares two vertices with another
    // edge (3-edge/3-edge or 3-edge/2-edge). Unflagged edges can only
    // interact with 2-edges through a single shared vertex.
    std::vector<uint8_t> linked2(e2.size(), 0), linked3(e3.size(), 0);
    {
        std::vector<uint32_t> seen(n, 0);
        std::vector<EdgeRef> last(n, EdgeRef{0, 0});
        uint32_t scan = 0;
        auto visit = [&](uint32_t y, EdgeRef ref) {
            if (seen[y] == scan) {
                EdgeRef other = last[y];
                (other.arity == 2 ? linked2[other.index] : linked3[other.index]) = 1;
                (ref.arity == 2 ? linked2[ref.index] : linked3[ref.index]) = 1;
            }
            seen[y] = scan;
            last[y] = ref;
        };
        for (uint32_t x = 0; x < n; ++x) {
            ++scan;
            for (const auto& nbr : g.neighbors2(x)) {
                visit(nbr.vertex, EdgeRef{2, nbr.edge});
            }
            for (uint32_t eid : g.incident3(x)) {
                auto [a, b] = partners(e3[eid], x);
                visit(a, EdgeRef{3, eid});
                visit(b, EdgeRef{3, eid});
            }
        }
    }

    Propagator prop(g);
    std::vector<uint32_t> closed_id(n, 0);
    uint32_t next_id = 0;
    std::vector<std::vector<uint32_t>> sets;

    auto note_set = [&](std::span<const uint32_t> verts) {
        if (!opts.collect_obstruction) return;
        if (sets.size() >= opts.max_obstruction_sets) return;
        std::vector<uint32_t> s(verts.begin(), verts.end());
        std::sort(s.begin(), s.end());
        sets.push_back(std::move(s));
    };

    auto try_seed = [&](std::span<const uint32_t> verts) -> bool {
        // containment pruning: all vertices inside one known closed set
        uint32_t id0 = closed_id[verts[0]];
        if (id0 != 0) {
            bool all = true;
            for (uint32_t v : verts.subspan(1)) {
                if (closed_id[v] != id0) {
                    all = false;
                    break;
                }
            }
            if (all) return false;
        }
        prop.run_closure(verts);
        ++res.closures_run;
        res.max_closure_size = std::max(res.max_closure_size, prop.size());
        if (prop.size() == n) {
            res.connected = true;
            res.witness = prop.materialize();
            return true;
        }
        ++next_id;
        for (uint32_t v : prop.marked_list()) closed_id[v] = next_id;
        note_set(prop.marked_list());
        return false;
    };

    bool any_edge = !e2.empty() || !e3.empty();
    if (any_edge) {
        for (uint32_t i = 0; i < e2.size(); ++i) {
            const Edge2& e = e2[i];
            if (n > 2 && !linked2[i]) {
                // isolated pair: no 3-edge on this pair; fast unless a 2-edge
                // leaves it
                auto nu = g.neighbors2(e.u);
                auto nv = g.neighbors2(e.v);
                if (nu.size() == 1 && nv.size() == 1) {
                    res.max_closure_size = std::max<uint64_t>(res.max_closure_size, 2);
                    uint32_t vs[2] = {e.u, e.v};
                    note_set(vs);
                    continue;
                }
            }
            uint32_t vs[2] = {e.u, e.v};
            if (try_seed(vs)) break;
        }
        if (!res.connected) {
            for (uint32_t i = 0; i < e3.size() && !res.connected; ++i) {
                const Edge3& e = e3[i];
                if (n > 3 && !linked3[i]) {
                    bool isolated = true;
                    for (uint32_t x : {e.u, e.v, e.w}) {
                        for (const auto& nbr : g.neighbors2(x)) {
                            if (nbr.vertex != e.u && nbr.vertex != e.v &&
                                nbr.vertex != e.w) {
                                isolated = false;
                                break;
                            }
                        }
                        if (!isolated) break;
                    }
                    if (isolated) {
                        res.max_closure_size =
                            std::max<uint64_t>(res.max_closure_size, 3);
                        uint32_t vs[3] = {e.u, e.v, e.w};
                        note_set(vs);
                        continue;
                    }
                }
                uint32_t vs[3] = {e.u, e.v, e.w};
                if (try_seed(vs)) break;
            }
        }
    }

    if (opts.collect_obstruction && !res.connected) {
        // Keep only maximal sets; sort by size descending so any superset of
        // a candidate is already kept when the candidate is examined.
        std::sort(sets.begin(), sets.end(),
                  [](const auto& a, const auto& b) { return a.size() > b.size(); });
        std::vector<std::vector<uint32_t>> member(n);  // vertex -> kept set ids
        for (auto& s : sets) {
            bool contained = false;
            for (uint32_t kid : member[s[0]]) {
                const auto& k = res.obstruction[kid];
                if (k.size() >= s.size() &&
                    std::includes(k.begin(), k.end(), s.begin(), s.end())) {
                    contained = true;
                    break;
                }
            }
            if (contained) continue;
            auto kid = static_cast<uint32_t>(res.obstruction.size());
            for (uint32_t v : s) member[v].push_back(kid);
            res.obstruction.push_back(std::move(s));
        }
        // A vertex with no incident edges sits in no edge closure; it forms a
        // maximal singleton on its own.
        for (uint32_t v = 0; v < n; ++v) {
            if (g.neighbors2(v).empty() && g.incident3(v).empty()) {
                res.obstruction.push_back({v});
            }
        }
    }
    return res;
}

bool oracle_bruteforce(const Hypergraph& g) {
    const uint32_t n = g.n();
    if (n < 2) throw std::invalid_argument("connectivity needs n >= 2");
    if (n > 10) throw std::invalid_argument("oracle_bruteforce requires n <= 10");
    std::vector<uint32_t> masks;
    for (const auto& e : g.edges2()) masks.push_back((1u << e.u) | (1u << e.v));
    for (const auto& e : g.edges3()) {
        masks.push_back((1u << e.u) | (1u << e.v) | (1u << e.w));
    }
    const uint32_t full = (1u << n) - 1;
    std::unordered_set<uint32_t> dead;
    // Explores every firing order through state memoization; no confluence
    // assumption.
    std::function<bool(uint32_t)> grow = [&](uint32_t st) -> bool {
        if (st == full) return true;
        if (dead.count(st)) return false;
        for (uint32_t m : masks) {
            uint32_t out = m & ~st;
            if (std::popcount(out) == 1 && (m & st) == (m ^ out)) {
                if (grow(st | out)) return true;
            }
        }
        dead.insert(st);
        return false;
    };
    for (uint32_t m : masks) {
        if (grow(m)) return true;
    }
    return false;
}

ComponentCensus run_census(const Hypergraph& g, const ModelParams& params,
                           uint64_t samples, CensusMode mode, Engine engine,
                           RngStream& rng, uint64_t size_cap) {
    if (params.n() != g.n()) {
        throw std::invalid_argument("census params describe a different n");
    }
    if (samples < 1) throw std::invalid_argument("census needs samples >= 1");
    const uint32_t n = g.n();
    const uint64_t m2 = g.edges2().size();
    const uint64_t m3 = g.edges3().size();
    if (mode == CensusMode::Pair && n < 2) {
        throw std::invalid_argument("pair census needs n >= 2");
    }
    if (mode == CensusMode::EdgeSeed && m2 + m3 == 0) {
        throw std::invalid_argument("edge-seed census needs at least one edge");
    }

    ComponentCensus census;
    census.good_threshold = k0(params.epsilon(), params.r()) *
                            std::log(static_cast<double>(n));
    Propagator prop(g);
    std::vector<uint32_t> seed;
    for (uint64_t i = 0; i < samples; ++i) {
        seed.clear();
        switch (mode) {
            case CensusMode::SingleVertex:
                seed.push_back(static_cast<uint32_t>(rng.next_below(n)));
                break;
            case CensusMode::Pair: {
                auto u = static_cast<uint32_t>(rng.next_below(n));
                auto v = static_cast<uint32_t>(rng.next_below(n - 1));
                if (v >= u) ++v;
                seed.push_back(u);
                seed.push_back(v);
                break;
            }
            case CensusMode::EdgeSeed: {
                uint64_t idx = rng.next_below(m2 + m3);
                if (idx < m2) {
                    const Edge2& e = g.edges2()[idx];
                    seed.assign({e.u, e.v});
                } else {
                    const Edge3& e = g.edges3()[idx - m2];
                    seed.assign({e.u, e.v, e.w});
                }
                break;
            }
        }
        if (engine == Engine::Closure) {
            ClosureOptions opts;
            opts.size_cap = size_cap;
            prop.run_closure(seed, opts);
        } else {
            prop.run_explore(seed, size_cap);
        }
        uint64_t size = prop.size();
        census.samples.push_back({seed, size});
        census.max_size = std::max(census.max_size, size);
        auto bucket = static_cast<size_t>(std::bit_width(size) - 1);
        if (census.histogram.size() <= bucket) census.histogram.resize(bucket + 1, 0);
        ++census.histogram[bucket];
        if (static_cast<double>(size) >= census.good_threshold) {
            ++census.good_count;
        }
    }
    return census;
}

}  // namespace hyperprop
