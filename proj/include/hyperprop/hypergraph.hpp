#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperprop/model.hpp"
#include "hyperprop/rng.hpp"

namespace hyperprop {

// Canonical edges keep vertices strictly increasing.
struct Edge2 {
    uint32_t u, v;
    friend bool operator==(const Edge2&, const Edge2&) = default;
};
struct Edge3 {
    uint32_t u, v, w;
    friend bool operator==(const Edge3&, const Edge3&) = default;
};

// Colexicographic ranks: pairs map to C(v,2)+u, triples to C(w,3)+C(v,2)+u.
// These are bijections onto [0, C(n,2)) and [0, C(n,3)).
uint64_t pair_count(uint64_t n);    // C(n,2)
uint64_t triple_count(uint64_t n);  // C(n,3); throws std::overflow_error if it
                                    // does not fit in 64 bits
uint64_t pair_rank(uint32_t u, uint32_t v);
Edge2 pair_unrank(uint64_t rank);
uint64_t triple_rank(uint32_t u, uint32_t v, uint32_t w);
Edge3 triple_unrank(uint64_t rank);

// Parse failure for the text format; the offending 1-based line number is
// part of the message and available separately.
class ParseError : public std::runtime_error {
public:
    ParseError(uint64_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    uint64_t line() const { return line_; }

private:
    uint64_t line_;
};

// Immutable vertex-labelled hypergraph with 2-edges and 3-edges.
// Construction canonicalizes (sorts vertices within each edge, sorts edges
// by (arity, colex rank)) and rejects duplicate edges, repeated vertices
// within an edge, and out-of-range vertex ids.
class Hypergraph {
public:
    struct Nbr2 {
        uint32_t vertex;  // the other endpoint
        uint32_t edge;    // index into edges2()
    };

    Hypergraph(uint32_t n, std::vector<Edge2> edges2,
               std::vector<Edge3> edges3);

    uint32_t n() const { return n_; }
    std::span<const Edge2> edges2() const { return edges2_; }
    std::span<const Edge3> edges3() const { return edges3_; }

    // 2-edge neighbours of v, sorted by vertex id.
    std::span<const Nbr2> neighbors2(uint32_t v) const {
        return {adj2_.data() + adj2_off_[v], adj2_off_[v + 1] - adj2_off_[v]};
    }
    // Ids of 3-edges containing v, increasing.
    std::span<const uint32_t> incident3(uint32_t v) const {
        return {inc3_.data() + inc3_off_[v], inc3_off_[v + 1] - inc3_off_[v]};
    }

    // Text format, one edge per line, sorted by (arity, colex rank):
    //   hpg 1
    //   n <N>
    //   e2 <u> <v>
    //   e3 <u> <v> <w>
    // Lines starting with '#' and blank lines are ignored on load.
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static Hypergraph load(std::istream& in);
    static Hypergraph load_file(const std::string& path);

private:
    struct Trusted {};  // edges already canonical and validated
    Hypergraph(Trusted, uint32_t n, std::vector<Edge2>&& edges2,
               std::vector<Edge3>&& edges3);
    void build_index();

    friend Hypergraph sample_hypergraph(uint32_t, double, double, RngStream&);

    uint32_t n_;
    std::vector<Edge2> edges2_;
    std::vector<Edge3> edges3_;
    std::vector<uint64_t> adj2_off_;
    std::vector<Nbr2> adj2_;
    std::vector<uint64_t> inc3_off_;
    std::vector<uint32_t> inc3_;
};

// Samples G(n, p2, p3): every pair an independent 2-edge with probability p2,
// every triple a 3-edge with probability p3. Runs in O(n + edges) using
// geometric gap lengths 1 + floor(ln U / ln(1-p)) over the colex index
// spaces (pairs first, then triples), so the output is already canonical
// and the draw sequence is fixed by the stream alone.
Hypergraph sample_hypergraph(uint32_t n, double p2, double p3, RngStream& rng);

// Same with probabilities taken from the model parameters.
Hypergraph sample_hypergraph(const ModelParams& params, RngStream& rng);

}  // namespace hyperprop
