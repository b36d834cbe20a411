#include "hyperprop/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hyperprop {

uint64_t pair_count(uint64_t n) {
    if (n > UINT32_MAX) {
        throw std::overflow_error("pair_count: n exceeds 32-bit capacity");
    }
    return n < 2 ? 0 : n * (n - 1) / 2;
}

uint64_t triple_count(uint64_t n) {
    if (n > UINT32_MAX) {
        throw std::overflow_error("triple_count: n exceeds 32-bit capacity");
    }
    if (n < 3) return 0;
    unsigned __int128 c = static_cast<unsigned __int128>(n) * (n - 1) * (n - 2) / 6;
    if (c > static_cast<unsigned __int128>(UINT64_MAX)) {
        throw std::overflow_error("triple_count: C(n,3) exceeds 64-bit capacity");
    }
    return static_cast<uint64_t>(c);
}

uint64_t pair_rank(uint32_t u, uint32_t v) {
    if (u >= v) throw std::invalid_argument("pair_rank requires u < v");
    return static_cast<uint64_t>(v) * (v - 1) / 2 + u;
}

Edge2 pair_unrank(uint64_t rank) {
    double est = (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(rank))) * 0.5;
    uint64_t v = static_cast<uint64_t>(est);
    if (v < 1) v = 1;
    while (v > 1 && v * (v - 1) / 2 > rank) --v;
    while ((v + 1) * v / 2 <= rank) ++v;
    return {static_cast<uint32_t>(rank - v * (v - 1) / 2),
            static_cast<uint32_t>(v)};
}

uint64_t triple_rank(uint32_t u, uint32_t v, uint32_t w) {
    if (!(u < v && v < w)) {
        throw std::invalid_argument("triple_rank requires u < v < w");
    }
    return triple_count(w) + pair_rank(u, v);
}

Edge3 triple_unrank(uint64_t rank) {
    auto c3 = [](uint64_t m) -> unsigned __int128 {
        return m < 3 ? 0 : static_cast<unsigned __int128>(m) * (m - 1) * (m - 2) / 6;
    };
    uint64_t w = static_cast<uint64_t>(std::cbrt(6.0 * static_cast<double>(rank)) + 1.0);
    if (w < 2) w = 2;
    while (w > 2 && c3(w) > rank) --w;
    while (c3(w + 1) <= rank) ++w;
    Edge2 p = pair_unrank(rank - static_cast<uint64_t>(c3(w)));
    return {p.u, p.v, static_cast<uint32_t>(w)};
}

Hypergraph::Hypergraph(uint32_t n, std::vector<Edge2> edges2,
                       std::vector<Edge3> edges3)
    : n_(n), edges2_(std::move(edges2)), edges3_(std::move(edges3)) {
    if (n < 1) throw std::invalid_argument("hypergraph must have n >= 1");
    for (auto& e : edges2_) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u == e.v) {
            throw std::invalid_argument("2-edge with repeated vertex");
        }
        if (e.v >= n_) throw std::invalid_argument("2-edge vertex out of range");
    }
    for (auto& e : edges3_) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.v > e.w) std::swap(e.v, e.w);
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u == e.v || e.v == e.w) {
            throw std::invalid_argument("3-edge with repeated vertex");
        }
        if (e.w >= n_) throw std::invalid_argument("3-edge vertex out of range");
    }
    auto rank2 = [](const Edge2& e) { return pair_rank(e.u, e.v); };
    auto rank3 = [](const Edge3& e) { return triple_rank(e.u, e.v, e.w); };
    std::sort(edges2_.begin(), edges2_.end(),
              [&](const Edge2& a, const Edge2& b) { return rank2(a) < rank2(b); });
    std::sort(edges3_.begin(), edges3_.end(),
              [&](const Edge3& a, const Edge3& b) { return rank3(a) < rank3(b); });
    for (size_t i = 1; i < edges2_.size(); ++i) {
        if (edges2_[i] == edges2_[i - 1]) {
            throw std::invalid_argument("duplicate 2-edge");
        }
    }
    for (size_t i = 1; i < edges3_.size(); ++i) {
        if (edges3_[i] == edges3_[i - 1]) {
            throw std::invalid_argument("duplicate 3-edge");
        }
    }
    build_index();
}

Hypergraph::Hypergraph(Trusted, uint32_t n, std::vector<Edge2>&& edges2,
                       std::vector<Edge3>&& edges3)
    : n_(n), edges2_(std::move(edges2)), edges3_(std::move(edges3)) {
    build_index();
}

void Hypergraph::build_index() {
    adj2_off_.assign(n_ + 1, 0);
    for (const auto& e : edges2_) {
        ++adj2_off_[e.u + 1];
        ++adj2_off_[e.v + 1];
    }
    for (uint32_t v = 0; v < n_; ++v) adj2_off_[v + 1] += adj2_off_[v];
    adj2_.resize(adj2_off_[n_]);
    if (edges2_.size() > UINT32_MAX || edges3_.size() > UINT32_MAX) {
        throw std::overflow_error("edge count exceeds 32-bit id capacity");
    }
    {
        std::vector<uint64_t> cur(adj2_off_.begin(), adj2_off_.end() - 1);
        for (size_t i = 0; i < edges2_.size(); ++i) {
            const auto& e = edges2_[i];
            adj2_[cur[e.u]++] = {e.v, static_cast<uint32_t>(i)};
            adj2_[cur[e.v]++] = {e.u, static_cast<uint32_t>(i)};
        }
    }
    inc3_off_.assign(n_ + 1, 0);
    for (const auto& e : edges3_) {
        ++inc3_off_[e.u + 1];
        ++inc3_off_[e.v + 1];
        ++inc3_off_[e.w + 1];
    }
    for (uint32_t v = 0; v < n_; ++v) inc3_off_[v + 1] += inc3_off_[v];
    inc3_.resize(inc3_off_[n_]);
    {
        std::vector<uint64_t> cur(inc3_off_.begin(), inc3_off_.end() - 1);
        for (size_t i = 0; i < edges3_.size(); ++i) {
            const auto& e = edges3_[i];
            auto id = static_cast<uint32_t>(i);
            inc3_[cur[e.u]++] = id;
            inc3_[cur[e.v]++] = id;
            inc3_[cur[e.w]++] = id;
        }
    }
}

namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(name) +
                                    " must lie in [0, 1]");
    }
}

}  // namespace

Hypergraph sample_hypergraph(uint32_t n, double p2, double p3,
                             RngStream& rng) {
    if (n < 1) throw std::invalid_argument("hypergraph must have n >= 1");
    check_probability(p2, "p2");
    check_probability(p3, "p3");
    std::vector<Edge2> e2;
    std::vector<Edge3> e3;

    if (n >= 2 && p2 > 0.0) {
        const uint64_t total = pair_count(n);
        if (p2 >= 1.0) {
            e2.reserve(total);
            for (uint64_t v = 1; v < n; ++v) {
                for (uint64_t u = 0; u < v; ++u) {
                    e2.push_back({static_cast<uint32_t>(u),
                                  static_cast<uint32_t>(v)});
                }
            }
        } else {
            const double inv = 1.0 / std::log1p(-p2);
            uint64_t idx = 0;
            uint64_t cu = 0, cv = 1;  // colex cursor; rank(cu,cv) == idx
            for (;;) {
                double g = std::floor(std::log(rng.next_open_unit()) * inv);
                if (!(g < 9.0e18)) break;
                uint64_t s = static_cast<uint64_t>(g);
                if (s >= total - idx) break;
                cu += s;
                while (cu >= cv) {
                    cu -= cv;
                    ++cv;
                }
                e2.push_back({static_cast<uint32_t>(cu),
                              static_cast<uint32_t>(cv)});
                idx += s + 1;
                if (idx >= total) break;
                if (++cu >= cv) {
                    cu -= cv;
                    ++cv;
                }
            }
        }
    }

    if (n >= 3 && p3 > 0.0) {
        const uint64_t total = triple_count(n);
        if (p3 >= 1.0) {
            e3.reserve(total);
            for (uint64_t w = 2; w < n; ++w) {
                for (uint64_t v = 1; v < w; ++v) {
                    for (uint64_t u = 0; u < v; ++u) {
                        e3.push_back({static_cast<uint32_t>(u),
                                      static_cast<uint32_t>(v),
                                      static_cast<uint32_t>(w)});
                    }
                }
            }
        } else {
            const double inv = 1.0 / std::log1p(-p3);
            uint64_t idx = 0;
            // cursor: top vertex cw plus pair rank rho within its block
            uint64_t rho = 0, cw = 2;
            uint64_t block = 1;  // C(cw,2)
            for (;;) {
                double g = std::floor(std::log(rng.next_open_unit()) * inv);
                if (!(g < 9.0e18)) break;
                uint64_t s = static_cast<uint64_t>(g);
                if (s >= total - idx) break;
                rho += s;
                while (rho >= block) {
                    rho -= block;
                    ++cw;
                    block = cw * (cw - 1) / 2;
                }
                Edge2 p = pair_unrank(rho);
                e3.push_back({p.u, p.v, static_cast<uint32_t>(cw)});
                idx += s + 1;
                if (idx >= total) break;
                if (++rho >= block) {
                    rho -= block;
                    ++cw;
                    block = cw * (cw - 1) / 2;
                }
            }
        }
    }
    return Hypergraph(Hypergraph::Trusted{}, n, std::move(e2), std::move(e3));
}

Hypergraph sample_hypergraph(const ModelParams& params, RngStream& rng) {
    if (params.n() > UINT32_MAX) {
        throw std::overflow_error("n exceeds 32-bit vertex capacity");
    }
    return sample_hypergraph(static_cast<uint32_t>(params.n()), params.p2(),
                             params.p3(), rng);
}

void Hypergraph::save(std::ostream& out) const {
    out << "hpg 1\nn " << n_ << '\n';
    for (const auto& e : edges2_) out << "e2 " << e.u << ' ' << e.v << '\n';
    for (const auto& e : edges3_) {
        out << "e3 " << e.u << ' ' << e.v << ' ' << e.w << '\n';
    }
    if (!out) throw std::runtime_error("hypergraph write failed");
}

void Hypergraph::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save(out);
    out.flush();
    if (!out) throw std::runtime_error("hypergraph write failed: " + path);
}

Hypergraph Hypergraph::load(std::istream& in) {
    std::string line;
    uint64_t lineno = 0;
    bool have_magic = false;
    bool have_n = false;
    uint64_t n = 0;
    std::vector<Edge2> e2;
    std::vector<Edge3> e3;
    bool seen_e3 = false;
    uint64_t prev_rank2 = 0, prev_rank3 = 0;

    while (std::getline(in, line)) {
        ++lineno;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;

        std::istringstream iss(line);
        std::string tag;
        iss >> tag;

        if (!have_magic) {
            std::string version;
            if (tag != "hpg" || !(iss >> version) || version != "1") {
                throw ParseError(lineno, "expected magic line 'hpg 1'");
            }
            std::string extra;
            if (iss >> extra) throw ParseError(lineno, "trailing tokens after magic");
            have_magic = true;
            continue;
        }
        if (!have_n) {
            long long value = -1;
            if (tag != "n" || !(iss >> value)) {
                throw ParseError(lineno, "expected vertex count line 'n <N>'");
            }
            std::string extra;
            if (iss >> extra) throw ParseError(lineno, "trailing tokens after vertex count");
            if (value < 1 || value > static_cast<long long>(UINT32_MAX)) {
                throw ParseError(lineno, "vertex count out of range");
            }
            n = static_cast<uint64_t>(value);
            have_n = true;
            continue;
        }

        if (tag == "e2") {
            if (seen_e3) {
                throw ParseError(lineno,
                                 "2-edge after 3-edge section; file must be "
                                 "sorted by (arity, colex rank)");
            }
            long long a, b;
            if (!(iss >> a >> b)) throw ParseError(lineno, "malformed 2-edge line");
            std::string extra;
            if (iss >> extra) throw ParseError(lineno, "trailing tokens on 2-edge line");
            if (a < 0 || b < 0 || static_cast<uint64_t>(a) >= n ||
                static_cast<uint64_t>(b) >= n) {
                throw ParseError(lineno, "2-edge vertex out of range");
            }
            if (!(a < b)) {
                throw ParseError(lineno, "2-edge vertices must be strictly increasing");
            }
            uint64_t rank = pair_rank(static_cast<uint32_t>(a),
                                      static_cast<uint32_t>(b));
            if (!e2.empty()) {
                if (rank == prev_rank2) throw ParseError(lineno, "duplicate 2-edge");
                if (rank < prev_rank2) {
                    throw ParseError(lineno, "2-edges out of colex order");
                }
            }
            prev_rank2 = rank;
            e2.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b)});
        } else if (tag == "e3") {
            long long a, b, c;
            if (!(iss >> a >> b >> c)) throw ParseError(lineno, "malformed 3-edge line");
            std::string extra;
            if (iss >> extra) throw ParseError(lineno, "trailing tokens on 3-edge line");
            if (a < 0 || b < 0 || c < 0 || static_cast<uint64_t>(a) >= n ||
                static_cast<uint64_t>(b) >= n || static_cast<uint64_t>(c) >= n) {
                throw ParseError(lineno, "3-edge vertex out of range");
            }
            if (!(a < b && b < c)) {
                throw ParseError(lineno, "3-edge vertices must be strictly increasing");
            }
            uint64_t rank = triple_rank(static_cast<uint32_t>(a),
                                        static_cast<uint32_t>(b),
                                        static_cast<uint32_t>(c));
            if (seen_e3) {
                if (rank == prev_rank3) throw ParseError(lineno, "duplicate 3-edge");
                if (rank < prev_rank3) {
                    throw ParseError(lineno, "3-edges out of colex order");
                }
            }
            seen_e3 = true;
            prev_rank3 = rank;
            e3.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b),
                          static_cast<uint32_t>(c)});
        } else {
            throw ParseError(lineno, "unknown line tag '" + tag + "'");
        }
    }
    if (!have_magic) throw ParseError(lineno, "missing magic line 'hpg 1'");
    if (!have_n) throw ParseError(lineno, "missing vertex count line");
    return Hypergraph(Trusted{}, static_cast<uint32_t>(n), std::move(e2),
                      std::move(e3));
}

Hypergraph Hypergraph::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return load(in);
}

}  // namespace hyperprop
