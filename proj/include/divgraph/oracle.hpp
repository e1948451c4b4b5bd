#pragma once

// Exact values of f, g, f_a, R, T, F, G on tiny ranges.
//
// Paths: iterative deepening over (end vertex, visited set) with a failure
// memo. R and T: branch and bound over the vertex sets that admit a path of
// length z. F and G: subset dynamic programming over the vertex set, which
// is exhaustive over every family of disjoint chains.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "divgraph/graph_model.hpp"
#include "divgraph/ss_sets.hpp"
#include "json.hpp"

namespace divgraph {

enum class Quantity { f, g, f_a, R, T, F, G };

inline std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::f: return "f";
        case Quantity::g: return "g";
        case Quantity::f_a: return "f_a";
        case Quantity::R: return "R";
        case Quantity::T: return "T";
        case Quantity::F: return "F";
        case Quantity::G: return "G";
    }
    return "?";
}

inline Quantity quantity_from_string(const std::string& s) {
    for (Quantity q : {Quantity::f, Quantity::g, Quantity::f_a, Quantity::R, Quantity::T, Quantity::F, Quantity::G}) {
        if (to_string(q) == s) return q;
    }
    throw std::invalid_argument("unknown quantity '" + s + "'");
}

struct OracleLimits {
    u64 max_path = 30;  // f, g, f_a, R, T
    u64 max_pack = 14;  // F, G
};

struct OracleResult {
    Quantity quantity = Quantity::f;
    u64 x = 0;
    std::optional<u64> y;  // F, G
    std::optional<u64> z;  // R, T
    u64 value = 0;
    std::vector<Chain> witness;
};

inline void to_json(nlohmann::json& j, const OracleResult& r) {
    nlohmann::json params{{"x", r.x}};
    if (r.y) params["y"] = *r.y;
    if (r.z) params["z"] = *r.z;
    nlohmann::json chains = nlohmann::json::array();
    for (const Chain& c : r.witness) chains.push_back(std::vector<u64>(c.elements().begin(), c.elements().end()));
    j = nlohmann::json{{"quantity", to_string(r.quantity)}, {"params", params}, {"value", r.value}, {"witness", chains}};
}

namespace detail {

using Mask = std::uint64_t;

/// Graph on a list of labelled vertices, adjacency as bitmasks.
struct SmallGraph {
    std::vector<u64> labels;  // ascending
    std::vector<Mask> adj;

    std::size_t size() const { return labels.size(); }
    Mask all() const { return size() == 64 ? ~Mask{0} : ((Mask{1} << size()) - 1); }
};

inline SmallGraph build_graph(std::vector<u64> labels, const Relation& rel) {
    if (labels.size() > 63) throw std::out_of_range("oracle: more than 63 vertices");
    SmallGraph g{std::move(labels), {}};
    g.adj.assign(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            if (related(rel, g.labels[i], g.labels[j])) {
                g.adj[i] |= Mask{1} << j;
                g.adj[j] |= Mask{1} << i;
            }
        }
    }
    return g;
}

inline std::vector<u64> range_labels(u64 x) {
    std::vector<u64> out(x);
    for (u64 i = 0; i < x; ++i) out[i] = i + 1;
    return out;
}

/// Exact longest path by iterative deepening: for L = 1, 2, ... decide
/// whether a path on L vertices exists. Failed (end vertex, visited set)
/// states keep the smallest length known to be unreachable, which stays
/// valid across rounds.
class LongestPath {
public:
    explicit LongestPath(const SmallGraph& g) : g_(g) {}

    /// One longest path as vertex indices; starts are tried in ascending order.
    std::vector<std::size_t> solve() {
        std::vector<std::size_t> best;
        for (std::size_t target = 1; target <= g_.size(); ++target) {
            std::vector<std::size_t> path;
            bool found = false;
            for (std::size_t v = 0; v < g_.size() && !found; ++v) {
                path.assign(1, v);
                found = extend(v, Mask{1} << v, target - 1, path);
            }
            if (!found) break;
            best = path;
        }
        return best;
    }

private:
    /// Upper bound on the number of vertices that can follow v: everything
    /// still reachable, except that at most one vertex of degree <= 1 in the
    /// remaining graph can be used (it must end the path).
    std::size_t bound(std::size_t v, Mask visited) const {
        const Mask open = ~visited | (Mask{1} << v);
        Mask seen = Mask{1} << v;
        Mask frontier = seen;
        while (frontier) {
            Mask next = 0;
            for (Mask f = frontier; f; f &= f - 1) next |= g_.adj[static_cast<std::size_t>(std::countr_zero(f))];
            next &= open & ~seen;
            seen |= next;
            frontier = next;
        }
        const Mask rest = seen & ~(Mask{1} << v);
        std::size_t leaves = 0;
        for (Mask f = rest; f; f &= f - 1) {
            const std::size_t u = static_cast<std::size_t>(std::countr_zero(f));
            if (std::popcount(g_.adj[u] & open) <= 1) ++leaves;
        }
        const std::size_t reach = static_cast<std::size_t>(std::popcount(rest));
        return leaves > 1 ? reach - (leaves - 1) : reach;
    }

    bool extend(std::size_t v, Mask visited, std::size_t need, std::vector<std::size_t>& path) {
        if (need == 0) return true;
        Mask cand = g_.adj[v] & ~visited;
        if (!cand) return false;
        const std::uint64_t key = (visited << 6) | v;
        auto it = memo_.find(key);
        if (it != memo_.end() && it->second <= need) return false;
        const std::size_t ub = bound(v, visited);
        if (ub < need) {
            memo_[key] = ub + 1;
            return false;
        }
        for (; cand; cand &= cand - 1) {
            const std::size_t u = static_cast<std::size_t>(std::countr_zero(cand));
            path.push_back(u);
            if (extend(u, visited | (Mask{1} << u), need - 1, path)) return true;
            path.pop_back();
        }
        auto& slot = memo_[key];
        slot = slot == 0 ? need : std::min(slot, need);
        return false;
    }

    const SmallGraph& g_;
    std::unordered_map<std::uint64_t, std::size_t> memo_;  // smallest failing `need`
};

inline OracleResult longest_chain(Quantity q, u64 x, std::vector<u64> labels, const Relation& rel) {
    if (labels.size() > 57) throw std::out_of_range("oracle: longest path limited to 57 vertices");
    const SmallGraph g = build_graph(std::move(labels), rel);
    LongestPath solver(g);
    const auto path = solver.solve();
    std::vector<u64> elements;
    for (std::size_t v : path) elements.push_back(g.labels[v]);
    OracleResult r;
    r.quantity = q;
    r.x = x;
    r.value = elements.size();
    r.witness.emplace_back(std::move(elements), rel);
    return r;
}

}  // namespace detail

inline OracleResult brute_f(u64 x, const OracleLimits& limits = {}) {
    if (x < 1 || x > limits.max_path) throw std::out_of_range("brute_f: x outside [1, max_path]");
    return detail::longest_chain(Quantity::f, x, detail::range_labels(x), Relation::divisor());
}

inline OracleResult brute_g(u64 x, const OracleLimits& limits = {}) {
    if (x < 1 || x > limits.max_path) throw std::out_of_range("brute_g: x outside [1, max_path]");
    return detail::longest_chain(Quantity::g, x, detail::range_labels(x), Relation::lcm_bounded(x));
}

/// Longest divisor chain using only elements of A(x).
inline OracleResult brute_f_a(u64 x, const OracleLimits& limits = {}, const Sieve& sieve = Sieve::shared()) {
    if (x < 1) throw std::out_of_range("brute_f_a: x must be >= 1");
    auto labels = enumerate_A(x, sieve);
    if (labels.size() > limits.max_path) throw std::out_of_range("brute_f_a: |A(x)| exceeds max_path");
    return detail::longest_chain(Quantity::f_a, x, std::move(labels), Relation::divisor());
}

/// Exhaustive disjoint-chain packings of [1, x] under one relation. The
/// tables are built once and then answer every y or z.
class PackingOracle {
public:
    PackingOracle(u64 x, const Relation& rel, const OracleLimits& limits = {})
        : x_(checked_size(x, limits)), rel_(rel), graph_(detail::build_graph(detail::range_labels(x), rel)) {
        const std::size_t n = graph_.size();
        const detail::Mask full = graph_.all();
        ends_.assign(std::size_t{1} << n, 0);
        for (detail::Mask s = 1; s <= full; ++s) {
            if (std::popcount(s) == 1) {
                ends_[s] = s;
                continue;
            }
            detail::Mask rest = s;
            detail::Mask e = 0;
            while (rest) {
                const std::size_t v = static_cast<std::size_t>(std::countr_zero(rest));
                rest &= rest - 1;
                if (ends_[s & ~(detail::Mask{1} << v)] & graph_.adj[v]) e |= detail::Mask{1} << v;
            }
            ends_[s] = e;
        }
        // Minimum number of chains partitioning each subset.
        cover_.assign(std::size_t{1} << n, kInfinite);
        cover_choice_.assign(std::size_t{1} << n, 0);
        cover_[0] = 0;
        for (detail::Mask u = 1; u <= full; ++u) {
            const detail::Mask low = u & (~u + 1);
            const detail::Mask others = u & ~low;
            // Parts are submasks of u containing its lowest element.
            for (detail::Mask sub = others;; sub = (sub - 1) & others) {
                const detail::Mask part = sub | low;
                if (ends_[part] && cover_[u & ~part] + 1 < cover_[u]) {
                    cover_[u] = cover_[u & ~part] + 1;
                    cover_choice_[u] = part;
                }
                if (sub == 0) break;
            }
        }
    }

    u64 x() const { return x_; }
    const Relation& relation() const { return rel_; }

    /// At most y disjoint chains of any lengths.
    OracleResult best_with_chains(u64 y) const {
        if (y < 1) throw std::domain_error("packing oracle: y must be >= 1");
        const detail::Mask full = graph_.all();
        detail::Mask best = 0;
        for (detail::Mask u = 1; u <= full; ++u) {
            if (cover_[u] <= y && std::popcount(u) > std::popcount(best)) best = u;
        }
        OracleResult r;
        r.quantity = rel_.kind == RelationKind::divisor ? Quantity::F : Quantity::G;
        r.x = x_;
        r.y = y;
        r.value = static_cast<u64>(std::popcount(best));
        for (detail::Mask u = best; u; u &= ~cover_choice_[u]) r.witness.push_back(path_of(cover_choice_[u]));
        return r;
    }

    /// Disjoint chains all of length exactly z.
    OracleResult best_with_length(u64 z) const {
        if (z < 1) throw std::domain_error("packing oracle: z must be >= 1");
        const std::size_t n = graph_.size();
        const detail::Mask full = graph_.all();
        std::vector<detail::Mask> choice(std::size_t{1} << n, 0);
        std::vector<char> feasible(std::size_t{1} << n, 0);
        feasible[0] = 1;
        detail::Mask best = 0;
        for (detail::Mask u = 1; u <= full; ++u) {
            if (static_cast<u64>(std::popcount(u)) % z != 0) continue;
            const detail::Mask low = u & (~u + 1);
            const detail::Mask others = u & ~low;
            for (detail::Mask sub = others;; sub = (sub - 1) & others) {
                const detail::Mask part = sub | low;
                if (static_cast<u64>(std::popcount(part)) == z && ends_[part] && feasible[u & ~part]) {
                    feasible[u] = 1;
                    choice[u] = part;
                    break;
                }
                if (sub == 0) break;
            }
            if (feasible[u] && std::popcount(u) > std::popcount(best)) best = u;
        }
        OracleResult r;
        r.quantity = rel_.kind == RelationKind::divisor ? Quantity::R : Quantity::T;
        r.x = x_;
        r.z = z;
        r.value = static_cast<u64>(std::popcount(best));
        for (detail::Mask u = best; u; u &= ~choice[u]) r.witness.push_back(path_of(choice[u]));
        return r;
    }

private:
    static constexpr unsigned kInfinite = 1u << 30;

    static u64 checked_size(u64 x, const OracleLimits& limits) {
        if (x < 1 || x > limits.max_pack || x > 24) throw std::out_of_range("packing oracle: x outside [1, max_pack]");
        return x;
    }

    /// A Hamiltonian path through the subset `part`, read back from ends_.
    Chain path_of(detail::Mask part) const {
        std::vector<u64> rev;
        detail::Mask s = part;
        detail::Mask allowed = ~detail::Mask{0};
        while (s) {
            const detail::Mask e = ends_[s] & allowed;
            const std::size_t v = static_cast<std::size_t>(std::countr_zero(e));
            rev.push_back(graph_.labels[v]);
            s &= ~(detail::Mask{1} << v);
            allowed = graph_.adj[v];
        }
        std::reverse(rev.begin(), rev.end());
        return Chain(std::move(rev), rel_);
    }

    u64 x_;
    Relation rel_;
    detail::SmallGraph graph_;
    std::vector<detail::Mask> ends_;
    std::vector<unsigned> cover_;
    std::vector<detail::Mask> cover_choice_;
};

namespace detail {

/// Maximum number of disjoint paths on exactly z vertices.
///
/// Every vertex set carrying such a path is listed once, filed under its
/// smallest vertex. The search decides the smallest open vertex: either it
/// starts no further set, or one of the sets filed under it is taken.
/// Vertices with no open neighbour are dropped, and every explored open set
/// records an upper bound on what it can still hold.
class FixedLengthPacking {
public:
    FixedLengthPacking(const SmallGraph& g, std::size_t z) : g_(g), z_(z), by_low_(g.size()) {
        std::unordered_set<Mask> seen;
        std::vector<std::size_t> path;
        std::function<void(std::size_t, Mask)> grow = [&](std::size_t v, Mask visited) {
            if (path.size() == z_) {
                if (seen.insert(visited).second) by_low_[std::countr_zero(visited)].push_back({visited, path});
                return;
            }
            for (Mask open = g_.adj[v] & ~visited; open; open &= open - 1) {
                const std::size_t u = static_cast<std::size_t>(std::countr_zero(open));
                path.push_back(u);
                grow(u, visited | (Mask{1} << u));
                path.pop_back();
            }
        };
        for (std::size_t v = 0; v < g_.size(); ++v) {
            path.assign(1, v);
            grow(v, Mask{1} << v);
        }
    }

    /// Paths of one optimal packing, as vertex indices.
    std::vector<std::vector<std::size_t>> solve() {
        search(g_.all());
        std::vector<std::vector<std::size_t>> out;
        for (const Part* p : best_) out.push_back(p->path);
        return out;
    }

private:
    struct Part {
        Mask set;
        std::vector<std::size_t> path;
    };

    void search(Mask open) {
        if (z_ > 1) {
            for (Mask r = open; r; r &= r - 1) {
                const std::size_t u = static_cast<std::size_t>(std::countr_zero(r));
                if (!(g_.adj[u] & open)) open &= ~(Mask{1} << u);
            }
        }
        const std::size_t have = current_.size();
        if (have + static_cast<std::size_t>(std::popcount(open)) / z_ <= best_.size()) return;
        if (auto it = bound_.find(open); it != bound_.end() && have + it->second <= best_.size()) return;
        if (open == 0) {
            if (have > best_.size()) best_ = current_;
            return;
        }
        const std::size_t v = static_cast<std::size_t>(std::countr_zero(open));
        for (const Part& p : by_low_[v]) {
            if ((p.set & open) != p.set) continue;
            current_.push_back(&p);
            search(open & ~p.set);
            current_.pop_back();
        }
        search(open & ~(Mask{1} << v));
        bound_[open] = best_.size() - have;
    }

    const SmallGraph& g_;
    std::size_t z_;
    std::vector<std::vector<Part>> by_low_;
    std::vector<const Part*> current_;
    std::vector<const Part*> best_;
    std::unordered_map<Mask, std::size_t> bound_;
};

inline OracleResult fixed_length_packing(Quantity q, u64 x, u64 z, const Relation& rel, const OracleLimits& limits) {
    if (x < 1 || x > limits.max_path) throw std::out_of_range("packing oracle: x outside [1, max_path]");
    if (z < 1) throw std::domain_error("packing oracle: z must be >= 1");
    const SmallGraph g = build_graph(range_labels(x), rel);
    OracleResult r;
    r.quantity = q;
    r.x = x;
    r.z = z;
    if (z > x) return r;
    for (const auto& path : FixedLengthPacking(g, z).solve()) {
        std::vector<u64> el;
        for (std::size_t v : path) el.push_back(g.labels[v]);
        r.witness.emplace_back(std::move(el), rel);
    }
    r.value = z * r.witness.size();
    return r;
}

}  // namespace detail

inline OracleResult brute_R(u64 x, u64 z, const OracleLimits& limits = {}) {
    return detail::fixed_length_packing(Quantity::R, x, z, Relation::divisor(), limits);
}

inline OracleResult brute_T(u64 x, u64 z, const OracleLimits& limits = {}) {
    return detail::fixed_length_packing(Quantity::T, x, z, Relation::lcm_bounded(x), limits);
}

inline OracleResult brute_F(u64 x, u64 y, const OracleLimits& limits = {}) {
    return PackingOracle(x, Relation::divisor(), limits).best_with_chains(y);
}

inline OracleResult brute_G(u64 x, u64 y, const OracleLimits& limits = {}) {
    return PackingOracle(x, Relation::lcm_bounded(x), limits).best_with_chains(y);
}

}  // namespace divgraph
