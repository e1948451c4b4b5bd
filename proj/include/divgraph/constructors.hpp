#pragma once

// Constructive lower bounds for disjoint chain packings:
//
//   * geometric chains 2m - 4m - ... - 2^z m over odd m,
//   * a heuristic long divisor chain inside A(x),
//   * the recursive packing R(x, z) >= sum_{b in B(x)} R(x/b, z) + d z,
//     where the second term cuts d windows of length z out of a chain
//     inside A(x).
//
// Multiples of an element of B(x) never lie in A(x), and two distinct
// elements of B(x) have no common multiple <= x, so the lifted branches
// and the A(x) windows never collide. Every packing is audited anyway.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "divgraph/graph_model.hpp"
#include "divgraph/oracle.hpp"
#include "divgraph/ss_sets.hpp"

namespace divgraph {

struct ChainPacking {
    u64 x = 0;
    u64 z = 0;
    std::vector<Chain> chains;

    u64 covered() const { return z * chains.size(); }
};

struct PackingAudit {
    bool ok = true;
    std::string message;
    explicit operator bool() const { return ok; }
};

/// Per-chain validity, common length z, elements <= x, global disjointness.
inline PackingAudit audit_packing(const ChainPacking& p) {
    std::vector<char> used(p.x + 1, 0);
    u64 union_size = 0;
    for (std::size_t i = 0; i < p.chains.size(); ++i) {
        const Chain& c = p.chains[i];
        if (c.relation().kind != RelationKind::divisor) return {false, "chain " + std::to_string(i) + " is not a divisor chain"};
        if (c.length() != p.z) {
            return {false, "chain " + std::to_string(i) + " has length " + std::to_string(c.length())};
        }
        if (const ChainCheck check = validate_chain(c); !check) {
            return {false, "chain " + std::to_string(i) + ": " + check.message};
        }
        for (u64 e : c.elements()) {
            if (e > p.x) return {false, std::to_string(e) + " exceeds x in chain " + std::to_string(i)};
            if (used[e]) return {false, std::to_string(e) + " appears in two chains"};
            used[e] = 1;
            ++union_size;
        }
    }
    if (union_size != p.covered()) return {false, "covered count does not match the union"};
    return {};
}

inline void write_packing(std::ostream& os, const ChainPacking& p) {
    const std::string summary = "x=" + std::to_string(p.x) + " z=" + std::to_string(p.z) +
                                " chains=" + std::to_string(p.chains.size()) + " covered=" + std::to_string(p.covered());
    write_chains(os, Relation::divisor(), p.chains, std::span<const std::string>(&summary, 1));
}

/// One chain 2m - 4m - ... - 2^z m for every odd m <= x / 2^z.
inline ChainPacking geometric_chains(u64 x, u64 z) {
    if (z < 1) throw std::domain_error("geometric_chains: z must be >= 1");
    ChainPacking p{x, z, {}};
    if (z >= 63 || (u64{1} << z) > x) return p;
    const u64 top = x >> z;
    for (u64 m = 1; m <= top; m += 2) {
        std::vector<u64> el;
        el.reserve(z);
        for (u64 k = 1; k <= z; ++k) el.push_back(m << k);
        p.chains.emplace_back(std::move(el));
    }
    return p;
}

/// floor(length / z) consecutive windows of length z, left to right.
inline std::vector<Chain> extract_subchains(const Chain& c, u64 z) {
    if (z < 1) throw std::domain_error("extract_subchains: z must be >= 1");
    std::vector<Chain> out;
    const std::size_t d = c.length() / z;
    for (std::size_t i = 0; i < d; ++i) out.push_back(c.slice(i * z, z));
    return out;
}

namespace detail {

/// Heuristic long path in the divisor graph on `universe` (ascending,
/// max <= x).
///
/// 1. Walk from the vertex of smallest degree, always stepping to the
///    unused neighbour with the fewest unused neighbours (dead ends last,
///    ties to the smallest integer); when stuck, walk again from the start
///    in the other direction.
/// 2. Splice passes: an unused u adjacent to an endpoint is appended, and an
///    unused u adjacent to two consecutive path elements w, next(w) is
///    inserted between them. Repeat until a pass inserts nothing.
class GreedyChainBuilder {
public:
    GreedyChainBuilder(std::vector<u64> universe, u64 x, const Sieve& sieve)
        : x_(x), sieve_(sieve), universe_(std::move(universe)), member_(x + 1, 0), used_(x + 1, 0),
          degree_(x + 1, 0) {
        for (u64 n : universe_) member_[n] = 1;
        for (u64 n : universe_) {
            for (u64 m = 2 * n; m <= x; m += n) {
                if (member_[m]) {
                    ++degree_[n];
                    ++degree_[m];
                }
            }
        }
    }

    Chain build() {
        if (universe_.empty()) return Chain();
        u64 start = universe_.front();
        for (u64 n : universe_) {
            if (degree_[n] < degree_[start]) start = n;
        }
        std::vector<u64> forward{start};
        take(start);
        walk(forward);
        std::vector<u64> backward{start};
        walk(backward);
        std::vector<u64> path(backward.rbegin(), backward.rend());
        path.insert(path.end(), forward.begin() + 1, forward.end());
        splice(path);
        return Chain(std::move(path));
    }

private:
    template <class F>
    void for_each_neighbour(u64 v, F&& fn) const {
        for (u64 d : divisors(v, sieve_)) {
            if (d != v && member_[d]) fn(d);
        }
        for (u64 m = 2 * v; m <= x_; m += v) {
            if (member_[m]) fn(m);
        }
    }

    void take(u64 v) {
        used_[v] = 1;
        for_each_neighbour(v, [this](u64 u) {
            if (!used_[u]) --degree_[u];
        });
    }

    void walk(std::vector<u64>& path) {
        for (;;) {
            std::optional<u64> best;
            auto rank = [this](u64 u) { return std::make_tuple(degree_[u] == 0, degree_[u], u); };
            for_each_neighbour(path.back(), [&](u64 u) {
                if (!used_[u] && (!best || rank(u) < rank(*best))) best = u;
            });
            if (!best) return;
            path.push_back(*best);
            take(*best);
        }
    }

    void splice(std::vector<u64>& path) {
        constexpr u64 kNone = 0;
        std::vector<u64> next(x_ + 1, kNone);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) next[path[i]] = path[i + 1];
        u64 head = path.front();
        u64 tail = path.back();
        for (bool changed = true; changed;) {
            changed = false;
            for (u64 u : universe_) {
                if (used_[u]) continue;
                bool placed = false;
                for_each_neighbour(u, [&](u64 w) {
                    if (placed || !used_[w]) return;
                    if (w == tail) {
                        next[w] = u;
                        tail = u;
                    } else if (w == head) {
                        next[u] = w;
                        head = u;
                    } else if (next[w] != kNone && related_f(u, next[w])) {
                        next[u] = next[w];
                        next[w] = u;
                    } else {
                        return;
                    }
                    placed = true;
                });
                if (placed) {
                    used_[u] = 1;
                    changed = true;
                }
            }
        }
        path.clear();
        for (u64 v = head; v != kNone; v = next[v]) path.push_back(v);
    }

    u64 x_;
    const Sieve& sieve_;
    std::vector<u64> universe_;
    std::vector<char> member_;
    std::vector<char> used_;
    std::vector<u64> degree_;
};

}  // namespace detail

/// A valid divisor chain with every element in A(x). Best-effort length;
/// deterministic for a given x.
inline Chain chain_in_A(u64 x, const Sieve& sieve = Sieve::shared()) {
    if (x < 1) throw std::domain_error("chain_in_A: x must be >= 1");
    return detail::GreedyChainBuilder(enumerate_A(x, sieve), x, sieve).build();
}

/// A valid divisor chain over [1, x], same heuristic on the full range.
inline Chain long_chain(u64 x, const Sieve& sieve = Sieve::shared()) {
    if (x < 1) throw std::domain_error("long_chain: x must be >= 1");
    detail::require_in_sieve(x, sieve, "long_chain");
    std::vector<u64> all(x);
    for (u64 i = 0; i < x; ++i) all[i] = i + 1;
    return detail::GreedyChainBuilder(all, x, sieve).build();
}

namespace detail {

class RecursivePacker {
public:
    RecursivePacker(u64 z, const Sieve& sieve) : z_(z), sieve_(sieve) {}

    /// Chains of length z over [1, x]. The better of the recursive
    /// construction and the geometric family is kept at every level.
    const std::vector<Chain>& pack(u64 x) {
        if (auto it = memo_.find(x); it != memo_.end()) return it->second;
        std::vector<Chain> recursive;
        for (u64 b : enumerate_B(x, sieve_)) {
            const std::vector<Chain>& sub = pack(x / b);
            for (const Chain& c : sub) recursive.push_back(c.scaled(b));
        }
        for (Chain& c : extract_subchains(chain_in_A(x, sieve_), z_)) recursive.push_back(std::move(c));
        ChainPacking geometric = geometric_chains(x, z_);
        std::vector<Chain>& slot = memo_[x];
        slot = recursive.size() >= geometric.chains.size() ? std::move(recursive) : std::move(geometric.chains);
        return slot;
    }

private:
    u64 z_;
    const Sieve& sieve_;
    std::map<u64, std::vector<Chain>> memo_;  // keyed by the quotient x/b
};

}  // namespace detail

inline ChainPacking pack_chains(u64 x, u64 z, const Sieve& sieve = Sieve::shared()) {
    if (x < 1 || z < 1) throw std::domain_error("pack_chains: need x >= 1 and z >= 1");
    detail::RecursivePacker packer(z, sieve);
    return ChainPacking{x, z, packer.pack(x)};
}

// ---------------------------------------------------------------------------
// Reductions between the packing quantities

struct BoundsEntry {
    u64 x = 0;
    u64 y = 0;
    u64 z = 0;
    u64 single_chain = 0;     // F(x, y) >= f(x) >= this
    u64 packing_length = 0;   // ceil(x / y)
    u64 packing_covered = 0;  // F(x, y) >= R(x, ceil(x/y)) >= this
    u64 f_lower() const { return std::max(single_chain, packing_covered); }

    // Filled only when x is within the packing oracle's range.
    std::optional<u64> exact_F;
    std::optional<u64> exact_T;  // T(x, z)
    std::optional<u64> exact_G;  // G(x, floor(x/z))
    bool consistent = true;      // exact_F >= f_lower and exact_T <= exact_G
};

inline BoundsEntry lift_reductions(u64 x, u64 y, u64 z, const OracleLimits& limits = {},
                                   const Sieve& sieve = Sieve::shared()) {
    if (y < 1 || y > x || z < 1) throw std::domain_error("lift_reductions: need x >= y >= 1 and z >= 1");
    BoundsEntry e;
    e.x = x;
    e.y = y;
    e.z = z;
    e.single_chain = std::max(long_chain(x, sieve).length(), chain_in_A(x, sieve).length());
    e.packing_length = ceil_div(x, y);
    e.packing_covered = pack_chains(x, e.packing_length, sieve).covered();
    if (x <= limits.max_pack) {
        e.exact_F = brute_F(x, y, limits).value;
        e.exact_T = brute_T(x, z, limits).value;
        e.exact_G = x / z >= 1 ? brute_G(x, x / z, limits).value : 0;
        e.consistent = *e.exact_F >= e.f_lower() && *e.exact_T <= *e.exact_G;
    }
    return e;
}

}  // namespace divgraph
