#pragma once

// Membership, enumeration and identities for the Schinzel-Szekeres sets
//
//   A(x) = { n : S(n) <= x }
//   B(x) = { 2 <= n <= x : head terms of S(n) <= x < n * P^-(n) }
//
// B(x) is the set of integers <= x outside A(x) that are minimal for
// divisibility. Every n <= x outside A(x) has exactly one divisor in B(x),
// which is what makes the floor and parity identities below exact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "divgraph/arith.hpp"
#include "divgraph/number_core.hpp"

namespace divgraph {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

inline void require_in_sieve(u64 x, const Sieve& sieve, const char* op) {
    if (!sieve.covers(x)) {
        throw std::out_of_range(std::string(op) + ": x=" + std::to_string(x) + " exceeds sieve limit " +
                                std::to_string(sieve.limit()));
    }
}

inline bool in_B_terms(u64 n, u64 x, const SzTerms& t) {
    return n >= 2 && n <= x && t.head_max <= x && t.last > x;
}

}  // namespace detail

inline bool in_A(u64 n, u64 x, const Sieve& sieve = Sieve::shared()) {
    if (n == 0 || x == 0) throw std::domain_error("in_A: n and x must be >= 1");
    if (n > x) return false;  // S(n) >= n
    return sz_terms(n, sieve).value() <= x;
}

inline bool in_B(u64 n, u64 x, const Sieve& sieve = Sieve::shared()) {
    if (n == 0 || x == 0) throw std::domain_error("in_B: n and x must be >= 1");
    if (n < 2 || n > x) return false;
    return detail::in_B_terms(n, x, sz_terms(n, sieve));
}

inline std::vector<u64> enumerate_A(u64 x, const Sieve& sieve = Sieve::shared()) {
    detail::require_in_sieve(x, sieve, "enumerate_A");
    std::vector<u64> out;
    for (u64 n = 1; n <= x; ++n) {
        if (sz_terms(n, sieve).value() <= x) out.push_back(n);
    }
    return out;
}

inline std::vector<u64> enumerate_B(u64 x, const Sieve& sieve = Sieve::shared()) {
    detail::require_in_sieve(x, sieve, "enumerate_B");
    std::vector<u64> out;
    for (u64 n = 2; n <= x; ++n) {
        if (detail::in_B_terms(n, x, sz_terms(n, sieve))) out.push_back(n);
    }
    return out;
}

inline u64 count_A(u64 x, const Sieve& sieve = Sieve::shared()) {
    detail::require_in_sieve(x, sieve, "count_A");
    u64 c = 0;
    for (u64 n = 1; n <= x; ++n) c += sz_terms(n, sieve).value() <= x;
    return c;
}

inline u64 count_B(u64 x, const Sieve& sieve = Sieve::shared()) {
    detail::require_in_sieve(x, sieve, "count_B");
    u64 c = 0;
    for (u64 n = 2; n <= x; ++n) c += detail::in_B_terms(n, x, sz_terms(n, sieve));
    return c;
}

/// n in A(x, z, t) = { n <= x : P^-(n) >= z and S(n) <= n t }.
inline bool in_A_xzt(u64 n, u64 x, u64 z, u64 t, const Sieve& sieve = Sieve::shared()) {
    if (n == 0 || x == 0 || z == 0 || t == 0) throw std::domain_error("in_A_xzt: arguments must be >= 1");
    if (n > x) return false;
    const Factorization f = factor(n, sieve);
    if (f.smallest_prime() < z) return false;
    return schinzel_szekeres(f) <= checked_mul(n, t);
}

inline std::vector<u64> enumerate_A_xzt(u64 x, u64 z, u64 t, const Sieve& sieve = Sieve::shared()) {
    detail::require_in_sieve(x, sieve, "enumerate_A_xzt");
    std::vector<u64> out;
    for (u64 n = 1; n <= x; ++n) {
        if (in_A_xzt(n, x, z, t, sieve)) out.push_back(n);
    }
    return out;
}

/// A(x, y) = { n in A(x) : P(n) <= y }, by direct filtering.
inline std::vector<u64> enumerate_A_xy(u64 x, u64 y, const Sieve& sieve = Sieve::shared()) {
    std::vector<u64> out;
    for (u64 n : enumerate_A(x, sieve)) {
        if (factor(n, sieve).largest_prime() <= y) out.push_back(n);
    }
    return out;
}

/// The multiset {1} + sum over primes p <= min(y, sqrt x) of p * A(x/p, p),
/// in block order (ascending p, ascending within a block). Duplicates, if
/// any, are kept so that callers can check the union is disjoint.
inline std::vector<u64> decompose_A_xy(u64 x, u64 y, const Sieve& sieve = Sieve::shared()) {
    std::vector<u64> out{1};
    const u64 top = std::min(y, isqrt(x));
    for (u64 p = 2; p <= top; ++p) {
        if (!sieve.is_prime(p)) continue;
        for (u64 m : enumerate_A_xy(x / p, p, sieve)) out.push_back(p * m);
    }
    return out;
}

/// The unique element of B(x) dividing n, for n <= x outside A(x): the
/// product p_1...p_j of the j largest primes, with j the first index whose
/// term p_1...p_{j-1} p_j^2 exceeds x.
inline u64 unique_b_divisor(u64 n, u64 x, const Sieve& sieve = Sieve::shared(), bool verify = false) {
    if (n == 0 || n > x) throw std::domain_error("unique_b_divisor: need 1 <= n <= x");
    const Factorization f = factor(n, sieve);
    if (schinzel_szekeres(f) <= x) throw std::domain_error("unique_b_divisor: n is in A(x)");
    u64 prefix = 1;
    u64 b = 0;
    for (u64 p : f.flattened()) {
        if (checked_mul(checked_mul(prefix, p), p) > x) {
            b = prefix * p;
            break;
        }
        prefix *= p;
    }
    if (verify) {
        unsigned hits = 0;
        for (u64 d : divisors(f)) hits += in_B(d, x, sieve);
        if (hits != 1 || !in_B(b, x, sieve)) {
            throw std::logic_error("unique_b_divisor: " + std::to_string(n) + " has " + std::to_string(hits) +
                                   " divisors in B(" + std::to_string(x) + ")");
        }
    }
    return b;
}

/// floor(x) - A(x) - sum_{b in B(x)} floor(x/b). Always zero.
inline std::int64_t check_floor_identity(u64 x, const Sieve& sieve = Sieve::shared()) {
    detail::require_in_sieve(x, sieve, "check_floor_identity");
    std::int64_t residual = static_cast<std::int64_t>(x) - static_cast<std::int64_t>(count_A(x, sieve));
    for (u64 b : enumerate_B(x, sieve)) residual -= static_cast<std::int64_t>(x / b);
    return residual;
}

/// A(x) - sum_{b in B(x)} e(x/b) + e(x). Zero for every x >= 2; at x = 1
/// the set B(1) is empty and the residual is 2.
inline std::int64_t check_parity_identity(u64 x, const Sieve& sieve = Sieve::shared()) {
    detail::require_in_sieve(x, sieve, "check_parity_identity");
    std::int64_t residual = static_cast<std::int64_t>(count_A(x, sieve)) + parity_indicator(Rational(x));
    for (u64 b : enumerate_B(x, sieve)) residual -= parity_indicator(Rational(x, b));
    return residual;
}

inline double harmonic_sum_B(u64 x, const Sieve& sieve = Sieve::shared()) {
    if (x < 2) throw std::domain_error("harmonic_sum_B: x must be >= 2");
    CompensatedSum sum;
    for (u64 b : enumerate_B(x, sieve)) sum.add(1.0 / static_cast<double>(b));
    return sum.value();
}

/// Sum of 1/b over b in B(x) with b > x/t.
inline double tail_sum_B(u64 x, u64 t, const Sieve& sieve = Sieve::shared()) {
    if (x < 2 || t < 2 || t > x) throw std::domain_error("tail_sum_B: need x >= 2 and 2 <= t <= x");
    CompensatedSum sum;
    for (u64 b : enumerate_B(x, sieve)) {
        if (checked_mul(b, t) > x) sum.add(1.0 / static_cast<double>(b));
    }
    return sum.value();
}

// ---------------------------------------------------------------------------
// Range sweeps

struct SetSweepRow {
    u64 x = 0;
    u64 count_A = 0;
    u64 count_B = 0;
    double harmonic_B = 0.0;
    std::int64_t floor_identity_residual = 0;
    std::int64_t parity_identity_residual = 0;
};

namespace detail {

/// Incremental sweep over consecutive x. A(x) comes from a histogram of
/// S(n); B(x) is kept as an active list where b enters at
/// max(b, head terms) and leaves at b * P^-(b).
class SetSweeper {
public:
    SetSweeper(u64 from, u64 to, const Sieve& sieve) : from_(from), to_(to) {
        require_in_sieve(to, sieve, "sweep_sets");
        s_hist_.assign(to + 2, 0);
        entry_offsets_.assign(to + 2, 0);
        std::vector<u64> exits(to + 1, 0);
        for (u64 n = 1; n <= to; ++n) {
            const SzTerms t = sz_terms(n, sieve);
            const u64 s = t.value();
            if (s <= to) ++s_hist_[s];
            if (n < 2) continue;
            const u64 enter = std::max(n, t.head_max);
            if (enter <= to && enter < t.last) {
                exits[n] = t.last;
                ++entry_offsets_[enter + 1];
            }
        }
        for (u64 v = 1; v <= to + 1; ++v) entry_offsets_[v] += entry_offsets_[v - 1];
        entries_.resize(entry_offsets_[to + 1]);
        std::vector<u64> fill(entry_offsets_.begin(), entry_offsets_.end() - 1);
        for (u64 n = 2; n <= to; ++n) {
            if (exits[n] == 0) continue;
            const u64 enter = std::max(n, sz_terms(n, sieve).head_max);
            entries_[fill[enter]++] = {n, exits[n]};
        }
    }

    std::vector<SetSweepRow> run() {
        std::vector<SetSweepRow> rows;
        rows.reserve(to_ - from_ + 1);
        u64 a_count = 0;
        std::vector<Entry> active;
        for (u64 v = 1; v < from_; ++v) {
            a_count += s_hist_[v];
            admit(v, active);
        }
        for (u64 x = from_; x <= to_; ++x) {
            a_count += s_hist_[x];
            admit(x, active);
            std::erase_if(active, [x](const Entry& e) { return e.exit <= x; });

            SetSweepRow row;
            row.x = x;
            row.count_A = a_count;
            row.count_B = active.size();
            CompensatedSum harmonic;
            std::int64_t floor_sum = 0;
            std::int64_t parity_sum = 0;
            for (const Entry& e : active) {
                const u64 q = x / e.b;
                floor_sum += static_cast<std::int64_t>(q);
                parity_sum += static_cast<std::int64_t>(q & 1u);
                harmonic.add(1.0 / static_cast<double>(e.b));
            }
            row.harmonic_B = harmonic.value();
            row.floor_identity_residual = static_cast<std::int64_t>(x) - static_cast<std::int64_t>(a_count) - floor_sum;
            row.parity_identity_residual =
                static_cast<std::int64_t>(a_count) - parity_sum + static_cast<std::int64_t>(x & 1u);
            rows.push_back(row);
        }
        return rows;
    }

private:
    struct Entry {
        u64 b;
        u64 exit;
    };

    void admit(u64 x, std::vector<Entry>& active) const {
        for (u64 i = entry_offsets_[x]; i < entry_offsets_[x + 1]; ++i) active.push_back(entries_[i]);
    }

    u64 from_;
    u64 to_;
    std::vector<u64> s_hist_;
    std::vector<u64> entry_offsets_;
    std::vector<Entry> entries_;
};

}  // namespace detail

/// Rows for every integer x in [from, to]. The range is split across
/// `threads` workers, each owning its own sweeper; rows come back in order.
inline std::vector<SetSweepRow> sweep_sets(u64 from, u64 to, unsigned threads = 1,
                                           const Sieve& sieve = Sieve::shared()) {
    if (from < 1 || from > to) throw std::domain_error("sweep_sets: need 1 <= from <= to");
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(to - from + 1)));
    if (threads == 1) return detail::SetSweeper(from, to, sieve).run();

    std::vector<std::vector<SetSweepRow>> parts(threads);
    std::vector<std::thread> workers;
    const u64 span = (to - from + 1) / threads;
    for (unsigned i = 0; i < threads; ++i) {
        const u64 lo = from + i * span;
        const u64 hi = (i + 1 == threads) ? to : lo + span - 1;
        workers.emplace_back([&, i, lo, hi] { parts[i] = detail::SetSweeper(lo, hi, sieve).run(); });
    }
    for (auto& w : workers) w.join();
    std::vector<SetSweepRow> rows;
    for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());
    return rows;
}

/// One row computed through the point-query functions.
inline SetSweepRow set_row(u64 x, const Sieve& sieve = Sieve::shared()) {
    SetSweepRow row;
    row.x = x;
    row.count_A = count_A(x, sieve);
    row.count_B = count_B(x, sieve);
    row.harmonic_B = x >= 2 ? harmonic_sum_B(x, sieve) : 0.0;
    row.floor_identity_residual = check_floor_identity(x, sieve);
    row.parity_identity_residual = check_parity_identity(x, sieve);
    return row;
}

// ---------------------------------------------------------------------------
// Analytic checkers

/// eta(s, t) = s - 1 - log s / (1 - log s / log 9t), for t >= 1, 0 < s <= t.
inline double eta(double s, double t) {
    if (!(t >= 1.0) || !(s > 0.0) || !(s <= t)) {
        throw std::domain_error("eta: need t >= 1 and 0 < s <= t");
    }
    const double ls = std::log(s);
    return s - 1.0 - ls / (1.0 - ls / std::log(9.0 * t));
}

struct EtaSample {
    double s = 0.0;
    double t = 0.0;
    double value = 0.0;
};

/// `count` points from lo to hi, equally spaced in log scale; the end
/// points are exact.
inline std::vector<double> log_space(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(lo <= hi)) throw std::domain_error("log_space: need 0 < lo <= hi");
    std::vector<double> out;
    if (count == 0) return out;
    if (count == 1) return {hi};
    const double a = std::log(lo);
    const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out.push_back(std::exp(a + step * static_cast<double>(i)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

/// Smallest eta(s, t) over `points` log-spaced s in [s_floor * t, t].
inline EtaSample eta_min_over_s(double t, std::size_t points, double s_floor = 1e-12) {
    EtaSample best{0.0, t, std::numeric_limits<double>::infinity()};
    for (double s : log_space(s_floor * t, t, points)) {
        const double v = eta(s, t);
        if (v < best.value) best = {s, t, v};
    }
    return best;
}

/// Smallest eta over `count` random points: log t uniform on [0, log t_max],
/// log(s/t) uniform on [log s_floor, 0].
inline EtaSample eta_min_random(std::size_t count, double t_max, std::uint64_t seed, double s_floor = 1e-12) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lt(0.0, std::log(t_max));
    std::uniform_real_distribution<double> ls(std::log(s_floor), 0.0);
    EtaSample best{0.0, 0.0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < count; ++i) {
        const double t = std::exp(lt(rng));
        const double s = std::min(t, t * std::exp(ls(rng)));
        const double v = eta(s, t);
        if (v < best.value) best = {s, t, v};
    }
    return best;
}

struct Weight {
    u64 b;
    u64 m;
};

/// Integer weights m(b) on B(x); elements of B(x) not listed carry m = 0.
struct WeightFamily {
    u64 x = 0;
    u64 y = 0;
    std::vector<Weight> weights;  // ascending b, no repeats
};

/// Throws std::invalid_argument unless every listed b is in B(x),
/// 0 <= m(b) <= x/b and the weights sum to at most y.
inline void validate_weight_family(const WeightFamily& w, const Sieve& sieve = Sieve::shared()) {
    if (w.y < 1 || w.x < 2 * w.y) throw std::invalid_argument("weight family: need x >= 2y >= 2");
    u64 total = 0;
    u64 prev = 0;
    for (const Weight& e : w.weights) {
        if (e.b <= prev) throw std::invalid_argument("weight family: b values must be strictly ascending");
        prev = e.b;
        if (!in_B(e.b, w.x, sieve)) {
            throw std::invalid_argument("weight family: " + std::to_string(e.b) + " is not in B(x)");
        }
        if (e.m > w.x / e.b) throw std::invalid_argument("weight family: m(b) > x/b at b=" + std::to_string(e.b));
        total = checked_add(total, e.m);
    }
    if (total > w.y) throw std::invalid_argument("weight family: sum of m(b) exceeds y");
}

/// RHS - LHS of the weighted-sum inequality
///   sum_{m(b) >= 1} 1 / (b log(9x / (b m(b))))  <=  1/log(9x/y) - 1/(5 log x).
/// Terms with m(b) = 0 are skipped. The caller validates the family.
inline double lemma211_margin(const WeightFamily& w) {
    CompensatedSum lhs;
    const double x = static_cast<double>(w.x);
    for (const Weight& e : w.weights) {
        if (e.m == 0) continue;
        const double bm = static_cast<double>(e.b) * static_cast<double>(e.m);
        lhs.add(1.0 / (static_cast<double>(e.b) * std::log(9.0 * x / bm)));
    }
    const double rhs = 1.0 / std::log(9.0 * x / static_cast<double>(w.y)) - 1.0 / (5.0 * std::log(x));
    return rhs - lhs.value();
}

enum class WeightStrategy {
    sparse_uniform,     // a few random b, random admissible m
    harmonic_rounding,  // m(b) = randomized rounding of s*y/b
    concentrated,       // mass on the smallest elements of B(x)
};

/// Draws a random family satisfying the admissibility constraints.
/// `bset` must be enumerate_B(x).
template <class Rng>
WeightFamily random_weight_family(u64 x, u64 y, const std::vector<u64>& bset, WeightStrategy strategy, Rng& rng) {
    WeightFamily w{x, y, {}};
    if (bset.empty()) return w;
    u64 budget = y;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto take = [&](u64 b, u64 m) {
        m = std::min({m, x / b, budget});
        if (m == 0) return;
        budget -= m;
        w.weights.push_back({b, m});
    };
    switch (strategy) {
        case WeightStrategy::sparse_uniform: {
            std::uniform_int_distribution<std::size_t> pick_count(1, std::min<std::size_t>(bset.size(), 64));
            std::uniform_int_distribution<std::size_t> pick(0, bset.size() - 1);
            std::vector<u64> chosen;
            const std::size_t k = pick_count(rng);
            for (std::size_t i = 0; i < k; ++i) chosen.push_back(bset[pick(rng)]);
            std::sort(chosen.begin(), chosen.end());
            chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
            for (u64 b : chosen) {
                std::uniform_int_distribution<u64> m(0, x / b);
                take(b, m(rng));
            }
            break;
        }
        case WeightStrategy::harmonic_rounding: {
            const double scale = 0.25 + 0.75 * unit(rng);
            for (u64 b : bset) {
                const double target = scale * static_cast<double>(y) / static_cast<double>(b);
                u64 m = static_cast<u64>(target);
                if (unit(rng) < target - static_cast<double>(m)) ++m;
                take(b, m);
                if (budget == 0) break;
            }
            break;
        }
        case WeightStrategy::concentrated: {
            std::uniform_int_distribution<std::size_t> pick_count(1, std::min<std::size_t>(bset.size(), 8));
            const std::size_t k = pick_count(rng);
            for (std::size_t i = 0; i < k; ++i) take(bset[i], x / bset[i]);
            break;
        }
    }
    return w;
}

struct Lemma211Summary {
    u64 x = 0;
    u64 y = 0;
    u64 families = 0;
    double min_margin = 0.0;
    double max_lhs = 0.0;
    bool all_admissible = true;
};

/// Margin search over `families` random families, cycling the strategies.
/// Membership in B(x) holds by construction; the weight bounds are checked
/// on every family before it is scored.
inline Lemma211Summary lemma211_search(u64 x, u64 y, u64 families, std::uint64_t seed,
                                       const Sieve& sieve = Sieve::shared()) {
    const std::vector<u64> bset = enumerate_B(x, sieve);
    std::mt19937_64 rng(seed);
    Lemma211Summary out{x, y, 0, std::numeric_limits<double>::infinity(), 0.0, true};
    const double rhs = 1.0 / std::log(9.0 * static_cast<double>(x) / static_cast<double>(y)) -
                       1.0 / (5.0 * std::log(static_cast<double>(x)));
    constexpr WeightStrategy kStrategies[] = {WeightStrategy::sparse_uniform, WeightStrategy::harmonic_rounding,
                                              WeightStrategy::concentrated};
    for (u64 i = 0; i < families; ++i) {
        const WeightFamily w = random_weight_family(x, y, bset, kStrategies[i % 3], rng);
        // Membership is guaranteed by construction from bset; check the bounds.
        u64 total = 0;
        for (const Weight& e : w.weights) {
            if (e.m == 0 || e.m > x / e.b) out.all_admissible = false;
            total += e.m;
        }
        if (total > y) out.all_admissible = false;
        const double margin = lemma211_margin(w);
        out.min_margin = std::min(out.min_margin, margin);
        out.max_lhs = std::max(out.max_lhs, rhs - margin);
        ++out.families;
    }
    return out;
}

}  // namespace divgraph
