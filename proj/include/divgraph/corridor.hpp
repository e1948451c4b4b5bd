#pragma once

// Normalised growth of A(x), B(x) and the B(x) harmonic sum, with corridors
// frozen from a single-threaded pilot run.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "divgraph/ss_sets.hpp"

namespace divgraph {

struct CorridorPoint {
    u64 x = 0;
    u64 count_A = 0;
    u64 count_B = 0;
    double sum_inv_b = 0.0;

    double a_ratio() const { return static_cast<double>(count_A) * std::log(static_cast<double>(x)) / static_cast<double>(x); }
    double b_ratio() const { return static_cast<double>(count_B) * std::log(static_cast<double>(x)) / static_cast<double>(x); }
    /// (sum_{b in B(x)} 1/b - 1) log x
    double drift() const { return (sum_inv_b - 1.0) * std::log(static_cast<double>(x)); }
};

inline CorridorPoint corridor_point(u64 x, const Sieve& sieve = Sieve::shared()) {
    return {x, count_A(x, sieve), count_B(x, sieve), harmonic_sum_B(x, sieve)};
}

struct Corridor {
    double lo;
    double hi;
    bool contains(double v) const { return lo <= v && v <= hi; }
};

namespace pilot {

/// Exact counts and sums at the anchor points.
inline constexpr std::array<CorridorPoint, 3> kAnchors{{
    {1'000, 215, 296, 0.91602490959392047},
    {100'000, 13'254, 18'582, 0.95076521131142311},
    {10'000'000, 945'314, 1'332'379, 0.96528584475722068},
}};

/// Relative tolerance on the anchor sums when the sweep is multi-threaded.
inline constexpr double kSumTolerance = 1e-9;

/// Anchor range widened by 5% on each side.
inline constexpr double kWidening = 0.05;

inline Corridor widen(double a, double b, double c) {
    const double lo = std::min({a, b, c});
    const double hi = std::max({a, b, c});
    return {lo - kWidening * std::fabs(lo), hi + kWidening * std::fabs(hi)};
}

inline Corridor a_ratio() { return widen(kAnchors[0].a_ratio(), kAnchors[1].a_ratio(), kAnchors[2].a_ratio()); }
inline Corridor b_ratio() { return widen(kAnchors[0].b_ratio(), kAnchors[1].b_ratio(), kAnchors[2].b_ratio()); }
inline Corridor drift() { return widen(kAnchors[0].drift(), kAnchors[1].drift(), kAnchors[2].drift()); }

}  // namespace pilot

/// from, 2 from, 4 from, ... below `to`, then `to` itself.
inline std::vector<u64> doubling_grid(u64 from, u64 to) {
    std::vector<u64> out;
    for (u64 x = from; x < to; x *= 2) out.push_back(x);
    out.push_back(to);
    return out;
}

/// `count` points spread geometrically over [from, to], rounded, deduplicated.
inline std::vector<u64> geometric_points(u64 from, u64 to, std::size_t count) {
    std::vector<u64> out;
    if (count == 0) return out;
    if (count == 1 || from == to) return {to};
    const double ratio = std::log(static_cast<double>(to) / static_cast<double>(from)) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        u64 x = static_cast<u64>(std::llround(static_cast<double>(from) * std::exp(ratio * static_cast<double>(i))));
        x = std::clamp(x, from, to);
        if (out.empty() || out.back() != x) out.push_back(x);
    }
    out.back() = to;
    return out;
}

}  // namespace divgraph
