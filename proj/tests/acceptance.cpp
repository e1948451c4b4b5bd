// Acceptance run: one PASS/FAIL line per criterion, exit status = number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "divgraph/cli.hpp"
#include "divgraph/divgraph.hpp"

using namespace divgraph;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) { return format_double(v); }

// 1 and 2 share the sweep.
std::vector<SetSweepRow> g_sweep;

Outcome floor_identity() {
    g_sweep = sweep_sets(2, 100'000);
    std::uint64_t bad = 0;
    for (const auto& r : g_sweep) bad += r.floor_identity_residual != 0;
    const auto xs = geometric_points(1'000, 10'000'000, 100);
    std::uint64_t bad_points = 0;
    for (u64 x : xs) bad_points += check_floor_identity(x) != 0;
    std::ostringstream os;
    os << g_sweep.size() << " sweep values with " << bad << " nonzero residuals; " << xs.size()
       << " geometric points up to 1e7 with " << bad_points << " nonzero";
    return {bad == 0 && bad_points == 0 && g_sweep.size() == 99'999, os.str()};
}

Outcome parity_identity() {
    std::uint64_t bad = 0;
    for (const auto& r : g_sweep) bad += r.parity_identity_residual != 0;
    return {bad == 0 && g_sweep.size() == 99'999,
            std::to_string(g_sweep.size()) + " values, " + std::to_string(bad) + " nonzero residuals"};
}

Outcome unique_divisor() {
    std::uint64_t checked = 0, bad = 0;
    for (u64 x : {10u, 100u, 1'000u, 10'000u}) {
        std::vector<char> in_b(x + 1, 0);
        for (u64 b : enumerate_B(x)) in_b[b] = 1;
        for (u64 n = 1; n <= x; ++n) {
            if (schinzel_szekeres(n) <= x) continue;
            ++checked;
            unsigned hits = 0;
            u64 hit = 0;
            for (u64 d : divisors(n)) {
                if (in_b[d]) {
                    ++hits;
                    hit = d;
                }
            }
            if (hits != 1 || unique_b_divisor(n, x) != hit) ++bad;
        }
    }
    return {bad == 0 && checked > 0, std::to_string(checked) + " integers outside A(x), " + std::to_string(bad) + " bad"};
}

Outcome pairwise_lcm() {
    // lcm(b, b') <= x for some pair iff some n <= x is a multiple of two
    // elements of B(x).
    std::uint64_t bad_x = 0, pairs = 0;
    for (u64 x = 2; x <= 3'000; ++x) {
        const auto bset = enumerate_B(x);
        pairs += bset.size() * (bset.size() - 1) / 2;
        std::vector<unsigned char> hits(x + 1, 0);
        bool ok = true;
        for (u64 b : bset) {
            for (u64 m = b; m <= x; m += b) {
                if (++hits[m] > 1) ok = false;
            }
        }
        bad_x += !ok;
    }
    const u64 big = 1'000'000;
    const auto bset = enumerate_B(big);
    std::mt19937_64 rng(cli::kDefaultSeed);
    std::uniform_int_distribution<std::size_t> pick(0, bset.size() - 1);
    std::uint64_t bad_random = 0;
    for (int i = 0; i < 100'000; ++i) {
        const std::size_t a = pick(rng);
        std::size_t b = pick(rng);
        while (b == a) b = pick(rng);
        bad_random += checked_lcm(bset[a], bset[b]) <= big;
    }
    std::ostringstream os;
    os << pairs << " pairs over x <= 3000 (" << bad_x << " bad x); 1e5 random pairs at x=1e6 (" << bad_random
       << " bad)";
    return {bad_x == 0 && bad_random == 0, os.str()};
}

Outcome decomposition() {
    std::uint64_t cases = 0, bad = 0;
    for (u64 x = 1; x <= 2'000; ++x) {
        for (u64 y : {u64{2}, u64{5}, isqrt(x), x}) {
            if (y < 1) continue;
            ++cases;
            auto parts = decompose_A_xy(x, y);
            std::sort(parts.begin(), parts.end());
            if (parts != enumerate_A_xy(x, y)) ++bad;
        }
    }
    return {bad == 0, std::to_string(cases) + " (x, y) cases, " + std::to_string(bad) + " mismatches"};
}

Outcome eta_nonnegative() {
    constexpr double kTolerance = -1e-12;
    double worst = std::numeric_limits<double>::infinity();
    EtaSample at{};
    for (double t : log_space(1.0, 1e6, 200)) {
        const EtaSample m = eta_min_over_s(t, 200);
        if (m.value < worst) {
            worst = m.value;
            at = m;
        }
    }
    const EtaSample r = eta_min_random(10'000, 1e6, cli::kDefaultSeed);
    const bool ok = worst >= kTolerance && r.value >= kTolerance;
    return {ok, "grid min " + fmt(worst) + " at (s,t)=(" + fmt(at.s) + "," + fmt(at.t) + "); random min " +
                    fmt(r.value)};
}

Outcome oracle_sandwich() {
    std::uint64_t checks = 0;
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 5) failures.push_back(what);
    };
    for (u64 x = 1; x <= 12; ++x) {
        const u64 f = brute_f(x).value;
        const u64 g = brute_g(x).value;
        expect(f <= g, "f<=g x=" + std::to_string(x));
        const PackingOracle pf(x, Relation::divisor());
        const PackingOracle pg(x, Relation::lcm_bounded(x));
        std::vector<u64> R(x + 1), T(x + 1), F(x + 1), G(x + 1);
        for (u64 k = 1; k <= x; ++k) {
            R[k] = brute_R(x, k).value;
            T[k] = brute_T(x, k).value;
            F[k] = pf.best_with_chains(k).value;
            G[k] = pg.best_with_chains(k).value;
            const std::string at = " x=" + std::to_string(x) + " k=" + std::to_string(k);
            expect(R[k] == pf.best_with_length(k).value, "R oracles agree" + at);
            expect(T[k] == pg.best_with_length(k).value, "T oracles agree" + at);
            expect(R[k] <= T[k], "R<=T" + at);
            expect(F[k] <= G[k], "F<=G" + at);
            expect(F[k] >= f, "F>=f" + at);
        }
        for (u64 y = 1; y <= x; ++y) {
            expect(F[y] >= R[ceil_div(x, y)], "F(x,y)>=R(x,ceil(x/y)) x=" + std::to_string(x) + " y=" + std::to_string(y));
        }
        for (u64 z = 1; z <= x; ++z) {
            const u64 gz = x / z >= 1 ? G[x / z] : 0;
            expect(T[z] <= gz, "T(x,z)<=G(x,floor(x/z)) x=" + std::to_string(x) + " z=" + std::to_string(z));
        }
    }
    std::string detail = std::to_string(checks) + " relations checked for x <= 12";
    for (const auto& f : failures) detail += "; failed " + f;
    return {failures.empty(), detail};
}

const u64 kGridX[] = {100, 1'000, 10'000, 100'000};
const u64 kGridZ[] = {2, 3, 4, 8};

Outcome constructor_soundness() {
    std::uint64_t audited = 0;
    std::vector<std::string> failures;
    for (u64 x : kGridX) {
        for (u64 z : kGridZ) {
            for (const ChainPacking& p : {geometric_chains(x, z), pack_chains(x, z)}) {
                ++audited;
                if (const PackingAudit a = audit_packing(p); !a) {
                    failures.push_back("x=" + std::to_string(x) + " z=" + std::to_string(z) + ": " + a.message);
                }
            }
        }
    }
    std::uint64_t compared = 0;
    for (u64 x = 1; x <= 30; ++x) {
        for (u64 z : {1u, 2u, 3u, 4u, 5u, 6u, 8u}) {
            if (z > x) continue;
            ++compared;
            const u64 built = pack_chains(x, z).covered();
            const u64 exact = brute_R(x, z).value;
            if (built > exact) {
                failures.push_back("pack(" + std::to_string(x) + "," + std::to_string(z) + ")=" + std::to_string(built) +
                                   " > R=" + std::to_string(exact));
            }
        }
    }
    std::string detail = std::to_string(audited) + " packings audited; " + std::to_string(compared) +
                         " (x, z) pairs with x <= 30 compared against exact R";
    for (const auto& f : failures) detail += "; " + f;
    return {failures.empty(), detail};
}

Outcome geometric_bound() {
    std::vector<std::string> failures;
    std::uint64_t checked = 0;
    for (u64 x : kGridX) {
        for (u64 z : kGridZ) {
            if (x < (u64{1} << z)) continue;
            ++checked;
            const u64 covered = geometric_chains(x, z).covered();
            // covered >= z x / 2^(z+1), in integers
            if ((covered << (z + 1)) < z * x) {
                failures.push_back("(" + std::to_string(x) + "," + std::to_string(z) + ") covered " +
                                   std::to_string(covered) + " < " + fmt(double(z * x) / double(u64{1} << (z + 1))));
            }
        }
    }
    std::string detail = std::to_string(checked) + " grid points";
    for (const auto& f : failures) detail += "; " + f;
    return {failures.empty(), detail};
}

Outcome corridors() {
    std::vector<std::string> failures;
    // Frozen anchors, single-threaded: exact.
    for (const CorridorPoint& a : pilot::kAnchors) {
        const CorridorPoint p = corridor_point(a.x);
        if (p.count_A != a.count_A || p.count_B != a.count_B || p.sum_inv_b != a.sum_inv_b) {
            failures.push_back("anchor " + std::to_string(a.x) + " not reproduced");
        }
    }
    // Multi-threaded sweep of the 1e5 anchor: relative tolerance.
    {
        const auto rows = sweep_sets(99'000, 100'000, 4);
        const CorridorPoint& a = pilot::kAnchors[1];
        const SetSweepRow& r = rows.back();
        const double rel = std::fabs(r.harmonic_B - a.sum_inv_b) / a.sum_inv_b;
        if (r.count_A != a.count_A || r.count_B != a.count_B || rel > pilot::kSumTolerance) {
            failures.push_back("threaded sweep drifts from the 1e5 anchor (rel " + fmt(rel) + ")");
        }
    }
    // The report itself.
    const char* argv[] = {"divgraph", "bounds", "--kind", "sets", "--from", "1000", "--to", "10000000"};
    std::ostringstream out, err;
    const int rc = cli::run(8, argv, out, err);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0, outside = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.size() < 6 || line.substr(line.size() - 6) != ",1,1,1") ++outside;
    }
    if (rc != 0 || rows == 0 || outside != 0) {
        failures.push_back("bounds report exit " + std::to_string(rc) + ", " + std::to_string(outside) + " of " +
                           std::to_string(rows) + " rows outside the corridor");
    }
    const Corridor ca = pilot::a_ratio(), cb = pilot::b_ratio(), cd = pilot::drift();
    std::string detail = std::to_string(rows) + " doubling points in [1e3, 1e7]; A corridor [" + fmt(ca.lo) + ", " +
                         fmt(ca.hi) + "], B corridor [" + fmt(cb.lo) + ", " + fmt(cb.hi) + "], drift corridor [" +
                         fmt(cd.lo) + ", " + fmt(cd.hi) + "]";
    for (const auto& f : failures) detail += "; " + f;
    return {failures.empty(), detail};
}

Outcome weighted_sum_report() {
    std::vector<std::string> failures;
    std::string detail;
    constexpr WeightStrategy kStrategies[] = {WeightStrategy::sparse_uniform, WeightStrategy::harmonic_rounding,
                                              WeightStrategy::concentrated};
    for (u64 x : {10'000u, 100'000u}) {
        const auto bset = enumerate_B(x);
        std::optional<u64> smallest;
        std::string mins;
        std::uint64_t seed_offset = 0;
        for (u64 ratio : {4u, 16u, 64u, 256u}) {
            const u64 y = x / ratio;
            const std::uint64_t seed = cli::kDefaultSeed + seed_offset++;
            const Lemma211Summary s = lemma211_search(x, y, 10'000, seed);
            // Replay the same families through the full validator.
            std::mt19937_64 rng(seed);
            double min_margin = std::numeric_limits<double>::infinity();
            std::uint64_t invalid = 0;
            for (int i = 0; i < 10'000; ++i) {
                const WeightFamily w = random_weight_family(x, y, bset, kStrategies[i % 3], rng);
                try {
                    validate_weight_family(w);
                } catch (const std::invalid_argument&) {
                    ++invalid;
                }
                for (const Weight& e : w.weights) invalid += e.m == 0;
                min_margin = std::min(min_margin, lemma211_margin(w));
            }
            if (!s.all_admissible || invalid != 0 || s.families != 10'000 || min_margin != s.min_margin) {
                failures.push_back("x=" + std::to_string(x) + " y=" + std::to_string(y) + " malformed");
            }
            if (s.min_margin > 0 && (!smallest || ratio < *smallest)) smallest = ratio;
            mins += " " + std::to_string(ratio) + ":" + fmt(s.min_margin);
        }
        detail += "x=" + std::to_string(x) + " min margin by x/y" + mins + ", smallest positive ratio " +
                  (smallest ? std::to_string(*smallest) : std::string("none"));
        if (x == 10'000u) detail += "; ";
    }
    for (const auto& f : failures) detail += "; " + f;
    return {failures.empty(), detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"floor identity on [2, 1e5] and at 100 points in [1e3, 1e7]", floor_identity},
        {"parity identity on [2, 1e5]", parity_identity},
        {"unique divisor in B(x)", unique_divisor},
        {"pairwise lcm of B(x) exceeds x", pairwise_lcm},
        {"A(x, y) block decomposition", decomposition},
        {"eta >= -1e-12", eta_nonnegative},
        {"oracle sandwich and reductions for x <= 12", oracle_sandwich},
        {"packing audits and pack <= exact R", constructor_soundness},
        {"geometric covered >= z x / 2^(z+1)", geometric_bound},
        {"growth corridors and frozen anchors", corridors},
        {"weighted-sum margin report", weighted_sum_report},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("%s %zu: %s [%.1fs] %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed;
}
