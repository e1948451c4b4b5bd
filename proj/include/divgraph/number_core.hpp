#pragma once

// Sieve-backed factorization and the Schinzel-Szekeres function S(n).

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "divgraph/arith.hpp"

namespace divgraph {

inline constexpr u64 kDefaultSieveLimit = 10'000'000;

/// Environment variable that overrides the size of the shared sieve.
inline constexpr const char* kSieveLimitEnv = "DIVGRAPH_SIEVE_LIMIT";

/// Smallest-prime-factor table for 1..limit. Read-only after construction.
class Sieve {
public:
    explicit Sieve(u64 limit = kDefaultSieveLimit) : limit_(std::max<u64>(limit, 2)) {
        if (limit_ > 0xFFFFFFFFull) throw std::out_of_range("sieve limit must fit in 32 bits");
        spf_.assign(limit_ + 1, 0);
        for (u64 i = 2; i <= limit_; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = static_cast<std::uint32_t>(i);
                primes_.push_back(static_cast<std::uint32_t>(i));
            }
            for (std::uint32_t p : primes_) {
                if (p > spf_[i] || i * p > limit_) break;
                spf_[i * p] = p;
            }
        }
    }

    /// Process-wide sieve, sized by DIVGRAPH_SIEVE_LIMIT or 10^7.
    static const Sieve& shared() {
        static const Sieve instance(limit_from_env());
        return instance;
    }

    static u64 limit_from_env() {
        if (const char* env = std::getenv(kSieveLimitEnv)) {
            try {
                return std::stoull(env);
            } catch (const std::exception&) {
                throw std::invalid_argument(std::string(kSieveLimitEnv) + " is not an integer: " + env);
            }
        }
        return kDefaultSieveLimit;
    }

    u64 limit() const { return limit_; }
    bool covers(u64 n) const { return n <= limit_; }

    /// Smallest prime factor of 2 <= n <= limit().
    u64 smallest_factor(u64 n) const { return spf_[n]; }

    std::span<const std::uint32_t> primes() const { return primes_; }

    bool is_prime(u64 n) const {
        if (n < 2) return false;
        if (covers(n)) return spf_[n] == n;
        for (u64 d = 2; d <= n / d; ++d) {
            if (n % d == 0) return false;
        }
        return true;
    }

private:
    u64 limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

/// A prime or +infinity. Used for P^-(n), where P^-(1) is infinite.
class PrimeBound {
public:
    static constexpr PrimeBound infinity() { return PrimeBound(0, true); }
    static constexpr PrimeBound finite(u64 p) { return PrimeBound(p, false); }

    constexpr bool is_infinite() const { return infinite_; }

    u64 value() const {
        if (infinite_) throw std::logic_error("PrimeBound::value() on infinity");
        return value_;
    }

    friend constexpr bool operator==(PrimeBound a, PrimeBound b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend constexpr bool operator==(PrimeBound a, u64 b) { return !a.infinite_ && a.value_ == b; }
    friend constexpr std::strong_ordering operator<=>(PrimeBound a, u64 b) {
        if (a.infinite_) return std::strong_ordering::greater;
        return a.value_ <=> b;
    }

    friend std::ostream& operator<<(std::ostream& os, PrimeBound p) {
        if (p.infinite_) return os << "inf";
        return os << p.value_;
    }

private:
    constexpr PrimeBound(u64 v, bool inf) : value_(v), infinite_(inf) {}
    u64 value_;
    bool infinite_;
};

struct PrimePower {
    u64 prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime decomposition with primes in non-increasing order.
class Factorization {
public:
    Factorization() = default;
    Factorization(u64 n, std::vector<PrimePower> powers) : n_(n), powers_(std::move(powers)) {}

    u64 n() const { return n_; }
    const std::vector<PrimePower>& powers() const { return powers_; }

    /// Omega(n), primes counted with multiplicity.
    unsigned omega() const {
        unsigned k = 0;
        for (const auto& pp : powers_) k += pp.exponent;
        return k;
    }

    /// P^-(n); infinite for n = 1.
    PrimeBound smallest_prime() const {
        if (powers_.empty()) return PrimeBound::infinity();
        return PrimeBound::finite(powers_.back().prime);
    }

    /// P(n); P(1) = 1.
    u64 largest_prime() const { return powers_.empty() ? 1 : powers_.front().prime; }

    /// p_1 >= p_2 >= ... >= p_k.
    std::vector<u64> flattened() const {
        std::vector<u64> out;
        for (const auto& pp : powers_) out.insert(out.end(), pp.exponent, pp.prime);
        return out;
    }

private:
    u64 n_ = 1;
    std::vector<PrimePower> powers_;
};

namespace detail {

inline void push_prime(std::vector<PrimePower>& ascending, u64 p) {
    if (!ascending.empty() && ascending.back().prime == p) {
        ++ascending.back().exponent;
    } else {
        ascending.push_back({p, 1});
    }
}

}  // namespace detail

/// Trial-division factorization; independent of any sieve.
inline Factorization factor_trial(u64 n) {
    if (n == 0) throw std::out_of_range("factor: n must be >= 1");
    const u64 original = n;
    std::vector<PrimePower> asc;
    while (n % 2 == 0) {
        detail::push_prime(asc, 2);
        n /= 2;
    }
    for (u64 d = 3; d <= n / d; d += 2) {
        while (n % d == 0) {
            detail::push_prime(asc, d);
            n /= d;
        }
    }
    if (n > 1) detail::push_prime(asc, n);
    std::reverse(asc.begin(), asc.end());
    return {original, std::move(asc)};
}

/// Factorization by smallest-prime-factor lookups; falls back to trial
/// division beyond the sieve.
inline Factorization factor(u64 n, const Sieve& sieve = Sieve::shared()) {
    if (n == 0) throw std::out_of_range("factor: n must be >= 1");
    if (!sieve.covers(n)) return factor_trial(n);
    const u64 original = n;
    std::vector<PrimePower> asc;
    while (n > 1) {
        const u64 p = sieve.smallest_factor(n);
        detail::push_prime(asc, p);
        n /= p;
    }
    std::reverse(asc.begin(), asc.end());
    return {original, std::move(asc)};
}

/// The terms p_1...p_{j-1} p_j^2 of S(n), split into the head (j < k) and
/// the last term (j = k), which equals n * P^-(n).
struct SzTerms {
    u64 head_max = 0;  // 0 when k <= 1
    u64 last = 1;      // S(1) = 1 convention for n = 1
    u64 value() const { return std::max(head_max, last); }
};

/// Allocation-free variant reading primes straight from the sieve.
inline SzTerms sz_terms(u64 n, const Sieve& sieve);

inline SzTerms sz_terms(const Factorization& f) {
    SzTerms t;
    const auto primes = f.flattened();
    if (primes.empty()) return t;
    u64 prefix = 1;
    for (std::size_t j = 0; j < primes.size(); ++j) {
        const u64 term = checked_mul(checked_mul(prefix, primes[j]), primes[j]);
        if (j + 1 < primes.size()) {
            t.head_max = std::max(t.head_max, term);
        } else {
            t.last = term;
        }
        prefix *= primes[j];
    }
    return t;
}

inline SzTerms sz_terms(u64 n, const Sieve& sieve) {
    if (n == 0) throw std::out_of_range("sz_terms: n must be >= 1");
    if (!sieve.covers(n)) return sz_terms(factor_trial(n));
    SzTerms t;
    if (n == 1) return t;
    std::array<u64, 64> primes{};
    std::size_t k = 0;
    for (u64 m = n; m > 1; m /= sieve.smallest_factor(m)) primes[k++] = sieve.smallest_factor(m);
    // primes[] is non-decreasing; walk it from the top.
    u64 prefix = 1;
    for (std::size_t i = k; i-- > 0;) {
        const u64 term = checked_mul(checked_mul(prefix, primes[i]), primes[i]);
        if (i > 0) {
            t.head_max = std::max(t.head_max, term);
        } else {
            t.last = term;
        }
        prefix *= primes[i];
    }
    return t;
}

/// S(n) = max_j p_1...p_{j-1} p_j^2, S(1) = 1. Throws OverflowError when
/// an intermediate term leaves 64 bits.
inline u64 schinzel_szekeres(const Factorization& f) { return sz_terms(f).value(); }

inline u64 schinzel_szekeres(u64 n, const Sieve& sieve = Sieve::shared()) {
    return sz_terms(n, sieve).value();
}

inline std::vector<u64> divisors(const Factorization& f) {
    std::vector<u64> divs{1};
    for (const auto& pp : f.powers()) {
        const std::size_t base = divs.size();
        u64 mult = 1;
        for (unsigned e = 0; e < pp.exponent; ++e) {
            mult *= pp.prime;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * mult);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

inline std::vector<u64> divisors(u64 n, const Sieve& sieve = Sieve::shared()) {
    return divisors(factor(n, sieve));
}

/// max over consecutive sorted divisors of d_{i+1}/d_i, exactly.
inline Rational max_divisor_ratio(u64 n, const Sieve& sieve = Sieve::shared()) {
    if (n < 2) throw std::domain_error("max_divisor_ratio: n must be >= 2");
    const auto divs = divisors(n, sieve);
    Rational best(divs[1], divs[0]);
    for (std::size_t i = 1; i + 1 < divs.size(); ++i) {
        const Rational r(divs[i + 1], divs[i]);
        if (r > best) best = r;
    }
    return best;
}

/// S(n) = n * max_divisor_ratio(n), compared exactly.
inline bool dense_divisor_formula_holds(u64 n, const Sieve& sieve = Sieve::shared()) {
    if (n < 2) return schinzel_szekeres(n, sieve) == n;
    const Rational q = max_divisor_ratio(n, sieve);
    return static_cast<u128>(schinzel_szekeres(n, sieve)) * q.den() == static_cast<u128>(n) * q.num();
}

/// n has z-dense divisors iff every consecutive divisor ratio is <= z.
inline bool is_z_dense(u64 n, const Rational& z, const Sieve& sieve = Sieve::shared()) {
    return max_divisor_ratio(n, sieve) <= z;
}

/// e(t) = floor(t) mod 2 for t > 0.
inline int parity_indicator(const Rational& t) {
    if (t.num() == 0) throw std::domain_error("parity_indicator: t must be > 0");
    return static_cast<int>(t.floor() & 1u);
}

}  // namespace divgraph
