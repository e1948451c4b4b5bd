#pragma once

// Overflow-checked 64-bit helpers and an exact non-negative rational type.

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace divgraph {

using u64 = std::uint64_t;
__extension__ using u128 = unsigned __int128;

/// Thrown whenever an intermediate value would not fit in 64 bits.
class OverflowError : public std::overflow_error {
public:
    explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

inline u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw OverflowError("64-bit overflow in " + std::to_string(a) + " * " + std::to_string(b));
    }
    return r;
}

inline u64 checked_add(u64 a, u64 b) {
    u64 r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw OverflowError("64-bit overflow in " + std::to_string(a) + " + " + std::to_string(b));
    }
    return r;
}

/// lcm(a, b) without wrapping; a, b >= 1.
inline u64 checked_lcm(u64 a, u64 b) {
    return checked_mul(a / std::gcd(a, b), b);
}

/// floor(sqrt(n)) computed exactly.
inline u64 isqrt(u64 n) {
    if (n < 2) return n;
    u64 r = static_cast<u64>(__builtin_sqrt(static_cast<double>(n)));
    while (r > 0 && (r > n / r)) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

/// ceil(a / b) for b >= 1.
constexpr u64 ceil_div(u64 a, u64 b) { return a / b + (a % b != 0 ? 1 : 0); }

/// Exact non-negative rational num/den, kept in lowest terms with den >= 1.
class Rational {
public:
    constexpr Rational() = default;
    Rational(u64 num, u64 den = 1) : num_(num), den_(den) {
        if (den == 0) throw std::domain_error("Rational with zero denominator");
        const u64 g = std::gcd(num, den);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    constexpr u64 num() const { return num_; }
    constexpr u64 den() const { return den_; }

    constexpr u64 floor() const { return num_ / den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend constexpr bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const u128 lhs = static_cast<u128>(a.num_) * b.den_;
        const u128 rhs = static_cast<u128>(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        os << r.num_;
        if (r.den_ != 1) os << '/' << r.den_;
        return os;
    }

private:
    u64 num_ = 0;
    u64 den_ = 1;
};

}  // namespace divgraph
