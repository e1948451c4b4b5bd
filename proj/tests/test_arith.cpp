#include <gtest/gtest.h>

#include <limits>
#include <numeric>
#include <sstream>

#include "divgraph/arith.hpp"

using namespace divgraph;

TEST(Arith, CheckedMulDetectsOverflow) {
    EXPECT_EQ(checked_mul(1u << 31, 1u << 31), u64{1} << 62);
    EXPECT_THROW(checked_mul(u64{1} << 32, u64{1} << 32), OverflowError);
    EXPECT_THROW(checked_add(std::numeric_limits<u64>::max(), 1), OverflowError);
    EXPECT_EQ(checked_add(2, 3), 5u);
}

TEST(Arith, OverflowErrorIsStdOverflow) {
    try {
        checked_mul(std::numeric_limits<u64>::max(), 2);
        FAIL();
    } catch (const std::overflow_error& e) {
        EXPECT_NE(std::string(e.what()).find("overflow"), std::string::npos);
    }
}

TEST(Arith, CheckedLcm) {
    EXPECT_EQ(checked_lcm(4, 6), 12u);
    EXPECT_EQ(checked_lcm(7, 7), 7u);
    EXPECT_EQ(checked_lcm(1, 99), 99u);
    const u64 big = (u64{1} << 63) - 25;  // odd
    EXPECT_THROW(checked_lcm(big, 2 * 3 * 5), OverflowError);
}

TEST(Arith, IsqrtAroundSquares) {
    for (u64 r = 0; r < 5000; ++r) {
        EXPECT_EQ(isqrt(r * r), r);
        if (r > 0) {
            EXPECT_EQ(isqrt(r * r - 1), r - 1);
        }
    }
    const u64 top = 4294967295u;  // floor(sqrt(2^64 - 1))
    EXPECT_EQ(isqrt(std::numeric_limits<u64>::max()), top);
    EXPECT_EQ(isqrt(top * top), top);
}

TEST(Arith, CeilDiv) {
    EXPECT_EQ(ceil_div(24, 8), 3u);
    EXPECT_EQ(ceil_div(25, 8), 4u);
    EXPECT_EQ(ceil_div(0, 3), 0u);
}

TEST(Rational, ReducesAndCompares) {
    const Rational a(10, 6);
    EXPECT_EQ(a.num(), 5u);
    EXPECT_EQ(a.den(), 3u);
    EXPECT_EQ(a, Rational(5, 3));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_GT(Rational(7), Rational(13, 2));
    EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, FloorExamples) {
    EXPECT_EQ(Rational(10, 6).floor(), 1u);
    EXPECT_EQ(Rational(5, 2).floor(), 2u);
    EXPECT_EQ(Rational(1).floor(), 1u);
    EXPECT_EQ(Rational(0, 7).floor(), 0u);
}

TEST(Rational, CompareLargeWithoutOverflow) {
    const u64 m = std::numeric_limits<u64>::max();
    EXPECT_LT(Rational(m - 1, m), Rational(m, m - 2));
    EXPECT_GT(Rational(m, 3), Rational(m - 1, 3));
}

TEST(Rational, Prints) {
    std::ostringstream os;
    os << Rational(4, 2) << ' ' << Rational(3, 9);
    EXPECT_EQ(os.str(), "2 1/3");
}
