#include <gtest/gtest.h>

#include <random>

#include "divgraph/number_core.hpp"

using namespace divgraph;

namespace {

u64 product(const Factorization& f) {
    u64 p = 1;
    for (u64 q : f.flattened()) p *= q;
    return p;
}

// S(n) straight from the definition, with its own trial-division factoring.
u64 s_by_definition(u64 n) {
    if (n == 1) return 1;
    std::vector<u64> primes;
    for (u64 d = 2; d * d <= n; ++d) {
        while (n % d == 0) {
            primes.push_back(d);
            n /= d;
        }
    }
    if (n > 1) primes.push_back(n);
    std::sort(primes.rbegin(), primes.rend());
    u64 best = 0, prefix = 1;
    for (u64 p : primes) {
        best = std::max(best, prefix * p * p);
        prefix *= p;
    }
    return best;
}

}  // namespace

TEST(Sieve, MatchesTrialDivisionOnRandomInputs) {
    const Sieve sieve(200'000);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<u64> small(1, 200'000), large(200'001, 50'000'000'000ull);
    for (int i = 0; i < 10'000; ++i) {
        const u64 n = (i % 2) ? small(rng) : large(rng);
        const Factorization a = factor(n, sieve);
        const Factorization b = factor_trial(n);
        ASSERT_EQ(a.flattened(), b.flattened()) << n;
        ASSERT_EQ(product(a), n);
    }
}

TEST(Sieve, SmallestFactorAndPrimes) {
    const Sieve sieve(100);
    EXPECT_EQ(sieve.smallest_factor(91), 7u);
    EXPECT_EQ(sieve.primes().size(), 25u);
    EXPECT_TRUE(sieve.is_prime(97));
    EXPECT_FALSE(sieve.is_prime(91));
    EXPECT_TRUE(sieve.is_prime(1'000'003));  // beyond the table
    EXPECT_FALSE(sieve.is_prime(1));
}

TEST(Factorization, Examples) {
    const Factorization one = factor(1);
    EXPECT_TRUE(one.powers().empty());
    EXPECT_EQ(one.omega(), 0u);
    EXPECT_EQ(one.smallest_prime(), PrimeBound::infinity());
    EXPECT_EQ(one.largest_prime(), 1u);

    const Factorization twelve = factor(12);
    ASSERT_EQ(twelve.powers().size(), 2u);
    EXPECT_EQ(twelve.powers()[0].prime, 3u);
    EXPECT_EQ(twelve.powers()[0].exponent, 1u);
    EXPECT_EQ(twelve.powers()[1].prime, 2u);
    EXPECT_EQ(twelve.powers()[1].exponent, 2u);
    EXPECT_EQ(twelve.flattened(), (std::vector<u64>{3, 2, 2}));
    EXPECT_EQ(twelve.omega(), 3u);
}

TEST(Factorization, LargeInputByTrialDivision) {
    const Factorization f = factor(9'999'991);
    EXPECT_EQ(product(f), 9'999'991u);
    for (u64 p : f.flattened()) {
        EXPECT_EQ(factor_trial(p).flattened(), std::vector<u64>{p});
    }
    EXPECT_EQ(factor(999'983ull * 1'000'003ull).flattened(), (std::vector<u64>{1'000'003, 999'983}));
}

TEST(PrimeBound, InfinityDominates) {
    EXPECT_GT(PrimeBound::infinity(), std::numeric_limits<u64>::max());
    EXPECT_LT(PrimeBound::finite(3), 4u);
    EXPECT_EQ(PrimeBound::finite(3), 3u);
}

TEST(SchinzelSzekeres, Examples) {
    EXPECT_EQ(schinzel_szekeres(1), 1u);
    EXPECT_EQ(schinzel_szekeres(12), 24u);
    for (u64 p : {2u, 3u, 97u, 7919u}) {
        EXPECT_EQ(schinzel_szekeres(p), p * p);
    }
    const std::vector<u64> first{1, 4, 9, 8, 25, 12, 49, 16, 27, 25, 121, 24, 169, 49, 45, 32, 289, 36, 361, 40};
    for (u64 n = 1; n <= first.size(); ++n) {
        EXPECT_EQ(schinzel_szekeres(n), first[n - 1]) << n;
    }
}

TEST(SchinzelSzekeres, MatchesDefinition) {
    for (u64 n = 1; n <= 20'000; ++n) {
        ASSERT_EQ(schinzel_szekeres(n), s_by_definition(n)) << n;
    }
}

TEST(SchinzelSzekeres, TermsAgreeAcrossOverloads) {
    const Sieve& sieve = Sieve::shared();
    for (u64 n = 1; n <= 20'000; ++n) {
        const SzTerms a = sz_terms(n, sieve);
        const SzTerms b = sz_terms(factor_trial(n));
        ASSERT_EQ(a.head_max, b.head_max) << n;
        ASSERT_EQ(a.last, b.last) << n;
    }
    // The last term is n * P^-(n).
    EXPECT_EQ(sz_terms(12, sieve).last, 24u);
    EXPECT_EQ(sz_terms(12, sieve).head_max, 12u);
}

TEST(Divisors, SortedAndComplete) {
    EXPECT_EQ(divisors(12), (std::vector<u64>{1, 2, 3, 4, 6, 12}));
    EXPECT_EQ(divisors(1), (std::vector<u64>{1}));
    for (u64 n = 1; n <= 2'000; ++n) {
        std::vector<u64> direct;
        for (u64 d = 1; d <= n; ++d) {
            if (n % d == 0) direct.push_back(d);
        }
        ASSERT_EQ(divisors(n), direct);
    }
}

TEST(DivisorRatio, Examples) {
    EXPECT_EQ(max_divisor_ratio(12), Rational(2));
    EXPECT_EQ(max_divisor_ratio(97), Rational(97));
    for (u64 k = 1; k < 20; ++k) {
        EXPECT_EQ(max_divisor_ratio(u64{1} << k), Rational(2));
    }
    EXPECT_THROW(max_divisor_ratio(1), std::domain_error);
}

TEST(DivisorRatio, DenseDivisorFormula) {
    // S(n) = n * max d_{i+1}/d_i
    for (u64 n = 1; n <= 50'000; ++n) {
        ASSERT_TRUE(dense_divisor_formula_holds(n)) << n;
    }
}

TEST(DivisorRatio, Density) {
    EXPECT_TRUE(is_z_dense(12, Rational(2)));
    EXPECT_FALSE(is_z_dense(13, Rational(12)));
    for (u64 n = 2; n < 500; ++n) {
        EXPECT_TRUE(is_z_dense(n, max_divisor_ratio(n)));
    }
}

TEST(Parity, Examples) {
    EXPECT_EQ(parity_indicator(Rational(10, 6)), 1);
    EXPECT_EQ(parity_indicator(Rational(5, 2)), 0);
    EXPECT_EQ(parity_indicator(Rational(1)), 1);
    EXPECT_THROW(parity_indicator(Rational(0)), std::domain_error);
}
