#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <mersenne_lab/density.hpp>
#include <mersenne_lab/factor.hpp>

#include "oracles/brute_force.hpp"

using namespace mlab;

namespace {

SmallRatio small_ratio(std::pair<std::uint64_t, std::uint64_t> p) { return SmallRatio(p.first, p.second); }

const std::uint64_t kZGrid[] = {2, 3, 4, 5, 8, 16, 100};

}  // namespace

TEST(Delta0, Examples) {
    EXPECT_EQ(delta0(factor_small(12)), SmallRatio(2));
    EXPECT_EQ(delta0(factor_small(13)), SmallRatio(13));
    EXPECT_EQ(delta0(factor_small(1)), SmallRatio(1));
    EXPECT_EQ(delta0(factor_small(10)).to_string(), "5/2");
    EXPECT_EQ(delta0(factor_small(15)).to_string(), "3");
    EXPECT_EQ(delta0(factor_small(45)).to_string(), "3");
    EXPECT_EQ(delta0(factor_integer(BigInt(12))), Ratio(BigInt(2)));
}

TEST(Delta0, RejectsPartial) {
    const SmallFactored partial = SmallFactored::from_factors({{2, 1}}, 15);
    EXPECT_THROW(delta0(partial), std::invalid_argument);
    EXPECT_THROW(delta(partial), std::invalid_argument);
    EXPECT_THROW(dense_chain_test(partial, 2), std::invalid_argument);
}

TEST(Delta, Examples) {
    EXPECT_EQ(delta(factor_small(12)), SmallRatio(2));
    EXPECT_EQ(delta(factor_small(30)), SmallRatio(2));
    EXPECT_EQ(delta(factor_small(4)), SmallRatio(2));
    EXPECT_EQ(delta(factor_small(7)), SmallRatio(7));
    EXPECT_THROW(delta(factor_small(1)), std::invalid_argument);
}

TEST(Delta, MatchesBruteForce) {
    const SmallestPrimeFactorSieve sieve(20000);
    for (std::uint64_t n = 1; n <= 20000; ++n) {
        const SmallFactored f = sieve.factor(n);
        ASSERT_EQ(delta0(f), small_ratio(oracle::brute_delta0(n))) << n;
        if (n >= 2) {
            ASSERT_EQ(delta(f), small_ratio(oracle::brute_delta(n))) << n;
        }
    }
}

TEST(Delta, Delta0NeverExceedsDelta) {
    const SmallestPrimeFactorSieve sieve(100000);
    for (std::uint64_t n = 2; n <= 100000; ++n) {
        const SmallFactored f = sieve.factor(n);
        const SmallRatio d0 = delta0(f);
        ASSERT_LE(d0, delta(f)) << n;
        ASSERT_GE(d0, SmallRatio(1)) << n;
    }
}

TEST(DenseChainTest, Examples) {
    EXPECT_TRUE(dense_chain_test(factor_small(12), 2));
    EXPECT_FALSE(dense_chain_test(factor_small(15), 2));
    EXPECT_TRUE(dense_chain_test(factor_small(1), 2));
    EXPECT_TRUE(dense_chain_test(factor_small(10), 3));
    EXPECT_FALSE(dense_chain_test(factor_small(10), 2));
}

TEST(DenseChainTest, RationalThresholdIsExact) {
    // Δ₀(10) = 5/2: boundary exactly at z = 5/2.
    EXPECT_TRUE(dense_chain_test(factor_small(10), SmallRatio(5, 2)));
    EXPECT_FALSE(dense_chain_test(factor_small(10), SmallRatio(99999, 40000)));
    EXPECT_TRUE(dense_chain_test(factor_integer(BigInt(10)), Ratio(BigInt(5), BigInt(2))));
}

TEST(DenseChainTest, EquivalentToDelta0Bound) {
    const SmallestPrimeFactorSieve sieve(20000);
    for (std::uint64_t n = 1; n <= 20000; ++n) {
        const SmallFactored f = sieve.factor(n);
        for (std::uint64_t z : kZGrid) ASSERT_EQ(dense_chain_test(f, z), oracle::brute_dense(n, z)) << n << " " << z;
    }
}

TEST(DenseChainTest, Hereditary) {
    const SmallestPrimeFactorSieve sieve(10000);
    for (std::uint64_t n = 2; n <= 10000; ++n) {
        const SmallFactored f = sieve.factor(n);
        const SmallFactored g = sieve.factor(n / oracle::brute_largest_prime(n));
        for (std::uint64_t z : kZGrid) {
            if (dense_chain_test(f, z)) {
                ASSERT_TRUE(dense_chain_test(g, z)) << n << " " << z;
            }
        }
    }
}

TEST(GenerateDense, Examples) {
    auto sorted = [](std::vector<std::uint64_t> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    EXPECT_EQ(sorted(generate_dense(10, 2)), (std::vector<std::uint64_t>{1, 2, 4, 6, 8}));
    EXPECT_EQ(sorted(generate_dense(10, 3)), (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 8, 9, 10}));
    for (std::uint64_t x : {1u, 10u, 57u}) {
        std::vector<std::uint64_t> all(x);
        for (std::uint64_t k = 0; k < x; ++k) all[k] = k + 1;
        EXPECT_EQ(sorted(generate_dense(x, x)), all);
        EXPECT_EQ(sorted(generate_dense(x, x + 5)), all);
    }
}

TEST(GenerateDense, DepthFirstOrder) {
    EXPECT_EQ(generate_dense(10, 2), (std::vector<std::uint64_t>{1, 2, 6, 4, 8}));
}

TEST(GenerateDense, MatchesBruteForceWithoutDuplicates) {
    for (std::uint64_t z : {2u, 3u, 5u, 30u}) {
        const std::uint64_t x = 20000;
        const auto gen = generate_dense(x, z);
        const std::set<std::uint64_t> uniq(gen.begin(), gen.end());
        ASSERT_EQ(uniq.size(), gen.size()) << z;
        std::set<std::uint64_t> expect;
        for (std::uint64_t n = 1; n <= x; ++n)
            if (oracle::brute_dense(n, z)) expect.insert(n);
        ASSERT_EQ(uniq, expect) << z;
    }
}

TEST(CountDense, Examples) {
    const DenseCount c = count_dense(10, 2, DenseMethod::BruteForce);
    EXPECT_EQ(c.count, 5u);
    EXPECT_NEAR(c.saias_ratio, 1.661, 1e-3);
    EXPECT_DOUBLE_EQ(c.saias_ratio, saias_ratio_of(c.count, c.x, c.z));
    EXPECT_EQ(count_dense(10, 3, DenseMethod::Generate).count, 8u);
    EXPECT_EQ(count_dense(10, 10, DenseMethod::Generate).count, 10u);
    EXPECT_EQ(count_dense(10, 10, DenseMethod::BruteForce).count, 10u);
    EXPECT_NEAR(saias_ratio(10, 2), 1.661, 1e-3);
    EXPECT_DOUBLE_EQ(saias_ratio(10, 10), 1.0);
    EXPECT_THROW(count_dense(1, 2, DenseMethod::Generate), std::invalid_argument);
    EXPECT_THROW(count_dense(10, 1, DenseMethod::Generate), std::invalid_argument);
}

TEST(CountDense, FrozenCensus) {
    // Brute-force Δ₀ census computed independently (exact rationals).
    struct Row { std::uint64_t x, z, count; };
    const Row rows[] = {{100, 2, 29},    {100, 3, 44},    {100, 10, 71},   {1000, 2, 193},
                        {1000, 3, 303},  {1000, 10, 508}, {10000, 2, 1391}, {10000, 3, 2262},
                        {10000, 10, 4087}};
    for (const Row& r : rows) {
        EXPECT_EQ(count_dense(r.x, r.z, DenseMethod::Generate).count, r.count) << r.x << " " << r.z;
        EXPECT_EQ(count_dense(r.x, r.z, DenseMethod::BruteForce).count, r.count) << r.x << " " << r.z;
    }
}

TEST(CountDense, Monotone) {
    for (std::uint64_t z = 2; z < 12; ++z) {
        const auto small = generate_dense(5000, z);
        const auto big = generate_dense(5000, z + 1);
        const std::set<std::uint64_t> bs(big.begin(), big.end());
        for (std::uint64_t n : small) ASSERT_TRUE(bs.count(n)) << n << " " << z;
    }
    std::uint64_t prev = 0;
    for (std::uint64_t x = 2; x <= 3000; x += 37) {
        const std::uint64_t c = count_dense(x, 4, DenseMethod::Generate).count;
        ASSERT_GE(c, prev);
        ASSERT_LE(c, x);
        prev = c;
    }
}

TEST(SmoothCount, Examples) {
    EXPECT_EQ(smooth_count(10, 2), 4u);
    EXPECT_EQ(smooth_count(16, 3), 9u);
    EXPECT_EQ(smooth_count(10, 10), 10u);
    EXPECT_EQ(smooth_count(100, 100), 100u);
    EXPECT_EQ(smooth_count(100, 1000), 100u);
    EXPECT_EQ(smooth_count(1, 1), 1u);
    EXPECT_EQ(smooth_count(50, 1), 1u);
    EXPECT_THROW(smooth_count(0, 2), std::invalid_argument);
}

TEST(SmoothCount, MatchesBruteForceAndIsMonotone) {
    for (std::uint64_t x = 1; x <= 300; x += 7) {
        std::uint64_t prev = 0;
        for (std::uint64_t y = 1; y <= 40; ++y) {
            const std::uint64_t c = smooth_count(x, y);
            ASSERT_EQ(c, oracle::brute_smooth(x, y)) << x << " " << y;
            ASSERT_GE(c, prev);
            ASSERT_LE(smooth_count(x, y), smooth_count(x + 1, y));
            prev = c;
        }
    }
}
