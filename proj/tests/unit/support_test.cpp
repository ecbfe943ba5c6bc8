#include "hyperrate/budget.hpp"
#include "hyperrate/combinatorics.hpp"
#include "hyperrate/errors.hpp"
#include "hyperrate/parallel.hpp"
#include "hyperrate/rational.hpp"
#include "hyperrate/rng.hpp"
#include "hyperrate/summation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace hyperrate;

TEST(Binomial, SmallValuesAndOverflow)
{
    EXPECT_EQ(binomial(5, 2), 10u);
    EXPECT_EQ(binomial(10, 0), 1u);
    EXPECT_EQ(binomial(3, 5), 0u);
    EXPECT_EQ(binomial(60, 30), 118264581564861424ull);
    EXPECT_THROW(binomial(200, 100), std::overflow_error);
    for (int n = 1; n < 30; ++n)
        for (int k = 1; k <= n; ++k)
            EXPECT_EQ(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
}

TEST(FallingFactorial, Basic)
{
    EXPECT_DOUBLE_EQ(falling_factorial(6, 3), 120.0);
    EXPECT_DOUBLE_EQ(falling_factorial(4, 0), 1.0);
    EXPECT_DOUBLE_EQ(falling_factorial(3, 4), 0.0);
}

TEST(SubsetIndexer, ColexRankIsBijective)
{
    SubsetIndexer idx(7, 3);
    ASSERT_EQ(idx.size(), 35u);
    std::vector<int> s{0, 1, 2};
    std::size_t expected = 0;
    std::set<std::vector<int>> seen;
    do {
        EXPECT_EQ(idx.rank(s), expected);
        EXPECT_EQ(idx.unrank(expected), s);
        seen.insert(s);
        ++expected;
    } while (next_subset_colex(s, 7));
    EXPECT_EQ(seen.size(), 35u);
}

TEST(MultisetIndexer, CoversAllMultisets)
{
    MultisetIndexer idx(4, 3);
    EXPECT_EQ(idx.size(), 20u); // C(6,3)
    std::set<std::size_t> ranks;
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b)
            for (int c = b; c < 4; ++c) {
                std::vector<int> m{a, b, c};
                auto r = idx.rank(m);
                EXPECT_EQ(idx.unrank(r), m);
                ranks.insert(r);
            }
    EXPECT_EQ(ranks.size(), 20u);
    EXPECT_EQ(*ranks.rbegin(), 19u);
}

TEST(Rational, RoundTrip)
{
    Rational q(6, 8);
    q.canonicalize();
    EXPECT_EQ(to_string(q), "3/4");
    EXPECT_EQ(to_string(Rational(2)), "2/1");
    EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
    EXPECT_EQ(parse_rational("4/8"), Rational(1, 2));
    EXPECT_EQ(parse_rational("1"), Rational(1));
    EXPECT_THROW(parse_rational("x/2"), std::invalid_argument);
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
}

TEST(Philox, KnownAnswer)
{
    // Random123 known-answer vector for philox4x32-10, zero key and counter.
    auto out = philox4x32({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out[0], 0x6627e8d5u);
    EXPECT_EQ(out[1], 0xe169c58du);
    EXPECT_EQ(out[2], 0xbc57ac4cu);
    EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Rng, CounterAddressableAndUniform)
{
    EXPECT_EQ(counter_uniform(1, 2, 3), counter_uniform(1, 2, 3));
    EXPECT_NE(counter_uniform(1, 2, 3), counter_uniform(1, 2, 4));
    RandomStream a(5, 0), b(5, 0);
    double mean = 0, sq = 0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) {
        double u = a.uniform();
        EXPECT_EQ(u, b.uniform());
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        mean += u;
    }
    EXPECT_NEAR(mean / N, 0.5, 0.005);
    RandomStream g(9, 1);
    mean = 0;
    for (int i = 0; i < N; ++i) {
        double z = g.normal();
        mean += z;
        sq += z * z;
    }
    EXPECT_NEAR(mean / N, 0.0, 0.015);
    EXPECT_NEAR(sq / N, 1.0, 0.02);
}

TEST(Budget, ThrowsAboveCap)
{
    EXPECT_NO_THROW(check_budget("x", 10, 100));
    EXPECT_THROW(check_budget("x", 1000, 100), BudgetExceeded);
}

TEST(Parallel, ResultsIndependentOfThreadCount)
{
    std::vector<double> a(1000), b(1000);
    parallel_for(a.size(), 1, [&](std::size_t i) { a[i] = std::sin(double(i)); });
    parallel_for(b.size(), 4, [&](std::size_t i) { b[i] = std::sin(double(i)); });
    EXPECT_EQ(a, b);
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                     if (i == 7)
                         throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
}

TEST(CompensatedSum, BeatsNaiveSummation)
{
    CompensatedSum s;
    s += 1e16;
    for (int i = 0; i < 1000; ++i)
        s += 1.0;
    s += -1e16;
    EXPECT_DOUBLE_EQ(s.value(), 1000.0);
}
