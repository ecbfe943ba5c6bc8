#include "hyperrate/errors.hpp"
#include "hyperrate/rng.hpp"
#include "hyperrate/varsolve.hpp"
#include "hyperrate/weighted.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hyperrate;

namespace {

WeightedHypergraph random_weights(int n, int r, double p, std::uint64_t seed)
{
    WeightedHypergraph w(n, r, p, 0.0);
    RandomStream rng(seed, 0);
    for (std::size_t i = 0; i < w.size(); ++i)
        w.set_weight(i, rng.uniform());
    return w;
}

} // namespace

TEST(WeightedHypergraph, SymmetricLookupAndRepeats)
{
    auto w = random_weights(6, 3, 0.3, 1);
    std::vector<int> a{4, 1, 2}, b{1, 2, 4}, rep{1, 1, 2};
    EXPECT_EQ(w(a), w(b));
    EXPECT_EQ(w(rep), 0.0);
    EXPECT_THROW(w.set_weight(0, 1.5), std::domain_error);
}

TEST(Density, MatchesBruteForce)
{
    const std::vector<Hypergraph> hs{instances::clique(3, 2), instances::cycle(4), instances::path(3),
                                     instances::clique(4, 3), instances::alternating_octahedron(),
                                     Hypergraph(3, 5, {{0, 1, 2}, {2, 3, 4}})};
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const auto& h = hs[i];
        auto w = random_weights(h.uniformity() == 2 ? 7 : 6, h.uniformity(), 0.3, 10 + i);
        EXPECT_NEAR(density(h, w), oracle::density(h, w), 1e-14) << i;
    }
}

TEST(Density, ConstantWeightClosedForm)
{
    // all-p weights: every injective map contributes p^E
    auto h = instances::clique(4, 3);
    WeightedHypergraph w(8, 3, 0.4, 0.4);
    const double expect = falling_factorial(8, 4) / std::pow(8.0, 4) * std::pow(0.4, 4);
    EXPECT_NEAR(density(h, w), expect, 1e-15);
}

TEST(Density, InvariantUnderRelabeling)
{
    auto h = instances::alternating_octahedron();
    auto w = random_weights(7, 3, 0.2, 3);
    std::vector<int> perm{3, 6, 0, 1, 5, 2, 4};
    EXPECT_NEAR(density(h, w.relabeled(perm)), density(h, w), 1e-14);
}

TEST(Density, ThreadCountDoesNotChangeResult)
{
    auto h = instances::clique(4, 3);
    auto w = random_weights(9, 3, 0.3, 4);
    EXPECT_EQ(density(h, w, {1e9, 1}), density(h, w, {1e9, 4}));
}

TEST(Density, BudgetGuard)
{
    auto h = instances::clique(4, 3);
    WeightedHypergraph w(10, 3, 0.3, 0.3);
    EXPECT_THROW(density(h, w, {100.0, 1}), BudgetExceeded);
}

TEST(Gradient, MatchesFiniteDifferences)
{
    for (const auto& h : {instances::clique(3, 2), instances::alternating_octahedron(), instances::clique(4, 3)}) {
        auto w = random_weights(h.uniformity() == 2 ? 8 : 6, h.uniformity(), 0.3, 5);
        EXPECT_LT(finite_difference_check(h, w, 1e-5, 7, 40), 1e-7);
    }
}

TEST(Gradient, SumRuleForHomogeneousDensity)
{
    // t is homogeneous of degree |E| in W: sum_S W_S dt/dW_S = |E| t
    auto h = instances::alternating_octahedron();
    auto w = random_weights(7, 3, 0.3, 6);
    std::vector<double> g;
    double t = density_with_gradient(h, w, g);
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        s += w.weight(i) * g[i];
    EXPECT_NEAR(s, 4.0 * t, 1e-12);
}

TEST(BlockModel, BlockwiseDensityMatchesMaterialized)
{
    const std::vector<Hypergraph> hs{instances::clique(3, 2), instances::alternating_octahedron(),
                                     instances::clique(4, 3)};
    for (const auto& h : hs) {
        const int r = h.uniformity();
        BlockModel b(r, 0.3, {2, 3, 3});
        RandomStream rng(11, r);
        for (std::size_t m = 0; m < b.multisets().size(); ++m) {
            auto cls = b.multisets().unrank(m);
            b.set_weight(cls, rng.uniform());
        }
        auto w = b.materialize();
        EXPECT_NEAR(density_blockwise(h, b), density(h, w), 1e-13);
        EXPECT_NEAR(relative_entropy(b), relative_entropy(w), 1e-11);
    }
}

TEST(Entropy, ScalarProperties)
{
    EXPECT_EQ(entropy_scalar(0.3, 0.3), 0.0);
    EXPECT_NEAR(entropy_scalar(1.0, 0.1), std::log(10.0), 1e-15);
    EXPECT_NEAR(entropy_scalar(0.0, 0.1), std::log(1 / 0.9), 1e-15);
    EXPECT_THROW(entropy_scalar(1.2, 0.1), std::domain_error);
    EXPECT_THROW(entropy_scalar(0.5, 0.0), std::domain_error);
    // convex with minimum at p
    for (double x = 0.05; x < 0.95; x += 0.05)
        EXPECT_LE(entropy_scalar(x, 0.3), 0.5 * (entropy_scalar(x - 0.04, 0.3) + entropy_scalar(x + 0.04, 0.3)));
}

TEST(ExpectedCount, FallingFactorialOverAutomorphisms)
{
    // C(6,4) copies of K_4^(3) in K_6^(3), each present with p^4
    EXPECT_NEAR(expected_count(instances::clique(4, 3), 6, 0.5), 15.0 / 16.0, 1e-15);
    EXPECT_NEAR(expected_count(instances::cycle(4), 5, 1.0), 15.0, 1e-12);
}
