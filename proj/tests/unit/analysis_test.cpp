#include "hyperrate/analysis.hpp"
#include "hyperrate/errors.hpp"
#include "hyperrate/rng.hpp"
#include "hyperrate/simulate.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace hyperrate;

namespace {

// Straight from the definition: selector j is a 0/1 function of the
// multiset of the other r-1 coordinates; try every choice of all r selectors.
double cut_norm_brute(const SymmetricTensor& f)
{
    const int n = f.n(), r = f.r();
    std::map<std::vector<int>, int> id;
    oracle::each_tuple(n, r - 1, [&](std::vector<int> t) {
        std::sort(t.begin(), t.end());
        id.emplace(t, static_cast<int>(id.size()));
    });
    const int m = static_cast<int>(id.size());
    std::vector<std::vector<int>> tuples;
    std::vector<std::vector<int>> rest_ids;
    oracle::each_tuple(n, r, [&](const std::vector<int>& t) {
        std::vector<int> ids;
        for (int j = 0; j < r; ++j) {
            std::vector<int> rest;
            for (int i = 0; i < r; ++i)
                if (i != j)
                    rest.push_back(t[i]);
            std::sort(rest.begin(), rest.end());
            ids.push_back(j * m + id.at(rest));
        }
        tuples.push_back(t);
        rest_ids.push_back(ids);
    });
    double best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (m * r)); ++mask) {
        double s = 0;
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            bool in = true;
            for (int b : rest_ids[i])
                in = in && ((mask >> b) & 1);
            if (in)
                s += f(tuples[i]);
        }
        best = std::max(best, std::fabs(s));
    }
    return best;
}

double clique_brute(int k, int r, double delta)
{
    // the constraint is tight at the optimum: sweep b, solve for a
    double best = 1e300;
    const int steps = 200000;
    for (int i = 0; i <= steps; ++i) {
        const double b = delta / k * i / steps;
        const double rest = std::max(0.0, delta - k * b);
        const double a = std::pow(rest, static_cast<double>(r) / k);
        best = std::min(best, a + r * b);
    }
    return best;
}

} // namespace

TEST(ReducedPrograms, CliqueExamples)
{
    auto s = solve_clique_program(4, 3, 1.0);
    EXPECT_NEAR(s.objective, 0.75, 1e-9);
    EXPECT_EQ(s.active_branch, "b");
    EXPECT_GE(s.interior_gap, -1e-12);
    for (double d : {0.1, 0.5, 2.0, 10.0, 100.0})
        for (auto [k, r] : std::vector<std::pair<int, int>>{{4, 3}, {5, 3}, {5, 4}, {3, 2}}) {
            auto sol = solve_clique_program(k, r, d);
            EXPECT_NEAR(sol.objective, clique_brute(k, r, d), 1e-6 * std::max(1.0, sol.objective)) << k << r << d;
            EXPECT_NEAR(sol.objective, std::min(std::pow(d, double(r) / k), r * d / k), 1e-9 * sol.objective);
        }
}

TEST(ReducedPrograms, SpecialExamples)
{
    EXPECT_NEAR(solve_special_program(1.0).objective, 0.4641016151377546, 1e-9);
    EXPECT_NEAR(solve_special_program(9.0).objective, 3.0, 1e-9);
    for (double d : {0.5, 3.0, 20.0, 200.0}) {
        auto s = solve_special_program(d);
        const double x1 = std::sqrt(1 + d / 3) - 1;
        double lo = 0, hi = d;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (4 * std::pow(mid, 1.5) + 3 * mid * mid < d ? lo : hi) = mid;
        }
        const double best = std::min({3 * x1, 3 * hi, std::sqrt(d), std::sqrt(3 * d)});
        EXPECT_NEAR(s.objective, best, 1e-9 * s.objective);
        EXPECT_GE(s.interior_gap, -1e-9);
    }
    EXPECT_THROW(solve_special_program(-1.0), std::domain_error);
}

TEST(ReducedPrograms, Crossover)
{
    double lo = 1, hi = 50;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (solve_special_program(mid).active_branch == "x1" ? lo : hi) = mid;
    }
    EXPECT_NEAR(lo, 9.0, 1e-6);
}

TEST(CountingFunction, Examples)
{
    auto k4 = instances::clique(4, 3);
    EXPECT_NEAR(counting_function(instances::clique(3, 2), SymmetricTensor(4, 2, 1.0)), 24.0, 1e-12);
    EXPECT_NEAR(counting_function(k4, SymmetricTensor(5, 3, 0.5)), 120.0 / 16, 1e-12);
    EXPECT_NEAR(counting_function(k4, SymmetricTensor(3, 3, 1.0)), 0.0, 1e-12);
}

TEST(CountingFunction, AgreesWithEmbeddingsOnZeroOne)
{
    auto h = instances::alternating_octahedron();
    for (int s = 0; s < 5; ++s) {
        auto g = sample_gnp(8, 3, 0.6, 4, s);
        SymmetricTensor x(8, 3, 0.0);
        for (const auto& e : g.edges())
            x.set_value(x.indexer().rank(e), 1.0);
        EXPECT_NEAR(counting_function(h, x), static_cast<double>(oracle::embeddings(h, g)), 1e-9);
    }
}

TEST(CountingFunction, BridgeToDensity)
{
    // n^-k T_H differs from t(H, W) only by tuples with a repeated vertex
    auto h = instances::clique(3, 2);
    for (int n : {10, 20, 40}) {
        WeightedHypergraph w(n, 2, 0.3, 0.0);
        RandomStream rng(8, n);
        for (std::size_t i = 0; i < w.size(); ++i)
            w.set_weight(i, rng.uniform());
        const double t = counting_function(h, SymmetricTensor::from_weighted(w)) / std::pow(n, 3);
        EXPECT_NEAR(t, oracle::density(h, w), 1e-12);
        // with diagonal mass filled in, the gap is bounded by k^2/n
        SymmetricTensor full = SymmetricTensor::from_weighted(w);
        for (std::size_t i = 0; i < full.size(); ++i)
            if (full.value(i) == 0.0)
                full.set_value(i, 1.0);
        double dense_t = 0;
        oracle::each_tuple(n, 3, [&](const std::vector<int>& v) {
            dense_t += full(std::vector<int>{v[0], v[1]}) * full(std::vector<int>{v[1], v[2]}) *
                       full(std::vector<int>{v[0], v[2]});
        });
        dense_t /= std::pow(n, 3);
        EXPECT_LE(std::fabs(dense_t - t), 9.0 / n);
    }
}

TEST(DiscLip, ExactBelowBound)
{
    auto h = instances::clique(3, 2);
    for (int n = 4; n <= 8; ++n) {
        const double ex = disc_lip(h, n, DiscLipMode::exact);
        const double bd = disc_lip(h, n, DiscLipMode::bound);
        EXPECT_GT(ex, 0);
        EXPECT_LE(ex, bd * (1 + 1e-12));
    }
    // flipping one edge of K_n changes T_H by the embeddings that use it
    const int n = 6;
    auto kn = instances::clique(n, 2);
    std::vector<Edge> rest(kn.edges().begin() + 1, kn.edges().end());
    const double drop = static_cast<double>(oracle::embeddings(h, kn) - oracle::embeddings(h, Hypergraph(2, n, rest)));
    EXPECT_NEAR(disc_lip(h, n, DiscLipMode::exact), 15.0 * drop / std::pow(n, 3), 1e-12);
}

TEST(CutNorm, ExactMatchesBruteForce)
{
    for (int s = 0; s < 5; ++s) {
        auto f = SymmetricTensor::gaussian(s < 3 ? 4 : 3, s < 3 ? 2 : 3, 11, s);
        EXPECT_NEAR(cut_norm_exact(f), cut_norm_brute(f), 1e-9) << s;
    }
}

TEST(CutNorm, RankOneNonnegative)
{
    SymmetricTensor f(4, 3, 0.25);
    EXPECT_NEAR(cut_norm_exact(f), 0.25 * 64, 1e-12);
    EXPECT_NEAR(cut_norm_heuristic(f, 1, 1), 0.25 * 64, 1e-12);
}

TEST(CutNorm, HeuristicIsCloseLowerBound)
{
    int good = 0;
    for (int s = 0; s < 100; ++s) {
        auto f = s < 90 ? SymmetricTensor::gaussian(7, 2, 2024, s) : SymmetricTensor::gaussian(4, 3, 2024, s);
        const double ex = cut_norm_exact(f);
        const double h = cut_norm_heuristic(f, 50, s);
        EXPECT_LE(h, ex * (1 + 1e-12));
        good += h >= 0.9 * ex;
    }
    EXPECT_EQ(good, 100);
}

TEST(CutNorm, BudgetGuard)
{
    EXPECT_THROW(cut_norm_exact(SymmetricTensor(12, 3, 1.0), 1e6), BudgetExceeded);
}

TEST(GaussianWidth, SingleEdgeAnalytic)
{
    auto est = disc_gw_estimate(instances::single_edge(2), 10, 4000, 3);
    EXPECT_EQ(est.quantity, "exact_linear");
    // E max(2 sum g, 0) with 45 normals: 2 sqrt(45) / sqrt(2 pi)
    const double analytic = 2 * std::sqrt(45.0) / std::sqrt(2 * M_PI);
    EXPECT_LE(std::fabs(est.value - analytic), 4 * est.standard_error);
    EXPECT_EQ(disc_gw_estimate(Hypergraph(2, 3, {}), 5, 10, 1).quantity, "zero");
}

TEST(GaussianWidth, Deterministic)
{
    auto a = disc_gw_estimate(instances::clique(3, 2), 6, 20, 9, 5);
    auto b = disc_gw_estimate(instances::clique(3, 2), 6, 20, 9, 5);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.quantity, "cut_norm_bound");
}

TEST(Holder, TriangleClosedForm)
{
    // K3 with U = c constant: both sides are c^3
    const int n = 7;
    SymmetricTensor u(n, 2, 0.6);
    auto res = holder_check(instances::clique(3, 2), u);
    EXPECT_EQ(res.variant, "clique");
    EXPECT_NEAR(res.rhs, std::pow(0.6 * 0.6, 1.5), 1e-12);
    EXPECT_NEAR(res.lhs, std::pow(0.6, 3), 1e-12);
    // rhs is (int U^2)^{3/2}
    SymmetricTensor v(n, 2, 0.0);
    RandomStream rng(3, 3);
    double sq = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        v.set_value(i, rng.uniform());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            sq += std::pow(v(std::vector<int>{a, b}), 2);
    EXPECT_NEAR(holder_check(instances::clique(3, 2), v).rhs, std::pow(sq / (n * n), 1.5), 1e-12);
    EXPECT_TRUE(res.holds);
}

TEST(Holder, RandomTensors)
{
    const std::vector<Hypergraph> hs{instances::clique(3, 2), instances::clique(4, 3), instances::cycle(4),
                                     instances::alternating_octahedron()};
    for (std::size_t i = 0; i < hs.size(); ++i)
        for (int s = 0; s < 10; ++s) {
            const int n = hs[i].uniformity() == 2 ? 7 : 5;
            auto g = SymmetricTensor::gaussian(n, hs[i].uniformity(), 5, i * 100 + s);
            SymmetricTensor u(n, hs[i].uniformity());
            for (std::size_t j = 0; j < u.size(); ++j)
                u.set_value(j, std::fabs(g.value(j)));
            auto res = holder_check(hs[i], u);
            EXPECT_TRUE(res.holds) << i << " " << s << " " << res.lhs << " " << res.rhs;
        }
    EXPECT_THROW(holder_check(instances::clique(3, 2), SymmetricTensor(4, 2, -1.0)), std::domain_error);
}

TEST(EntropyLemmas, SmallDeviationRatio)
{
    auto rep = entropy_lemma_checks({1e-4, 1e-6});
    ASSERT_EQ(rep.rows.size(), 2u);
    for (const auto& row : rep.rows) {
        EXPECT_NEAR(row.small_ratio, 1.0, 0.01);
        EXPECT_TRUE(row.small_ok);
        EXPECT_TRUE(row.quadratic_ok);
        EXPECT_TRUE(row.log_ok);
        EXPECT_GE(row.quadratic_min_ratio, 1.0 - 1e-9);
    }
    // large-deviation ratio creeps toward 1 from below
    auto wide = entropy_lemma_checks({1e-3, 1e-5, 1e-8});
    EXPECT_LT(wide.rows[0].large_ratio, wide.rows[1].large_ratio);
    EXPECT_LT(wide.rows[1].large_ratio, wide.rows[2].large_ratio);
    EXPECT_LT(wide.rows[2].large_ratio, 1.0);
    EXPECT_THROW(entropy_lemma_checks({0.5}), std::domain_error);
}
