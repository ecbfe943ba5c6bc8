#include "hyperrate/errors.hpp"
#include "hyperrate/hubplan.hpp"
#include "hyperrate/rng.hpp"
#include "hyperrate/varsolve.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

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

VariationalInstance k3_instance(int n = 30, double delta = 1.0)
{
    VariationalInstance inst;
    inst.pattern = instances::clique(3, 2);
    inst.n = n;
    inst.p = 0.3;
    inst.delta = delta;
    return inst;
}

} // namespace

TEST(DensityGradient, SingleEdgeIsConstant)
{
    for (int r : {2, 3}) {
        auto w = random_weights(7, r, 0.3, r);
        auto g = density_gradient(instances::single_edge(r), w);
        const double expect = falling_factorial(r, r) / std::pow(7.0, r);
        for (double x : g)
            EXPECT_NEAR(x, expect, 1e-15);
        EXPECT_LT(finite_difference_check(instances::single_edge(r), w, 1e-4), 1e-9);
    }
}

TEST(DensityGradient, ZeroWeights)
{
    WeightedHypergraph w(6, 2, 0.3, 0.0);
    for (double x : density_gradient(instances::clique(3, 2), w))
        EXPECT_EQ(x, 0.0);
}

TEST(DensityGradient, FiniteDifferences)
{
    EXPECT_LT(finite_difference_check(instances::clique(3, 2), random_weights(6, 2, 0.3, 1), 1e-6), 1e-5);
    EXPECT_LT(finite_difference_check(instances::clique(4, 3), random_weights(8, 3, 0.3, 2), 1e-6), 1e-5);
    EXPECT_THROW(finite_difference_check(instances::clique(3, 2), random_weights(6, 2, 0.3, 1), 1e-2),
                 std::domain_error);
}

TEST(SolvePhi, TriangleBeatsPlantedStarts)
{
    auto sol = solve_phi(k3_instance());
    EXPECT_TRUE(sol.feasible);
    EXPECT_LE(sol.objective, sol.best_planted_objective * (1 + 1e-12));
    EXPECT_LE(sol.objective, 1.1 * sol.best_planted_objective);
    EXPECT_GE(sol.normalized_rate, 1.0 / 50);
    EXPECT_LE(sol.normalized_rate, 50.0);
    // independent check of the reported numbers
    EXPECT_NEAR(oracle::density(instances::clique(3, 2), sol.W), sol.constraint_value, 1e-13);
    EXPECT_GE(sol.constraint_value, sol.target * (1 - 1e-10));
    EXPECT_NEAR(relative_entropy(sol.W), sol.objective, 1e-9);
    for (double w : sol.W.weights()) {
        EXPECT_GE(w, 0.3);
        EXPECT_LE(w, 1.0);
    }
    EXPECT_LT(finite_difference_check(instances::clique(3, 2), sol.W, 1e-6), 1e-5);
}

TEST(SolvePhi, ViolationTracesDecrease)
{
    auto sol = solve_phi(k3_instance(16));
    for (const auto& s : sol.starts)
        for (std::size_t i = 1; i < s.violation_trace.size(); ++i)
            EXPECT_LE(s.violation_trace[i], s.violation_trace[i - 1] + 1e-6) << s.label;
}

TEST(SolvePhi, MonotoneInDelta)
{
    double prev = 0;
    for (double d : {0.25, 0.5, 1.0, 2.0}) {
        auto sol = solve_phi(k3_instance(14, d));
        EXPECT_TRUE(sol.feasible);
        EXPECT_GE(sol.objective, prev * (1 - 1e-6));
        prev = sol.objective;
    }
}

TEST(SolvePhi, InvariantUnderPatternRelabeling)
{
    auto a = k3_instance(14);
    a.pattern = instances::path(4);
    auto b = a;
    std::vector<int> perm{2, 0, 3, 1};
    b.pattern = a.pattern.relabeled(perm);
    EXPECT_NEAR(solve_phi(a).objective, solve_phi(b).objective, 1e-6 * solve_phi(a).objective);
}

TEST(SolvePhi, Deterministic)
{
    auto a = solve_phi(k3_instance(12));
    auto inst = k3_instance(12);
    inst.options.threads = 3;
    auto b = solve_phi(inst);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(std::vector<double>(a.W.weights().begin(), a.W.weights().end()),
              std::vector<double>(b.W.weights().begin(), b.W.weights().end()));
}

TEST(SolvePhi, UnreachableTarget)
{
    auto inst = k3_instance(5);
    inst.p = 0.9;
    EXPECT_THROW(solve_phi(inst), NoFeasiblePoint);
}

TEST(SolvePhi, RejectsBadInstances)
{
    auto inst = k3_instance(2);
    EXPECT_THROW(solve_phi(inst), std::invalid_argument);
    inst = k3_instance();
    inst.p = 1.5;
    EXPECT_ANY_THROW(solve_phi(inst));
}

TEST(Tensor, RoundTrip)
{
    auto w = random_weights(9, 3, 0.25, 4);
    auto path = std::filesystem::temp_directory_path() / "hyperrate_tensor_test.bin";
    write_tensor(w, path);
    EXPECT_EQ(std::filesystem::file_size(path), 24u + 8u * w.size());
    auto back = read_tensor(path, 0.25);
    EXPECT_EQ(back.vertex_count(), 9);
    EXPECT_EQ(back.uniformity(), 3);
    for (std::size_t i = 0; i < w.size(); ++i)
        EXPECT_EQ(back.weight(i), w.weight(i));
    {
        std::ofstream trunc(path, std::ios::binary | std::ios::trunc);
        trunc << "abc";
    }
    EXPECT_ANY_THROW(read_tensor(path, 0.25));
    std::filesystem::remove(path);
    EXPECT_THROW(read_tensor("/no/such/tensor.bin", 0.25), std::ios_base::failure);
}
