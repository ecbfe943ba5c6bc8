#pragma once

#include "hyperrate/hypergraph.hpp"
#include "hyperrate/weighted.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hyperrate {

// Derivative of t(H, W) with respect to each stored subset weight, summed
// over all ordered incarnations of the subset.
std::vector<double> density_gradient(const Hypergraph& h, const WeightedHypergraph& w, const EvalOptions& opts = {});

// Density and gradient in one pass.
double density_with_gradient(const Hypergraph& h, const WeightedHypergraph& w, std::vector<double>& grad,
                             const EvalOptions& opts = {});

struct SolverOptions {
    int restarts = 2;           // random perturbations of the best planted start
    int outer_iterations = 8;   // penalty updates
    int inner_iterations = 60;  // projected-gradient steps per penalty
    double penalty_growth = 10.0;
    double initial_penalty = 10.0;
    double perturbation = 0.05;
    std::uint64_t seed = 20240611;
    int threads = default_threads();
    double budget = evaluation_budget();
};

struct VariationalInstance {
    Hypergraph pattern;
    int n = 0;
    double p = 0.0;
    double delta = 0.0;
    SolverOptions options;
};

struct StartReport {
    std::string label;
    double initial_objective = 0.0;
    bool initial_feasible = false;
    double final_objective = 0.0;
    bool final_feasible = false;
    std::vector<double> violation_trace; // max(0, 1 + delta - t/p^|E|) after each penalty round
};

struct VariationalSolution {
    WeightedHypergraph W;
    double objective = 0.0;
    double constraint_value = 0.0; // t(H, W)
    double target = 0.0;           // (1 + delta) p^|E|
    bool feasible = false;
    double normalized_rate = 0.0;  // objective / (n^r p^Delta log(1/p))
    std::string source;            // label of the start that produced W
    double best_planted_objective = 0.0;
    std::vector<StartReport> starts;
};

VariationalSolution solve_phi(const VariationalInstance& inst);

// Max relative error between the analytic gradient and central differences
// over `coordinates` random subsets.
double finite_difference_check(const Hypergraph& h, const WeightedHypergraph& w, double step,
                               std::uint64_t seed = 1, int coordinates = 50);

// Binary dump: three little-endian uint64 (n, r, count), then count
// little-endian doubles in colex subset order.
void write_tensor(const WeightedHypergraph& w, const std::filesystem::path& path);
WeightedHypergraph read_tensor(const std::filesystem::path& path, double base_p);

} // namespace hyperrate
