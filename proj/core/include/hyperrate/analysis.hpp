#pragma once

#include "hyperrate/budget.hpp"
#include "hyperrate/combinatorics.hpp"
#include "hyperrate/hypergraph.hpp"
#include "hyperrate/weighted.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hyperrate {

// Symmetric function [n]^r -> R, stored once per r-multiset. Unlike
// WeightedHypergraph it has values on tuples with repeated entries.
class SymmetricTensor {
public:
    SymmetricTensor() = default;
    SymmetricTensor(int n, int r, double fill = 0.0);
    SymmetricTensor(int n, int r, std::vector<double> values);

    // Off-diagonal entries from W, zero on repeated tuples.
    static SymmetricTensor from_weighted(const WeightedHypergraph& w);
    // Independent standard normals, one per multiset.
    static SymmetricTensor gaussian(int n, int r, std::uint64_t seed, std::uint64_t stream);

    int n() const noexcept { return n_; }
    int r() const noexcept { return r_; }
    std::size_t size() const noexcept { return values_.size(); }
    const MultisetIndexer& indexer() const noexcept { return index_; }
    std::span<const double> values() const noexcept { return values_; }
    double value(std::size_t rank) const { return values_.at(rank); }
    void set_value(std::size_t rank, double v) { values_.at(rank) = v; }

    double operator()(std::span<const int> tuple) const;

    // n^r lookup table indexed by sum_j i_j n^(r-1-j).
    std::vector<double> dense() const;

private:
    int n_ = 0;
    int r_ = 0;
    MultisetIndexer index_;
    std::vector<double> values_;
};

struct ReducedProgramSolution {
    std::map<std::string, double> variables;
    double objective = 0.0;
    std::string active_branch;
    // Best grid point found by the confirmation sweep minus the objective;
    // negative values would mean an interior point beats every vertex.
    double interior_gap = 0.0;
    std::map<std::string, double> branch_values;
};

// min a + r b subject to a^{k/r} + k b >= delta, a, b >= 0.
ReducedProgramSolution solve_clique_program(int k, int r, double delta);

// min 3x1 + 3x2 + 3y + x3 subject to
// 6x1 + 3x1^2 + 4x2^{3/2} + 3x2^2 + x3^2 + 3y^2 >= delta.
ReducedProgramSolution solve_special_program(double delta);

// T_H(x): sum over tuples of distinct vertices of prod_e x(edge image).
double counting_function(const Hypergraph& h, const SymmetricTensor& x, double budget = evaluation_budget());

enum class DiscLipMode { exact, bound };

// Largest single-coordinate discrete derivative of N n^{-|V(H)|} T_H over
// 0/1 inputs, N = C(n, r).
double disc_lip(const Hypergraph& h, int n, DiscLipMode mode);

double cut_norm_exact(const SymmetricTensor& f, double budget = evaluation_budget());

// Lower bound on the cut norm by alternating maximization from random
// selectors (restart 0 starts from all ones).
double cut_norm_heuristic(const SymmetricTensor& f, int restarts, std::uint64_t seed);

struct GaussianWidthEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    int samples = 0;
    // "exact_linear" for a single edge, "cut_norm_bound" otherwise, "zero"
    // for an edgeless pattern.
    std::string quantity;
};

GaussianWidthEstimate disc_gw_estimate(const Hypergraph& h, int n, int gaussian_samples, std::uint64_t seed,
                                       int restarts = 20);

struct HolderResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    std::string variant; // "clique" or "bounded_degree"
};

// Both sides of the generalized Holder inequality on the uniform probability
// space [n]. blocks[v] restricts vertex v (all of [n] when absent).
HolderResult holder_check(const Hypergraph& h, const SymmetricTensor& u,
                          const std::optional<std::vector<std::vector<int>>>& blocks = std::nullopt,
                          double budget = evaluation_budget());

struct EntropyLemmaRow {
    double p = 0.0;
    double small_ratio = 0.0; // I_p(p+x) / (x^2/2p) at x = p^2
    double large_ratio = 0.0; // I_p(p+x) / (x log(x/p)) at x = sqrt(p)
    bool small_ok = false;
    bool large_ok = false;
    bool quadratic_ok = false; // I_p(p+x) >= (x/b)^2 I_p(p+b) on the grid
    bool log_ok = false;       // I_p(p+x) >= x^2 I_p(1 - 1/log(1/p)) on the grid
    double quadratic_min_ratio = 0.0;
    double log_min_ratio = 0.0;
};

struct EntropyLemmaReport {
    std::vector<EntropyLemmaRow> rows;
    bool pass = true;
    std::string first_violation;
};

EntropyLemmaReport entropy_lemma_checks(const std::vector<double>& p_grid);

} // namespace hyperrate
