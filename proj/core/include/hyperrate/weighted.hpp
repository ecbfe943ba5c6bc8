#pragma once

#include "hyperrate/budget.hpp"
#include "hyperrate/combinatorics.hpp"
#include "hyperrate/hypergraph.hpp"
#include "hyperrate/parallel.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hyperrate {

// Symmetric weights on the r-subsets of {0..n-1}, stored densely in colex
// order. Evaluation at a tuple that repeats a vertex gives 0.
class WeightedHypergraph {
public:
    WeightedHypergraph() = default;
    WeightedHypergraph(int n, int r, double base_p, double fill);
    WeightedHypergraph(int n, int r, double base_p, std::vector<double> weights);

    int vertex_count() const noexcept { return n_; }
    int uniformity() const noexcept { return r_; }
    double base_p() const noexcept { return p_; }
    std::size_t size() const noexcept { return weights_.size(); }
    const SubsetIndexer& indexer() const noexcept { return index_; }

    std::span<const double> weights() const noexcept { return weights_; }
    double weight(std::size_t rank) const { return weights_.at(rank); }
    void set_weight(std::size_t rank, double value);

    // Any order, any repeats.
    double operator()(std::span<const int> tuple) const;

    WeightedHypergraph relabeled(std::span<const int> perm) const;

private:
    int n_ = 0;
    int r_ = 0;
    double p_ = 0.5;
    SubsetIndexer index_;
    std::vector<double> weights_;
};

// Weights constant on products of vertex classes. Classes are contiguous
// vertex ranges in the order given; each weight is indexed by the sorted
// multiset of classes an r-set meets.
class BlockModel {
public:
    BlockModel() = default;
    BlockModel(int r, double base_p, std::vector<std::uint64_t> class_sizes, std::vector<double> weight_table);
    // Weight defaults to base_p for every class multiset.
    BlockModel(int r, double base_p, std::vector<std::uint64_t> class_sizes);

    int uniformity() const noexcept { return r_; }
    double base_p() const noexcept { return p_; }
    std::uint64_t vertex_count() const noexcept { return n_; }
    int class_count() const noexcept { return static_cast<int>(sizes_.size()); }
    const std::vector<std::uint64_t>& class_sizes() const noexcept { return sizes_; }
    const MultisetIndexer& multisets() const noexcept { return multisets_; }
    std::span<const double> weight_table() const noexcept { return table_; }

    double weight(std::span<const int> classes) const; // any order
    void set_weight(std::span<const int> classes, double value);
    int class_of(std::uint64_t vertex) const;

    WeightedHypergraph materialize() const;

private:
    int r_ = 0;
    double p_ = 0.5;
    std::uint64_t n_ = 0;
    std::vector<std::uint64_t> sizes_;
    MultisetIndexer multisets_;
    std::vector<double> table_;
};

struct EvalOptions {
    double budget = evaluation_budget();
    int threads = default_threads();
};

// Homomorphism density: average over all n^k maps V(H) -> [n] of the product
// of W over the edges of H.
double density(const Hypergraph& h, const WeightedHypergraph& w, const EvalOptions& opts = {});

// Same quantity for a block model, summed over class assignments of V(H)
// with exact placement counts. At most 8 classes.
double density_blockwise(const Hypergraph& h, const BlockModel& b, const EvalOptions& opts = {});

// I_p(x) with 0 log 0 = 0. Throws std::domain_error outside 0<=x<=1, 0<p<1.
double entropy_scalar(double x, double p);

double relative_entropy(const WeightedHypergraph& w);
double relative_entropy(const BlockModel& b);

// Expected number of unlabeled copies of H in G(n, p).
double expected_count(const Hypergraph& h, int n, double p);

} // namespace hyperrate
