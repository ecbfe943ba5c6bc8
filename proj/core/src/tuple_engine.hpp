#pragma once

// Shared depth-first evaluator for sums over all maps V(H) -> [n]. Vertices
// of H are placed one level at a time; an edge is multiplied in at the level
// of its last-placed vertex. Top-level subtrees are evaluated independently
// and reduced in order so results do not depend on the thread count.

#include "hyperrate/hypergraph.hpp"
#include "hyperrate/weighted.hpp"

#include <cstddef>
#include <vector>

namespace hyperrate::detail {

class TupleEngine {
public:
    TupleEngine(const Hypergraph& h, const WeightedHypergraph& w);

    double density(int threads) const;

    // Fills grad (one entry per stored subset) with d t / d a_e and returns t.
    double density_and_gradient(std::vector<double>& grad, int threads) const;

private:
    struct ClosingEdge {
        int edge;
        std::vector<int> levels; // level of each edge vertex, in edge order
    };

    std::size_t dense_index(const ClosingEdge& e, const int* x) const
    {
        std::size_t idx = 0;
        for (int lv : e.levels)
            idx = idx * n_ + static_cast<std::size_t>(x[lv]);
        return idx;
    }

    double subtree(int* x, int level, double partial) const;
    double subtree_grad(int* x, int level, double* factors, std::size_t* slots, int closed, double* buf) const;

    int n_ = 0;
    int r_ = 0;
    int k_ = 0;
    int m_ = 0;
    std::vector<std::vector<ClosingEdge>> closing_;
    std::vector<double> table_;   // n^r ordered lookup, 0 on repeats
    std::vector<char> distinct_;  // 1 when the ordered tuple has no repeat
    const WeightedHypergraph* w_ = nullptr;
};

// Vertex order that closes edges as early as possible.
std::vector<int> placement_order(const Hypergraph& h);

} // namespace hyperrate::detail
