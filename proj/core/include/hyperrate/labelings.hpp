#pragma once

#include "hyperrate/budget.hpp"
#include "hyperrate/hypergraph.hpp"
#include "hyperrate/rational.hpp"

#include <map>
#include <optional>
#include <vector>

namespace hyperrate {

// Exact vertex labeling f : V(H) -> [0,1].
struct Labeling {
    std::vector<Rational> values;

    bool is_zero() const;
    // Distinct nonzero values, ascending.
    std::vector<Rational> support_values() const;
    // Sorted multiset of all values; used to group labelings by shape.
    std::vector<Rational> value_multiset() const;

    auto operator<=>(const Labeling&) const = default;
};

std::vector<Rational> edge_sums(const Hypergraph& h, const Labeling& f);

struct LabelingPattern {
    std::vector<int> zero_set;
    std::vector<std::vector<int>> equality_partition; // blocks of nonzero vertices with equal value
    std::vector<Rational> edge_sum_vector;
};

LabelingPattern pattern_of(const Hypergraph& h, const Labeling& f);

// Values in [0,1], zero on vertices of less than maximum degree, every edge
// sum exactly 0 or 1.
bool is_in_gamma_tilde(const Hypergraph& h, const Labeling& f);

// f is the only solution of the linear system fixed by its own pattern.
bool is_stable(const Hypergraph& h, const Labeling& f);

struct LabelingOptions {
    double budget = evaluation_budget(); // cap on search nodes
};

// All stable labelings plus the zero labeling, sorted by value vector.
std::vector<Labeling> enumerate_stable_labelings(const Hypergraph& h, const LabelingOptions& opts = {});

// The labeling with every edge sum equal to 1, if there is exactly one.
std::optional<Labeling> unique_full_labeling_check(const Hypergraph& h, const LabelingOptions& opts = {});

// Labelings grouped by value multiset, in order of first appearance.
std::vector<std::pair<std::vector<Rational>, std::vector<Labeling>>> group_by_shape(const std::vector<Labeling>& ls);

} // namespace hyperrate
