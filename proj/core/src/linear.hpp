#pragma once

// Incrementally maintained reduced row echelon form over the rationals, for
// affine systems A f = b in a fixed number of unknowns.

#include "hyperrate/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hyperrate::detail {

class AffineSystem {
public:
    enum class Outcome { added, redundant, inconsistent };

    explicit AffineSystem(int unknowns) : k_(unknowns), pivot_row_(unknowns, -1) {}

    int unknowns() const noexcept { return k_; }
    int rank() const noexcept { return static_cast<int>(rows_.size()); }
    int dimension() const noexcept { return k_ - rank(); }

    // Adds sum_i coeffs[i] f_i = rhs. The system is left unchanged unless the
    // outcome is `added`.
    Outcome add(std::vector<Rational> coeffs, Rational rhs);
    Outcome add_zero(int v);
    Outcome add_equal(int u, int w);

    // Value of f_v if the system pins it down.
    std::optional<Rational> determined(int v) const;

    // All determined values lie in [lo, hi].
    bool determined_within(const Rational& lo, const Rational& hi) const;

    // Unique solution; requires dimension() == 0.
    std::vector<Rational> solution() const;

    // Canonical text form of the reduced system.
    std::string key() const;

private:
    struct Row {
        std::vector<Rational> a;
        Rational b;
        int pivot;
    };

    int k_;
    std::vector<Row> rows_;
    std::vector<int> pivot_row_;
};

} // namespace hyperrate::detail
