#include "linear.hpp"

#include <algorithm>
#include <stdexcept>

namespace hyperrate::detail {

AffineSystem::Outcome AffineSystem::add(std::vector<Rational> coeffs, Rational rhs)
{
    if (static_cast<int>(coeffs.size()) != k_)
        throw std::invalid_argument("constraint arity mismatch");
    for (const auto& row : rows_) {
        const Rational factor = coeffs[row.pivot];
        if (factor == 0)
            continue;
        for (int j = 0; j < k_; ++j)
            if (row.a[j] != 0)
                coeffs[j] -= factor * row.a[j];
        rhs -= factor * row.b;
    }
    const auto lead = std::find_if(coeffs.begin(), coeffs.end(), [](const Rational& q) { return q != 0; });
    if (lead == coeffs.end())
        return rhs == 0 ? Outcome::redundant : Outcome::inconsistent;
    const int pivot = static_cast<int>(lead - coeffs.begin());
    const Rational scale = coeffs[pivot];
    for (auto& q : coeffs)
        if (q != 0)
            q /= scale;
    rhs /= scale;
    for (auto& row : rows_) {
        const Rational factor = row.a[pivot];
        if (factor == 0)
            continue;
        for (int j = 0; j < k_; ++j)
            if (coeffs[j] != 0)
                row.a[j] -= factor * coeffs[j];
        row.b -= factor * rhs;
    }
    rows_.push_back(Row{std::move(coeffs), std::move(rhs), pivot});
    std::sort(rows_.begin(), rows_.end(), [](const Row& x, const Row& y) { return x.pivot < y.pivot; });
    std::fill(pivot_row_.begin(), pivot_row_.end(), -1);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        pivot_row_[rows_[i].pivot] = static_cast<int>(i);
    return Outcome::added;
}

AffineSystem::Outcome AffineSystem::add_zero(int v)
{
    std::vector<Rational> a(k_);
    a[v] = 1;
    return add(std::move(a), 0);
}

AffineSystem::Outcome AffineSystem::add_equal(int u, int w)
{
    std::vector<Rational> a(k_);
    a[u] = 1;
    a[w] = -1;
    return add(std::move(a), 0);
}

std::optional<Rational> AffineSystem::determined(int v) const
{
    const int i = pivot_row_[v];
    if (i < 0)
        return std::nullopt;
    const auto& row = rows_[i];
    for (int j = 0; j < k_; ++j)
        if (j != v && row.a[j] != 0)
            return std::nullopt;
    return row.b;
}

bool AffineSystem::determined_within(const Rational& lo, const Rational& hi) const
{
    for (const auto& row : rows_) {
        bool single = true;
        for (int j = 0; j < k_ && single; ++j)
            if (j != row.pivot && row.a[j] != 0)
                single = false;
        if (single && (row.b < lo || row.b > hi))
            return false;
    }
    return true;
}

std::vector<Rational> AffineSystem::solution() const
{
    if (dimension() != 0)
        throw std::logic_error("system is not fully determined");
    std::vector<Rational> out(k_);
    for (const auto& row : rows_)
        out[row.pivot] = row.b;
    return out;
}

std::string AffineSystem::key() const
{
    std::string out;
    for (const auto& row : rows_) {
        out += std::to_string(row.pivot);
        out += ':';
        for (int j = 0; j < k_; ++j)
            if (row.a[j] != 0 && j != row.pivot) {
                out += std::to_string(j);
                out += '=';
                out += row.a[j].get_str();
                out += ',';
            }
        out += '|';
        out += row.b.get_str();
        out += ';';
    }
    return out;
}

} // namespace hyperrate::detail
