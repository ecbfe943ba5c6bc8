#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hyperrate {

// Exact binomial coefficient; throws std::overflow_error if it does not fit.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// n (n-1) ... (n-k+1) as a double.
double falling_factorial(std::uint64_t n, std::uint64_t k);

double ipow(double base, unsigned exponent);

// Colexicographic ranking of r-subsets of {0..n-1}. rank(s) = sum_i C(s_i, i+1)
// for the sorted subset s_0 < s_1 < ... < s_{r-1}.
class SubsetIndexer {
public:
    SubsetIndexer() = default;
    SubsetIndexer(int n, int r);

    int n() const noexcept { return n_; }
    int r() const noexcept { return r_; }
    std::size_t size() const noexcept { return size_; }

    std::size_t rank(std::span<const int> sorted) const;
    void unrank(std::size_t rank, std::span<int> out) const;
    std::vector<int> unrank(std::size_t rank) const;

private:
    std::uint64_t choose(int a, int b) const { return (a < b) ? 0 : table_[a * (r_ + 1) + b]; }

    int n_ = 0;
    int r_ = 0;
    std::size_t size_ = 0;
    std::vector<std::uint64_t> table_;
};

// Ranking of r-multisets of {0..n-1} (sorted, repeats allowed) through the
// shift a_i -> a_i + i onto r-subsets of {0..n+r-2}.
class MultisetIndexer {
public:
    MultisetIndexer() = default;
    MultisetIndexer(int n, int r);

    int n() const noexcept { return n_; }
    int r() const noexcept { return r_; }
    std::size_t size() const noexcept { return subsets_.size(); }

    std::size_t rank(std::span<const int> sorted) const;
    std::vector<int> unrank(std::size_t rank) const;

private:
    int n_ = 0;
    int r_ = 0;
    SubsetIndexer subsets_;
};

// Advances a sorted r-subset of {0..n-1} to its colex successor. Returns
// false after the last subset.
bool next_subset_colex(std::span<int> subset, int n);

} // namespace hyperrate
