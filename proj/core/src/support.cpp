#include "hyperrate/budget.hpp"
#include "hyperrate/combinatorics.hpp"
#include "hyperrate/errors.hpp"
#include "hyperrate/parallel.hpp"
#include "hyperrate/rational.hpp"
#include "hyperrate/rng.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hyperrate {

BudgetExceeded::BudgetExceeded(const std::string& what, double required, double budget)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << what << ": requires " << required << " evaluations, budget is " << budget;
          return os.str();
      }()),
      required_(required), budget_(budget)
{
}

namespace {

double initial_budget()
{
    if (const char* env = std::getenv("HYPERRATE_BUDGET")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0)
            return v;
    }
    return kDefaultEvaluationBudget;
}

std::atomic<double>& budget_slot()
{
    static std::atomic<double> slot{initial_budget()};
    return slot;
}

std::atomic<int> g_threads{1};

} // namespace

double evaluation_budget() { return budget_slot().load(); }

void set_evaluation_budget(double budget) { budget_slot().store(budget); }

void check_budget(const std::string& what, double required, double budget)
{
    if (required > budget)
        throw BudgetExceeded(what, required, budget);
}

int default_threads() noexcept { return g_threads.load(); }

void set_default_threads(int threads) noexcept { g_threads.store(threads < 1 ? 1 : threads); }

// ---- combinatorics ----

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("binomial coefficient overflow");
    }
    return static_cast<std::uint64_t>(result);
}

double falling_factorial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0.0;
    double out = 1.0;
    for (std::uint64_t i = 0; i < k; ++i)
        out *= static_cast<double>(n - i);
    return out;
}

double ipow(double base, unsigned exponent)
{
    double out = 1.0;
    while (exponent) {
        if (exponent & 1u)
            out *= base;
        base *= base;
        exponent >>= 1u;
    }
    return out;
}

SubsetIndexer::SubsetIndexer(int n, int r) : n_(n), r_(r)
{
    if (n < 0 || r < 1)
        throw std::invalid_argument("SubsetIndexer needs n >= 0, r >= 1");
    table_.assign(static_cast<std::size_t>(n + 1) * (r + 1), 0);
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= r; ++b)
            table_[a * (r + 1) + b] = binomial(a, b);
    size_ = choose(n, r);
}

std::size_t SubsetIndexer::rank(std::span<const int> sorted) const
{
    std::size_t out = 0;
    for (int i = 0; i < r_; ++i)
        out += choose(sorted[i], i + 1);
    return out;
}

void SubsetIndexer::unrank(std::size_t rank, std::span<int> out) const
{
    int hi = n_ - 1;
    for (int i = r_ - 1; i >= 0; --i) {
        while (choose(hi, i + 1) > rank)
            --hi;
        out[i] = hi;
        rank -= choose(hi, i + 1);
        --hi;
    }
}

std::vector<int> SubsetIndexer::unrank(std::size_t rank) const
{
    std::vector<int> out(r_);
    unrank(rank, out);
    return out;
}

MultisetIndexer::MultisetIndexer(int n, int r) : n_(n), r_(r), subsets_(n + r - 1, r) {}

std::size_t MultisetIndexer::rank(std::span<const int> sorted) const
{
    std::vector<int> shifted(sorted.begin(), sorted.end());
    for (int i = 0; i < r_; ++i)
        shifted[i] += i;
    return subsets_.rank(shifted);
}

std::vector<int> MultisetIndexer::unrank(std::size_t rank) const
{
    auto s = subsets_.unrank(rank);
    for (int i = 0; i < r_; ++i)
        s[i] -= i;
    return s;
}

bool next_subset_colex(std::span<int> subset, int n)
{
    const int r = static_cast<int>(subset.size());
    for (int i = 0; i < r; ++i) {
        const int limit = (i + 1 < r) ? subset[i + 1] : n;
        if (subset[i] + 1 < limit) {
            ++subset[i];
            for (int j = 0; j < i; ++j)
                subset[j] = j;
            return true;
        }
    }
    return false;
}

// ---- rationals ----

std::string to_string(const Rational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    auto trim = [](std::string& x) {
        const auto a = x.find_first_not_of(" \t");
        const auto b = x.find_last_not_of(" \t");
        x = (a == std::string::npos) ? std::string() : x.substr(a, b - a + 1);
    };
    trim(s);
    if (s.empty())
        throw std::invalid_argument("empty rational");
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw std::invalid_argument("not a rational: '" + s + "'");
    q.canonicalize();
    return q;
}

double to_double(const Rational& q) { return q.get_d(); }

// ---- rng ----

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) noexcept
{
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

namespace {

std::uint64_t philox_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept
{
    const auto out = philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                 static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
                                {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double to_unit(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

} // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept
{
    return to_unit(philox_u64(seed, stream, index));
}

std::uint64_t RandomStream::next_u64() noexcept { return philox_u64(seed_, stream_, index_++); }

double RandomStream::uniform() noexcept { return to_unit(next_u64()); }

double RandomStream::normal() noexcept
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t RandomStream::below(std::uint64_t bound) noexcept
{
    if (bound == 0)
        return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = next_u64();
    while (x >= limit)
        x = next_u64();
    return x % bound;
}

} // namespace hyperrate
