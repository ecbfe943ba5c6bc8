#include "hyperrate/weighted.hpp"

#include "hyperrate/errors.hpp"
#include "hyperrate/summation.hpp"
#include "tuple_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace hyperrate {

namespace {

void check_probability(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("base probability must lie in (0,1), got " + std::to_string(p));
}

void check_weight(double x)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("weight must lie in [0,1], got " + std::to_string(x));
}

// C(n, k) in floating point for counts too large for exact integers.
double choose_real(double n, int k)
{
    if (k < 0 || n < k)
        return 0.0;
    double out = 1.0;
    for (int i = 0; i < k; ++i)
        out *= (n - i) / (i + 1);
    return out;
}

} // namespace

WeightedHypergraph::WeightedHypergraph(int n, int r, double base_p, double fill)
    : n_(n), r_(r), p_(base_p), index_(n, r)
{
    check_probability(base_p);
    check_weight(fill);
    weights_.assign(index_.size(), fill);
}

WeightedHypergraph::WeightedHypergraph(int n, int r, double base_p, std::vector<double> weights)
    : n_(n), r_(r), p_(base_p), index_(n, r), weights_(std::move(weights))
{
    check_probability(base_p);
    if (weights_.size() != index_.size())
        throw std::invalid_argument("expected " + std::to_string(index_.size()) + " weights, got " +
                                    std::to_string(weights_.size()));
    for (double x : weights_)
        check_weight(x);
}

void WeightedHypergraph::set_weight(std::size_t rank, double value)
{
    check_weight(value);
    weights_.at(rank) = value;
}

double WeightedHypergraph::operator()(std::span<const int> tuple) const
{
    if (static_cast<int>(tuple.size()) != r_)
        throw std::invalid_argument("tuple length differs from uniformity");
    std::vector<int> s(tuple.begin(), tuple.end());
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        return 0.0;
    if (s.front() < 0 || s.back() >= n_)
        throw std::out_of_range("tuple vertex out of range");
    return weights_[index_.rank(s)];
}

WeightedHypergraph WeightedHypergraph::relabeled(std::span<const int> perm) const
{
    if (static_cast<int>(perm.size()) != n_)
        throw std::invalid_argument("permutation size mismatch");
    std::vector<double> out(weights_.size());
    std::vector<int> s(r_);
    for (std::size_t rank = 0; rank < weights_.size(); ++rank) {
        index_.unrank(rank, s);
        for (int& v : s)
            v = perm[static_cast<std::size_t>(v)];
        std::sort(s.begin(), s.end());
        out[index_.rank(s)] = weights_[rank];
    }
    return WeightedHypergraph(n_, r_, p_, std::move(out));
}

BlockModel::BlockModel(int r, double base_p, std::vector<std::uint64_t> class_sizes, std::vector<double> weight_table)
    : r_(r), p_(base_p), sizes_(std::move(class_sizes)), table_(std::move(weight_table))
{
    check_probability(base_p);
    if (r < 2)
        throw std::invalid_argument("uniformity must be at least 2");
    if (sizes_.empty())
        throw std::invalid_argument("block model needs at least one class");
    for (auto s : sizes_)
        if (s == 0)
            throw std::invalid_argument("block model classes must be nonempty");
    n_ = std::accumulate(sizes_.begin(), sizes_.end(), std::uint64_t{0});
    multisets_ = MultisetIndexer(class_count(), r);
    if (table_.size() != multisets_.size())
        throw std::invalid_argument("weight table has " + std::to_string(table_.size()) + " entries, expected " +
                                    std::to_string(multisets_.size()));
    for (double x : table_)
        check_weight(x);
}

BlockModel::BlockModel(int r, double base_p, std::vector<std::uint64_t> class_sizes)
    : BlockModel(r, base_p, class_sizes,
                 std::vector<double>(MultisetIndexer(static_cast<int>(class_sizes.size()), r).size(), base_p))
{
}

double BlockModel::weight(std::span<const int> classes) const
{
    std::vector<int> s(classes.begin(), classes.end());
    std::sort(s.begin(), s.end());
    return table_[multisets_.rank(s)];
}

void BlockModel::set_weight(std::span<const int> classes, double value)
{
    check_weight(value);
    std::vector<int> s(classes.begin(), classes.end());
    std::sort(s.begin(), s.end());
    table_[multisets_.rank(s)] = value;
}

int BlockModel::class_of(std::uint64_t vertex) const
{
    std::uint64_t end = 0;
    for (int c = 0; c < class_count(); ++c) {
        end += sizes_[c];
        if (vertex < end)
            return c;
    }
    throw std::out_of_range("vertex outside block model");
}

WeightedHypergraph BlockModel::materialize() const
{
    if (n_ > 100000)
        throw SizeLimitExceeded("block model too large to materialize");
    const int n = static_cast<int>(n_);
    SubsetIndexer index(n, r_);
    std::vector<int> cls(n);
    for (int v = 0; v < n; ++v)
        cls[v] = class_of(static_cast<std::uint64_t>(v));
    std::vector<double> w(index.size());
    std::vector<int> s(r_), c(r_);
    for (std::size_t rank = 0; rank < w.size(); ++rank) {
        index.unrank(rank, s);
        for (int i = 0; i < r_; ++i)
            c[i] = cls[s[i]];
        w[rank] = weight(c);
    }
    return WeightedHypergraph(n, r_, p_, std::move(w));
}

double density(const Hypergraph& h, const WeightedHypergraph& w, const EvalOptions& opts)
{
    const double required = std::pow(static_cast<double>(w.vertex_count()), h.vertex_count());
    check_budget("density", required, opts.budget);
    return detail::TupleEngine(h, w).density(opts.threads);
}

namespace {

// Chromatic polynomials of induced subgraphs of a graph on at most 32
// vertices, as coefficients in the falling-factorial basis: a_j is the number
// of partitions of the vertex set into j independent sets.
class ChromaticTable {
public:
    explicit ChromaticTable(std::vector<std::uint32_t> adjacency) : adj_(std::move(adjacency)) {}

    const std::vector<double>& partitions(std::uint32_t mask)
    {
        if (auto it = memo_.find(mask); it != memo_.end())
            return it->second;
        std::vector<double> out;
        if (mask == 0) {
            out = {1.0};
        } else {
            const int v = std::countr_zero(mask);
            const std::uint32_t bit = 1u << v;
            const std::uint32_t free = mask & ~bit & ~adj_[v];
            // every independent block containing v
            for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
                if (independent(sub)) {
                    const auto& rest = partitions(mask & ~bit & ~sub);
                    if (out.size() < rest.size() + 1)
                        out.resize(rest.size() + 1, 0.0);
                    for (std::size_t j = 0; j < rest.size(); ++j)
                        out[j + 1] += rest[j];
                }
                if (sub == 0)
                    break;
            }
        }
        return memo_.emplace(mask, std::move(out)).first->second;
    }

    double evaluate(std::uint32_t mask, double colors)
    {
        const auto& a = partitions(mask);
        double total = 0.0, falling = 1.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            total += a[j] * falling;
            falling *= (colors - static_cast<double>(j));
            if (falling <= 0.0)
                break;
        }
        return total;
    }

private:
    bool independent(std::uint32_t set) const
    {
        for (std::uint32_t s = set; s; s &= s - 1)
            if (adj_[std::countr_zero(s)] & set)
                return false;
        return true;
    }

    std::vector<std::uint32_t> adj_;
    std::unordered_map<std::uint32_t, std::vector<double>> memo_;
};

} // namespace

double density_blockwise(const Hypergraph& h, const BlockModel& b, const EvalOptions& opts)
{
    if (h.uniformity() != b.uniformity())
        throw std::invalid_argument("pattern and block model have different uniformity");
    const int classes = b.class_count();
    if (classes > 8)
        throw SizeLimitExceeded("density_blockwise supports at most 8 classes");
    const int k = h.vertex_count();
    if (k > 32)
        throw SizeLimitExceeded("density_blockwise supports patterns with at most 32 vertices");
    check_budget("density_blockwise", std::pow(static_cast<double>(classes), k), opts.budget);

    std::vector<std::uint32_t> adj(k, 0);
    for (const auto& e : h.edges())
        for (int u : e)
            for (int v : e)
                if (u != v)
                    adj[u] |= 1u << v;

    const auto order = detail::placement_order(h);
    std::vector<int> level_of(k);
    for (int lv = 0; lv < k; ++lv)
        level_of[order[lv]] = lv;
    std::vector<std::vector<std::vector<int>>> closing(k);
    for (const auto& e : h.edges()) {
        std::vector<int> lv;
        for (int v : e)
            lv.push_back(level_of[v]);
        closing[*std::max_element(lv.begin(), lv.end())].push_back(lv);
    }

    const auto& sizes = b.class_sizes();
    ChromaticTable chromatic(adj);
    std::vector<int> assign(k);
    std::vector<int> cls(h.uniformity());
    CompensatedSum total;

    // depth-first over class assignments in placement order
    auto leaf_count = [&]() {
        double count = 1.0;
        for (int c = 0; c < classes && count != 0.0; ++c) {
            std::uint32_t mask = 0;
            for (int lv = 0; lv < k; ++lv)
                if (assign[lv] == c)
                    mask |= 1u << order[lv];
            if (mask)
                count *= chromatic.evaluate(mask, static_cast<double>(sizes[c]));
        }
        return count;
    };
    auto recurse = [&](auto&& self, int level, double partial) -> void {
        if (level == k) {
            total += partial * leaf_count();
            return;
        }
        for (int c = 0; c < classes; ++c) {
            assign[level] = c;
            double q = partial;
            for (const auto& e : closing[level]) {
                for (std::size_t i = 0; i < e.size(); ++i)
                    cls[i] = assign[e[i]];
                q *= b.weight(cls);
                if (q == 0.0)
                    break;
            }
            if (q != 0.0)
                self(self, level + 1, q);
        }
    };
    recurse(recurse, 0, 1.0);
    return total.value() / std::pow(static_cast<double>(b.vertex_count()), k);
}

double entropy_scalar(double x, double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("entropy_scalar: p must lie in (0,1)");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("entropy_scalar: x must lie in [0,1]");
    double out = 0.0;
    if (x > 0.0)
        out += x * std::log(x / p);
    if (x < 1.0)
        out += (1.0 - x) * std::log((1.0 - x) / (1.0 - p));
    return out;
}

double relative_entropy(const WeightedHypergraph& w)
{
    CompensatedSum total;
    for (double x : w.weights())
        total += entropy_scalar(x, w.base_p());
    return total.value();
}

double relative_entropy(const BlockModel& b)
{
    const auto& ms = b.multisets();
    const auto& sizes = b.class_sizes();
    CompensatedSum total;
    for (std::size_t rank = 0; rank < ms.size(); ++rank) {
        const auto classes = ms.unrank(rank);
        double count = 1.0;
        for (std::size_t i = 0; i < classes.size();) {
            std::size_t j = i;
            while (j < classes.size() && classes[j] == classes[i])
                ++j;
            count *= choose_real(static_cast<double>(sizes[classes[i]]), static_cast<int>(j - i));
            i = j;
        }
        if (count > 0.0)
            total += count * entropy_scalar(b.weight_table()[rank], b.base_p());
    }
    return total.value();
}

double expected_count(const Hypergraph& h, int n, double p)
{
    if (n < h.vertex_count())
        throw std::invalid_argument("expected_count needs n >= |V(H)|");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("expected_count: p must lie in [0,1]");
    const double aut = static_cast<double>(automorphism_count(h, 32));
    return falling_factorial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(h.vertex_count())) / aut *
           std::pow(p, static_cast<double>(h.edge_count()));
}

} // namespace hyperrate
