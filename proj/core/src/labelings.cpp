#include "hyperrate/labelings.hpp"

#include "hyperrate/errors.hpp"
#include "linear.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace hyperrate {

using detail::AffineSystem;

bool Labeling::is_zero() const
{
    return std::all_of(values.begin(), values.end(), [](const Rational& q) { return q == 0; });
}

std::vector<Rational> Labeling::support_values() const
{
    std::vector<Rational> out;
    for (const auto& q : values)
        if (q != 0)
            out.push_back(q);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Rational> Labeling::value_multiset() const
{
    auto out = values;
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Rational> edge_sums(const Hypergraph& h, const Labeling& f)
{
    if (static_cast<int>(f.values.size()) != h.vertex_count())
        throw std::invalid_argument("labeling size differs from vertex count");
    std::vector<Rational> out;
    out.reserve(h.edge_count());
    for (const auto& e : h.edges()) {
        Rational s = 0;
        for (int v : e)
            s += f.values[v];
        out.push_back(s);
    }
    return out;
}

LabelingPattern pattern_of(const Hypergraph& h, const Labeling& f)
{
    LabelingPattern pat;
    pat.edge_sum_vector = edge_sums(h, f);
    const int k = h.vertex_count();
    std::vector<bool> seen(k, false);
    for (int v = 0; v < k; ++v) {
        if (f.values[v] == 0) {
            pat.zero_set.push_back(v);
            continue;
        }
        if (seen[v])
            continue;
        std::vector<int> block;
        for (int w = v; w < k; ++w)
            if (f.values[w] == f.values[v]) {
                block.push_back(w);
                seen[w] = true;
            }
        pat.equality_partition.push_back(std::move(block));
    }
    return pat;
}

bool is_in_gamma_tilde(const Hypergraph& h, const Labeling& f)
{
    if (static_cast<int>(f.values.size()) != h.vertex_count())
        return false;
    const int delta = max_degree(h);
    for (int v = 0; v < h.vertex_count(); ++v) {
        const auto& q = f.values[v];
        if (q < 0 || q > 1)
            return false;
        if (h.degree(v) < delta && q != 0)
            return false;
    }
    for (const auto& s : edge_sums(h, f))
        if (s != 0 && s != 1)
            return false;
    return true;
}

namespace {

void add_edge_row(AffineSystem& sys, const Edge& e, const Rational& rhs, int k)
{
    std::vector<Rational> row(k);
    for (int v : e)
        row[v] = 1;
    sys.add(std::move(row), rhs);
}

AffineSystem low_degree_zeros(const Hypergraph& h)
{
    AffineSystem sys(h.vertex_count());
    const int delta = max_degree(h);
    for (int v = 0; v < h.vertex_count(); ++v)
        if (h.degree(v) < delta)
            sys.add_zero(v);
    return sys;
}

const Rational kZero(0);
const Rational kOne(1);

bool admissible(AffineSystem::Outcome o, const AffineSystem& s)
{
    return o == AffineSystem::Outcome::added && s.determined_within(kZero, kOne);
}

class NodeCounter {
public:
    NodeCounter(const char* what, double budget) : what_(what), budget_(budget) {}
    void tick()
    {
        if (++count_ > budget_)
            throw BudgetExceeded(what_, count_, budget_);
    }

private:
    const char* what_;
    double budget_;
    double count_ = 0;
};

} // namespace

bool is_stable(const Hypergraph& h, const Labeling& f)
{
    if (!is_in_gamma_tilde(h, f))
        return false;
    const int k = h.vertex_count();
    AffineSystem sys = low_degree_zeros(h);
    const auto sums = edge_sums(h, f);
    for (std::size_t i = 0; i < h.edge_count(); ++i)
        add_edge_row(sys, h.edge(i), sums[i], k);
    for (int v = 0; v < k; ++v) {
        if (f.values[v] == 0)
            sys.add_zero(v);
        for (int w = v + 1; w < k; ++w)
            if (f.values[w] == f.values[v])
                sys.add_equal(v, w);
    }
    return sys.dimension() == 0;
}

std::vector<Labeling> enumerate_stable_labelings(const Hypergraph& h, const LabelingOptions& opts)
{
    const int k = h.vertex_count();
    const std::size_t m = h.edge_count();
    if (m > 20)
        throw BudgetExceeded("enumerate_stable_labelings: edge-sum vectors", std::ldexp(1.0, static_cast<int>(m)),
                             std::ldexp(1.0, 20));

    std::set<std::vector<Rational>> found;
    std::unordered_set<std::string> visited;
    NodeCounter nodes("enumerate_stable_labelings: search nodes", opts.budget);

    // Second stage: refine an edge-sum system with zero and equality
    // constraints until it has a single solution.
    auto refine = [&](auto&& self, const AffineSystem& sys) -> void {
        if (!visited.insert(sys.key()).second)
            return;
        nodes.tick();
        if (sys.dimension() == 0) {
            found.insert(sys.solution());
            return;
        }
        for (int v = 0; v < k; ++v) {
            if (sys.determined(v))
                continue;
            AffineSystem next = sys;
            if (admissible(next.add_zero(v), next))
                self(self, next);
        }
        for (int u = 0; u < k; ++u)
            for (int w = u + 1; w < k; ++w) {
                AffineSystem next = sys;
                if (admissible(next.add_equal(u, w), next))
                    self(self, next);
            }
    };

    // First stage: choose each edge sum in {0, 1}, pruning as soon as the
    // partial system is inconsistent or pins a value outside [0,1].
    auto choose_sums = [&](auto&& self, std::size_t i, const AffineSystem& sys) -> void {
        if (i == m) {
            refine(refine, sys);
            return;
        }
        nodes.tick();
        const auto& e = h.edge(i);
        {
            AffineSystem zero = sys;
            bool ok = true;
            for (int v : e)
                ok = ok && zero.add_zero(v) != AffineSystem::Outcome::inconsistent;
            if (ok && zero.determined_within(kZero, kOne))
                self(self, i + 1, zero);
        }
        {
            AffineSystem one = sys;
            std::vector<Rational> row(k);
            for (int v : e)
                row[v] = 1;
            if (one.add(std::move(row), 1) != AffineSystem::Outcome::inconsistent && one.determined_within(kZero, kOne))
                self(self, i + 1, one);
        }
    };
    choose_sums(choose_sums, 0, low_degree_zeros(h));

    std::vector<Labeling> out;
    for (const auto& values : found) {
        Labeling f{values};
        if (is_stable(h, f))
            out.push_back(std::move(f));
    }
    return out;
}

std::optional<Labeling> unique_full_labeling_check(const Hypergraph& h, const LabelingOptions& opts)
{
    const int k = h.vertex_count();
    AffineSystem sys = low_degree_zeros(h);
    for (const auto& e : h.edges()) {
        std::vector<Rational> row(k);
        for (int v : e)
            row[v] = 1;
        if (sys.add(std::move(row), 1) == AffineSystem::Outcome::inconsistent)
            return std::nullopt;
    }
    if (!sys.determined_within(kZero, kOne))
        return std::nullopt;

    // The all-sums-1 set is a polytope inside the unit cube; it is a single
    // point iff it has exactly one vertex. Vertices are found by making bound
    // constraints tight until the system is determined.
    std::set<std::vector<Rational>> vertices;
    std::unordered_set<std::string> visited;
    NodeCounter nodes("unique_full_labeling_check: search nodes", opts.budget);
    auto search = [&](auto&& self, const AffineSystem& s) -> void {
        if (vertices.size() > 1 || !visited.insert(s.key()).second)
            return;
        nodes.tick();
        if (s.dimension() == 0) {
            vertices.insert(s.solution());
            return;
        }
        for (int v = 0; v < k; ++v) {
            if (s.determined(v))
                continue;
            for (const Rational* bound : {&kZero, &kOne}) {
                AffineSystem next = s;
                std::vector<Rational> row(k);
                row[v] = 1;
                if (admissible(next.add(std::move(row), *bound), next))
                    self(self, next);
            }
        }
    };
    search(search, sys);
    if (vertices.size() != 1)
        return std::nullopt;
    return Labeling{*vertices.begin()};
}

std::vector<std::pair<std::vector<Rational>, std::vector<Labeling>>> group_by_shape(const std::vector<Labeling>& ls)
{
    std::vector<std::pair<std::vector<Rational>, std::vector<Labeling>>> out;
    for (const auto& f : ls) {
        auto shape = f.value_multiset();
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& g) { return g.first == shape; });
        if (it == out.end())
            out.emplace_back(std::move(shape), std::vector<Labeling>{f});
        else
            it->second.push_back(f);
    }
    return out;
}

} // namespace hyperrate
