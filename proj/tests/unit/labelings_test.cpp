#include "hyperrate/errors.hpp"
#include "hyperrate/labelings.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <set>

using namespace hyperrate;

namespace {

Labeling L(std::vector<Rational> v) { return Labeling{std::move(v)}; }

std::set<Labeling> as_set(const std::vector<Labeling>& v) { return {v.begin(), v.end()}; }

std::set<Labeling> clique_set(int k, int r)
{
    std::set<Labeling> s;
    s.insert(L(std::vector<Rational>(k, 0)));
    for (int v = 0; v < k; ++v) {
        std::vector<Rational> x(k, 0);
        x[v] = 1;
        s.insert(L(x));
    }
    s.insert(L(std::vector<Rational>(k, Rational(1, r))));
    return s;
}

// Stable labelings of a 2-graph from the characterization: indicators of
// independent sets of max-degree vertices, where any max-degree-regular
// component may instead carry the constant 1/2.
std::set<Labeling> twograph_expectation(const Hypergraph& h)
{
    const int k = h.vertex_count();
    const int D = max_degree(h);
    std::vector<int> comp(k);
    for (int v = 0; v < k; ++v)
        comp[v] = v;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& e : h.edges()) {
            const int m = std::min(comp[e[0]], comp[e[1]]);
            if (comp[e[0]] != m || comp[e[1]] != m)
                changed = true;
            comp[e[0]] = comp[e[1]] = m;
        }
    }
    std::vector<int> regular; // components whose every vertex has degree D
    for (int c = 0; c < k; ++c) {
        bool any = false, all = true;
        for (int v = 0; v < k; ++v)
            if (comp[v] == c) {
                any = true;
                all = all && h.degree(v) == D;
            }
        if (any && all)
            regular.push_back(c);
    }
    std::set<Labeling> s;
    for (int half = 0; half < (1 << regular.size()); ++half)
        for (int mask = 0; mask < (1 << k); ++mask) {
            std::vector<Rational> x(k, 0);
            bool ok = true;
            for (int v = 0; v < k && ok; ++v) {
                bool in_half = false;
                for (std::size_t i = 0; i < regular.size(); ++i)
                    in_half = in_half || ((half >> i & 1) && comp[v] == regular[i]);
                if (in_half) {
                    x[v] = Rational(1, 2);
                    ok = !(mask >> v & 1);
                } else if (mask >> v & 1) {
                    x[v] = 1;
                    ok = h.degree(v) == D;
                }
            }
            for (const auto& e : h.edges())
                ok = ok && !((mask >> e[0] & 1) && (mask >> e[1] & 1));
            if (ok)
                s.insert(L(x));
        }
    return s;
}

// A single r-edge: value 1/|S| on any vertex subset S.
std::set<Labeling> single_edge_set(int r)
{
    std::set<Labeling> s;
    for (int mask = 0; mask < (1 << r); ++mask) {
        std::vector<Rational> x(r, 0);
        for (int v = 0; v < r; ++v)
            if (mask >> v & 1)
                x[v] = Rational(1, std::popcount(static_cast<unsigned>(mask)));
        s.insert(L(x));
    }
    return s;
}

} // namespace

TEST(Labelings, Cliques)
{
    for (auto [k, r] : std::vector<std::pair<int, int>>{{4, 3}, {5, 3}, {5, 4}, {4, 2}}) {
        auto ls = enumerate_stable_labelings(instances::clique(k, r));
        EXPECT_EQ(ls.size(), static_cast<std::size_t>(k + 2));
        EXPECT_EQ(as_set(ls), clique_set(k, r)) << k << "," << r;
    }
}

TEST(Labelings, SingleEdge)
{
    for (int r : {2, 3, 4})
        EXPECT_EQ(as_set(enumerate_stable_labelings(instances::single_edge(r))), single_edge_set(r));
}

TEST(Labelings, CanonicalOrder)
{
    auto ls = enumerate_stable_labelings(instances::alternating_octahedron());
    EXPECT_TRUE(std::is_sorted(ls.begin(), ls.end()));
    EXPECT_EQ(as_set(ls).size(), ls.size());
    EXPECT_TRUE(ls.front().is_zero());
}

TEST(Labelings, SpecialGraphShapes)
{
    auto ls = enumerate_stable_labelings(instances::alternating_octahedron());
    ASSERT_EQ(ls.size(), 18u);
    std::map<std::vector<Rational>, std::size_t> by_shape;
    for (const auto& [shape, members] : group_by_shape(ls))
        by_shape[shape] = members.size();
    const Rational z(0), h(1, 2), t(1, 3), o(1);
    EXPECT_EQ(by_shape.at({z, z, z, z, z, z}), 1u);
    EXPECT_EQ(by_shape.at({z, z, z, z, z, o}), 6u);
    EXPECT_EQ(by_shape.at({z, z, z, h, h, h}), 4u);
    EXPECT_EQ(by_shape.at({z, z, z, z, o, o}), 3u);
    EXPECT_EQ(by_shape.at({z, z, h, h, h, h}), 3u);
    EXPECT_EQ(by_shape.at({t, t, t, t, t, t}), 1u);
}

TEST(Labelings, TwoGraphCharacterization)
{
    const std::vector<Hypergraph> graphs{instances::cycle(4), instances::cycle(5), instances::cycle(6),
                                         instances::clique(3, 2), instances::path(3), instances::path(5),
                                         Hypergraph(2, 5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}}),
                                         Hypergraph(2, 6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}})};
    for (std::size_t i = 0; i < graphs.size(); ++i)
        EXPECT_EQ(as_set(enumerate_stable_labelings(graphs[i])), twograph_expectation(graphs[i])) << i;
}

TEST(Labelings, EveryResultIsStable)
{
    for (const auto& h : {instances::alternating_octahedron(), instances::clique(5, 3), instances::cycle(4)}) {
        for (const auto& f : enumerate_stable_labelings(h)) {
            EXPECT_TRUE(is_in_gamma_tilde(h, f));
            EXPECT_TRUE(is_stable(h, f));
            for (const auto& s : edge_sums(h, f))
                EXPECT_TRUE(s == 0 || s == 1);
        }
    }
}

TEST(Labelings, ClosedUnderAutomorphisms)
{
    for (const auto& h : {instances::alternating_octahedron(), instances::cycle(6), instances::clique(5, 3)}) {
        auto ls = enumerate_stable_labelings(h);
        auto set = as_set(ls);
        for (const auto& perm : automorphisms(h))
            for (const auto& f : ls) {
                std::vector<Rational> g(f.values.size());
                for (std::size_t v = 0; v < g.size(); ++v)
                    g[perm[v]] = f.values[v];
                EXPECT_TRUE(set.count(L(g)));
            }
    }
}

TEST(Labelings, IndependentOfVertexOrder)
{
    auto h = instances::alternating_octahedron();
    std::vector<int> perm{5, 2, 4, 0, 3, 1};
    auto ls = enumerate_stable_labelings(h);
    std::set<Labeling> mapped;
    for (const auto& f : ls) {
        std::vector<Rational> g(6);
        for (int v = 0; v < 6; ++v)
            g[perm[v]] = f.values[v];
        mapped.insert(L(g));
    }
    EXPECT_EQ(as_set(enumerate_stable_labelings(h.relabeled(perm))), mapped);
}

TEST(Labelings, BruteForceOnValueGrid)
{
    const std::vector<Rational> values{0, Rational(1, 6), Rational(1, 5), Rational(1, 4), Rational(1, 3),
                                       Rational(1, 2), Rational(2, 3), Rational(3, 4), 1};
    const std::vector<Hypergraph> graphs{instances::clique(4, 3), instances::alternating_octahedron(),
                                         instances::cycle(4), instances::clique(4, 2), instances::path(4),
                                         Hypergraph(3, 5, {{0, 1, 2}, {2, 3, 4}})};
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const auto& h = graphs[gi];
        auto got = as_set(enumerate_stable_labelings(h));
        const int k = h.vertex_count();
        std::size_t found = 0;
        oracle::each_tuple(static_cast<int>(values.size()), k, [&](const std::vector<int>& idx) {
            std::vector<Rational> x(k);
            for (int v = 0; v < k; ++v)
                x[v] = values[idx[v]];
            Labeling f{x};
            for (const auto& s : edge_sums(h, f))
                if (s != 0 && s != 1)
                    return;
            if (!is_in_gamma_tilde(h, f) || !is_stable(h, f))
                return;
            ++found;
            EXPECT_TRUE(got.count(f)) << "graph " << gi;
        });
        EXPECT_GT(found, 0u);
    }
}

TEST(GammaTilde, Examples)
{
    auto k43 = instances::clique(4, 3);
    EXPECT_TRUE(is_in_gamma_tilde(k43, L({0, 0, 0, 0})));
    EXPECT_TRUE(is_in_gamma_tilde(k43, L(std::vector<Rational>(4, Rational(1, 3)))));
    EXPECT_FALSE(is_in_gamma_tilde(k43, L(std::vector<Rational>(4, Rational(1, 2)))));
}

TEST(Stability, Examples)
{
    auto c4 = instances::cycle(4);
    // C4 edges are (0,1),(1,2),(2,3),(0,3): alternate around the cycle
    EXPECT_TRUE(is_in_gamma_tilde(c4, L({Rational(1, 4), Rational(3, 4), Rational(1, 4), Rational(3, 4)})));
    EXPECT_FALSE(is_stable(c4, L({Rational(1, 4), Rational(3, 4), Rational(1, 4), Rational(3, 4)})));
    EXPECT_TRUE(is_stable(c4, L(std::vector<Rational>(4, Rational(1, 2)))));
    EXPECT_TRUE(is_stable(c4, L({0, 0, 0, 0})));
}

TEST(Pattern, ZeroSetAndPartition)
{
    auto h = instances::alternating_octahedron();
    auto pat = pattern_of(h, L({Rational(1, 2), Rational(1, 2), 0, 0, Rational(1, 2), 0}));
    EXPECT_EQ(pat.zero_set, (std::vector<int>{2, 3, 5}));
    ASSERT_EQ(pat.equality_partition.size(), 1u);
    EXPECT_EQ(pat.equality_partition[0], (std::vector<int>{0, 1, 4}));
    EXPECT_EQ(pat.edge_sum_vector.size(), 4u);
}

TEST(UniqueFullLabeling, Examples)
{
    auto f = unique_full_labeling_check(instances::khub_counterexample());
    ASSERT_TRUE(f);
    std::vector<Rational> want(19, 0);
    for (int v : {0, 1, 2, 3, 7, 8, 9})
        want[v] = Rational(1, 2);
    for (int v : {4, 5, 6, 10, 11, 12})
        want[v] = Rational(1, 4);
    EXPECT_EQ(f->values, want);

    auto g = unique_full_labeling_check(instances::clique(4, 3));
    ASSERT_TRUE(g);
    EXPECT_EQ(g->values, std::vector<Rational>(4, Rational(1, 3)));

    EXPECT_FALSE(unique_full_labeling_check(Hypergraph(2, 4, {{0, 1}, {2, 3}})));
    EXPECT_FALSE(unique_full_labeling_check(instances::alternating_octahedron()));
}

TEST(Labelings, Counterexample)
{
    auto ls = enumerate_stable_labelings(instances::khub_counterexample());
    EXPECT_EQ(ls.size(), 124u);
    auto full = *unique_full_labeling_check(instances::khub_counterexample());
    EXPECT_TRUE(as_set(ls).count(full));
}

TEST(Labelings, EdgeLimit)
{
    EXPECT_THROW(enumerate_stable_labelings(instances::clique(7, 3)), BudgetExceeded);
    LabelingOptions tiny;
    tiny.budget = 10;
    EXPECT_THROW(enumerate_stable_labelings(instances::alternating_octahedron(), tiny), BudgetExceeded);
}
