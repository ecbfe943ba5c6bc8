#include "hyperrate/errors.hpp"
#include "hyperrate/hypergraph.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace hyperrate;

TEST(Hypergraph, RejectsMalformedEdges)
{
    EXPECT_THROW(Hypergraph(3, 4, {{0, 1}}), std::invalid_argument);
    EXPECT_THROW(Hypergraph(3, 4, {{0, 1, 1}}), std::invalid_argument);
    EXPECT_THROW(Hypergraph(3, 4, {{0, 1, 4}}), std::invalid_argument);
    EXPECT_THROW(Hypergraph(3, 4, {{0, 1, 2}, {2, 1, 0}}), std::invalid_argument);
}

TEST(Hypergraph, CanonicalEdgeOrder)
{
    Hypergraph a(2, 3, {{2, 1}, {0, 1}});
    Hypergraph b(2, 3, {{1, 0}, {1, 2}});
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.degree(1), 2);
    EXPECT_EQ(max_degree(a), 2);
    EXPECT_FALSE(is_regular(a));
}

TEST(Hypergraph, Instances)
{
    auto oct = instances::alternating_octahedron();
    EXPECT_EQ(oct.edge_count(), 4u);
    EXPECT_TRUE(is_regular(oct));
    EXPECT_EQ(max_degree(oct), 2);
    auto ce = instances::khub_counterexample();
    EXPECT_EQ(ce.vertex_count(), 19);
    EXPECT_EQ(ce.edge_count(), 15u);
    EXPECT_EQ(max_degree(ce), 3);
    int full = 0;
    for (int v = 0; v < 19; ++v)
        full += ce.degree(v) == 3;
    EXPECT_EQ(full, 13);
    EXPECT_TRUE(is_complete(instances::clique(5, 3)));
    EXPECT_FALSE(is_complete(instances::cycle(4)));
}

TEST(Automorphisms, MatchBruteForce)
{
    for (const auto& h : {instances::clique(4, 3), instances::clique(5, 2), instances::cycle(5), instances::path(4),
                          instances::alternating_octahedron(), instances::single_edge(3),
                          Hypergraph(3, 6, {{0, 1, 2}, {2, 3, 4}, {0, 4, 5}})})
        EXPECT_EQ(automorphism_count(h), oracle::automorphisms(h));
    EXPECT_EQ(automorphism_count(instances::alternating_octahedron()), 24u);
    EXPECT_THROW(automorphism_count(instances::khub_counterexample()), SizeLimitExceeded);
}

TEST(Automorphisms, ListedPermutationsPreserveEdges)
{
    auto h = instances::alternating_octahedron();
    auto perms = automorphisms(h);
    EXPECT_EQ(perms.size(), 24u);
    for (const auto& p : perms)
        EXPECT_EQ(h.relabeled(p), h);
}

TEST(HypergraphJson, RoundTripAndErrors)
{
    auto h = instances::khub_counterexample();
    EXPECT_EQ(parse_hypergraph(to_json(h)), h);
    EXPECT_THROW(parse_hypergraph("{"), std::invalid_argument);
    EXPECT_THROW(parse_hypergraph(R"({"r": 2, "edges": []})"), std::invalid_argument);
    EXPECT_THROW(parse_hypergraph(R"({"r": 2, "vertices": 3, "edges": [[0, 5]]})"), std::invalid_argument);

    auto path = std::filesystem::temp_directory_path() / "hyperrate_graph_test.json";
    write_hypergraph(h, path);
    EXPECT_EQ(read_hypergraph(path), h);
    std::filesystem::remove(path);
    try {
        read_hypergraph("/definitely/missing.json");
        FAIL();
    } catch (const std::ios_base::failure& e) {
        EXPECT_NE(std::string(e.what()).find("/definitely/missing.json"), std::string::npos);
    }
}

TEST(BundledGraphs, MatchBuiltInInstances)
{
    const std::filesystem::path dir = HYPERRATE_TEST_DATA;
    EXPECT_EQ(read_hypergraph(dir / "k4r3.json"), instances::clique(4, 3));
    EXPECT_EQ(read_hypergraph(dir / "k5r4.json"), instances::clique(5, 4));
    EXPECT_EQ(read_hypergraph(dir / "c4.json"), instances::cycle(4));
    EXPECT_EQ(read_hypergraph(dir / "special3.json"), instances::alternating_octahedron());
    EXPECT_EQ(read_hypergraph(dir / "counterexample.json"), instances::khub_counterexample());
}
