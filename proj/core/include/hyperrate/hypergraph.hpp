#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hyperrate {

using Edge = std::vector<int>;

// A finite r-uniform hypergraph on vertices {0..k-1}. Edges are stored as
// sorted vertex lists, and the edge list itself is kept sorted, so two
// hypergraphs with the same edge set compare equal.
class Hypergraph {
public:
    Hypergraph() = default;

    // Throws std::invalid_argument on malformed edges (wrong size, repeated
    // or out-of-range vertices, duplicate edges).
    Hypergraph(int uniformity, int vertex_count, std::vector<Edge> edges);

    int uniformity() const noexcept { return r_; }
    int vertex_count() const noexcept { return k_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t i) const { return edges_.at(i); }

    int degree(int v) const { return degrees_.at(static_cast<std::size_t>(v)); }
    const std::vector<int>& degrees() const noexcept { return degrees_; }
    bool has_edge(std::span<const int> vertices) const;

    // Applies the vertex map v -> perm[v].
    Hypergraph relabeled(std::span<const int> perm) const;

    bool operator==(const Hypergraph&) const = default;

private:
    int r_ = 0;
    int k_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> degrees_;
};

int max_degree(const Hypergraph& h);

bool is_regular(const Hypergraph& h);

// |Aut(H)| by backtracking over vertex permutations. Throws
// SizeLimitExceeded when the vertex count exceeds max_vertices.
std::uint64_t automorphism_count(const Hypergraph& h, int max_vertices = 12);

// All automorphisms as permutation vectors, same limit.
std::vector<std::vector<int>> automorphisms(const Hypergraph& h, int max_vertices = 12);

bool is_connected(const Hypergraph& h);

// Complete r-graph on k vertices.
bool is_complete(const Hypergraph& h);

// JSON: {"r": int, "vertices": int, "edges": [[int,...],...]}
Hypergraph parse_hypergraph(const std::string& json_text);
std::string to_json(const Hypergraph& h);
Hypergraph read_hypergraph(const std::filesystem::path& path);
void write_hypergraph(const Hypergraph& h, const std::filesystem::path& path);

namespace instances {

Hypergraph clique(int k, int r);
Hypergraph single_edge(int r);
Hypergraph cycle(int length);
Hypergraph path(int vertices);

// Three-uniform, six vertices, four edges: alternating faces of the
// octahedron. Opposite vertex pairs are (0,3), (1,2), (4,5).
Hypergraph alternating_octahedron();

// Fifteen-edge 3-graph on which unions of k-hubs are beaten by a mixed hub.
// Thirteen degree-3 vertices (G=0, A..F=1..6, A'..F'=7..12) plus six
// degree-1 padding vertices 13..18 completing the six pair edges.
Hypergraph khub_counterexample();

} // namespace instances

} // namespace hyperrate
