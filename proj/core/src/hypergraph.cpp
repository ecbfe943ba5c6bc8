#include "hyperrate/hypergraph.hpp"

#include "hyperrate/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hyperrate {

Hypergraph::Hypergraph(int uniformity, int vertex_count, std::vector<Edge> edges)
    : r_(uniformity), k_(vertex_count), edges_(std::move(edges))
{
    if (r_ < 2)
        throw std::invalid_argument("uniformity must be at least 2");
    if (k_ < r_)
        throw std::invalid_argument("vertex count must be at least the uniformity");
    for (auto& e : edges_) {
        if (static_cast<int>(e.size()) != r_)
            throw std::invalid_argument("edge of size " + std::to_string(e.size()) + " in a " +
                                        std::to_string(r_) + "-uniform hypergraph");
        std::sort(e.begin(), e.end());
        if (e.front() < 0 || e.back() >= k_)
            throw std::invalid_argument("edge vertex out of range");
        if (std::adjacent_find(e.begin(), e.end()) != e.end())
            throw std::invalid_argument("edge with a repeated vertex");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("duplicate edge");
    degrees_.assign(static_cast<std::size_t>(k_), 0);
    for (const auto& e : edges_)
        for (int v : e)
            ++degrees_[static_cast<std::size_t>(v)];
}

bool Hypergraph::has_edge(std::span<const int> vertices) const
{
    Edge e(vertices.begin(), vertices.end());
    std::sort(e.begin(), e.end());
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

Hypergraph Hypergraph::relabeled(std::span<const int> perm) const
{
    if (static_cast<int>(perm.size()) != k_)
        throw std::invalid_argument("permutation size mismatch");
    std::vector<Edge> mapped;
    mapped.reserve(edges_.size());
    for (const auto& e : edges_) {
        Edge m;
        for (int v : e)
            m.push_back(perm[static_cast<std::size_t>(v)]);
        mapped.push_back(std::move(m));
    }
    return Hypergraph(r_, k_, std::move(mapped));
}

int max_degree(const Hypergraph& h)
{
    const auto& d = h.degrees();
    return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

bool is_regular(const Hypergraph& h)
{
    const auto& d = h.degrees();
    return std::adjacent_find(d.begin(), d.end(), std::not_equal_to<>()) == d.end();
}

namespace {

// Backtracking search for vertex bijections preserving the edge set. Each
// vertex is mapped in turn; an edge is checked as soon as all of its vertices
// have images.
class AutomorphismSearch {
public:
    explicit AutomorphismSearch(const Hypergraph& h) : h_(h), image_(h.vertex_count(), -1), used_(h.vertex_count(), false)
    {
        closing_.resize(h.vertex_count());
        for (std::size_t i = 0; i < h.edge_count(); ++i)
            closing_[h.edge(i).back()].push_back(i);
    }

    template <typename Visit>
    void run(Visit&& visit)
    {
        extend(0, visit);
    }

private:
    template <typename Visit>
    void extend(int v, Visit& visit)
    {
        const int k = h_.vertex_count();
        if (v == k) {
            visit(image_);
            return;
        }
        for (int w = 0; w < k; ++w) {
            if (used_[w] || h_.degree(w) != h_.degree(v))
                continue;
            image_[v] = w;
            used_[w] = true;
            bool ok = true;
            for (std::size_t ei : closing_[v]) {
                Edge mapped;
                for (int u : h_.edge(ei))
                    mapped.push_back(image_[u]);
                if (!h_.has_edge(mapped)) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                extend(v + 1, visit);
            used_[w] = false;
            image_[v] = -1;
        }
    }

    const Hypergraph& h_;
    std::vector<int> image_;
    std::vector<bool> used_;
    std::vector<std::vector<std::size_t>> closing_;
};

void require_small(const Hypergraph& h, int max_vertices)
{
    if (h.vertex_count() > max_vertices)
        throw SizeLimitExceeded("automorphism search limited to " + std::to_string(max_vertices) +
                                " vertices, got " + std::to_string(h.vertex_count()));
}

} // namespace

std::uint64_t automorphism_count(const Hypergraph& h, int max_vertices)
{
    require_small(h, max_vertices);
    std::uint64_t count = 0;
    AutomorphismSearch(h).run([&](const std::vector<int>&) { ++count; });
    return count;
}

std::vector<std::vector<int>> automorphisms(const Hypergraph& h, int max_vertices)
{
    require_small(h, max_vertices);
    std::vector<std::vector<int>> out;
    AutomorphismSearch(h).run([&](const std::vector<int>& perm) { out.push_back(perm); });
    return out;
}

bool is_connected(const Hypergraph& h)
{
    const int k = h.vertex_count();
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : h.edges())
        for (int v : e)
            parent[find(v)] = find(e.front());
    for (int v = 1; v < k; ++v)
        if (find(v) != find(0))
            return false;
    return true;
}

bool is_complete(const Hypergraph& h)
{
    const auto expected = instances::clique(h.vertex_count(), h.uniformity());
    return expected.edges() == h.edges();
}

Hypergraph parse_hypergraph(const std::string& json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed hypergraph JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("r") || !j.contains("vertices") || !j.contains("edges"))
        throw std::invalid_argument("hypergraph JSON needs keys r, vertices, edges");
    try {
        auto edges = j.at("edges").get<std::vector<Edge>>();
        return Hypergraph(j.at("r").get<int>(), j.at("vertices").get<int>(), std::move(edges));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed hypergraph JSON: ") + e.what());
    }
}

std::string to_json(const Hypergraph& h)
{
    nlohmann::json j;
    j["r"] = h.uniformity();
    j["vertices"] = h.vertex_count();
    j["edges"] = h.edges();
    return j.dump();
}

Hypergraph read_hypergraph(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::ios_base::failure("cannot open hypergraph file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_hypergraph(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

void write_hypergraph(const Hypergraph& h, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::ios_base::failure("cannot write hypergraph file " + path.string());
    out << to_json(h) << '\n';
}

namespace instances {

Hypergraph clique(int k, int r)
{
    std::vector<Edge> edges;
    Edge e(r);
    std::iota(e.begin(), e.end(), 0);
    if (r <= k) {
        do {
            edges.push_back(e);
            int i = r - 1;
            while (i >= 0 && e[i] == k - r + i)
                --i;
            if (i < 0)
                break;
            ++e[i];
            for (int j = i + 1; j < r; ++j)
                e[j] = e[j - 1] + 1;
        } while (true);
    }
    return Hypergraph(r, k, std::move(edges));
}

Hypergraph single_edge(int r)
{
    Edge e(r);
    std::iota(e.begin(), e.end(), 0);
    return Hypergraph(r, r, {e});
}

Hypergraph cycle(int length)
{
    std::vector<Edge> edges;
    for (int i = 0; i < length; ++i)
        edges.push_back({i, (i + 1) % length});
    return Hypergraph(2, length, std::move(edges));
}

Hypergraph path(int vertices)
{
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < vertices; ++i)
        edges.push_back({i, i + 1});
    return Hypergraph(2, vertices, std::move(edges));
}

Hypergraph alternating_octahedron()
{
    return Hypergraph(3, 6, {{0, 1, 4}, {2, 3, 4}, {0, 2, 5}, {1, 3, 5}});
}

Hypergraph khub_counterexample()
{
    enum : int { G = 0, A, B, C, D, E, F, A2, B2, C2, D2, E2, F2 };
    return Hypergraph(3, 19,
                      {{A, B, 13}, {B, C, 14}, {A, C, 15}, {A, D, F}, {B, D, E}, {C, E, F},
                       {A2, B2, 16}, {B2, C2, 17}, {A2, C2, 18}, {A2, D2, F2}, {B2, D2, E2}, {C2, E2, F2},
                       {D, D2, G}, {E, E2, G}, {F, F2, G}});
}

} // namespace instances

} // namespace hyperrate
