#pragma once

#include "hyperrate/hypergraph.hpp"
#include "hyperrate/parallel.hpp"

#include <cstdint>
#include <vector>

namespace hyperrate {

// G^{(r)}(n, p). Edge e of sample s is present iff the counter uniform at
// (seed, s, rank(e)) is below p, so samples are reproducible independently.
Hypergraph sample_gnp(int n, int r, double p, std::uint64_t seed, std::uint64_t sample = 0);

// Injective maps V(H) -> V(G) sending edges to edges. |V(H)| <= 8.
std::uint64_t count_embeddings(const Hypergraph& h, const Hypergraph& g);

// Unlabeled copies: embeddings / |Aut(H)|.
std::uint64_t count_copies(const Hypergraph& h, const Hypergraph& g);

// count >= threshold with a relative slack of 1e-12.
bool meets_threshold(double count, double threshold);

struct SampleReport {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double expected = 0.0;  // E X_H
    double threshold = 0.0; // (1 + delta) E X_H
    double mean = 0.0;
    double variance = 0.0;
    double mean_standard_error = 0.0;
    std::uint64_t tail_hits = 0;
    double tail_estimate = 0.0;
    double standard_error = 0.0;
    bool importance = false;
};

struct SimulationOptions {
    int threads = default_threads();
    // Importance sampling: edges inside the first `planted_prefix` vertices
    // are drawn with probability `planted_q` and reweighted by the
    // likelihood ratio. Off by default.
    bool importance = false;
    int planted_prefix = 0; // 0 means |V(H)|
    double planted_q = 0.0; // 0 means sqrt(p)
};

SampleReport tail_estimate(const Hypergraph& h, int n, double p, double delta, std::uint64_t samples,
                           std::uint64_t seed, const SimulationOptions& opts = {});

// P(X_H >= (1 + delta) E X_H) by enumerating all graphs; C(n, r) <= 22.
double exact_tail(const Hypergraph& h, int n, double p, double delta);

// Mean count under the same enumeration, for cross-checks.
double exact_mean_count(const Hypergraph& h, int n, double p);

} // namespace hyperrate
