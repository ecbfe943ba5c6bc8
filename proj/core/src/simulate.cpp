#include "hyperrate/simulate.hpp"

#include "hyperrate/combinatorics.hpp"
#include "hyperrate/errors.hpp"
#include "hyperrate/rng.hpp"
#include "hyperrate/summation.hpp"
#include "hyperrate/weighted.hpp"
#include "tuple_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace hyperrate {

Hypergraph sample_gnp(int n, int r, double p, std::uint64_t seed, std::uint64_t sample)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("sample_gnp: p must lie in [0,1]");
    SubsetIndexer index(n, r);
    std::vector<Edge> edges;
    for (std::size_t rank = 0; rank < index.size(); ++rank)
        if (counter_uniform(seed, sample, rank) < p)
            edges.push_back(index.unrank(rank));
    return Hypergraph(r, n, std::move(edges));
}

namespace {

// Backtracking embedding counter against a host given by edge presence over
// colex ranks.
class EmbeddingCounter {
public:
    EmbeddingCounter(const Hypergraph& h, int n) : h_(h), n_(n), index_(n, h.uniformity())
    {
        if (h.vertex_count() > 8)
            throw SizeLimitExceeded("count_copies supports patterns with at most 8 vertices");
        if (n < h.vertex_count())
            return;
        order_ = detail::placement_order(h);
        const int k = h.vertex_count();
        std::vector<int> level_of(k);
        for (int lv = 0; lv < k; ++lv)
            level_of[order_[lv]] = lv;
        closing_.assign(k, {});
        for (const auto& e : h.edges()) {
            std::vector<int> lv;
            for (int v : e)
                lv.push_back(level_of[v]);
            closing_[*std::max_element(lv.begin(), lv.end())].push_back(std::move(lv));
        }
    }

    const SubsetIndexer& index() const { return index_; }

    std::uint64_t count(const std::vector<char>& present, const std::vector<int>& host_degree) const
    {
        if (n_ < h_.vertex_count())
            return 0;
        std::vector<int> image(h_.vertex_count());
        std::vector<char> used(n_, 0);
        std::vector<int> s(h_.uniformity());
        std::uint64_t total = 0;
        auto recurse = [&](auto&& self, int level) -> void {
            if (level == h_.vertex_count()) {
                ++total;
                return;
            }
            const int need = h_.degree(order_[level]);
            for (int x = 0; x < n_; ++x) {
                if (used[x] || host_degree[x] < need)
                    continue;
                image[level] = x;
                bool ok = true;
                for (const auto& e : closing_[level]) {
                    for (std::size_t i = 0; i < e.size(); ++i)
                        s[i] = image[e[i]];
                    std::sort(s.begin(), s.end());
                    if (!present[index_.rank(s)]) {
                        ok = false;
                        break;
                    }
                }
                if (!ok)
                    continue;
                used[x] = 1;
                self(self, level + 1);
                used[x] = 0;
            }
        };
        recurse(recurse, 0);
        return total;
    }

    std::uint64_t count(const std::vector<char>& present) const
    {
        std::vector<int> deg(n_, 0);
        std::vector<int> s(h_.uniformity());
        for (std::size_t rank = 0; rank < present.size(); ++rank)
            if (present[rank]) {
                index_.unrank(rank, s);
                for (int v : s)
                    ++deg[v];
            }
        return count(present, deg);
    }

private:
    const Hypergraph& h_;
    int n_;
    SubsetIndexer index_;
    std::vector<int> order_;
    std::vector<std::vector<std::vector<int>>> closing_;
};

std::vector<char> presence(const Hypergraph& g, const SubsetIndexer& index)
{
    std::vector<char> present(index.size(), 0);
    for (const auto& e : g.edges())
        present[index.rank(e)] = 1;
    return present;
}

} // namespace

std::uint64_t count_embeddings(const Hypergraph& h, const Hypergraph& g)
{
    if (h.uniformity() != g.uniformity())
        throw std::invalid_argument("count_copies: pattern and host have different uniformity");
    EmbeddingCounter counter(h, g.vertex_count());
    return counter.count(presence(g, counter.index()), g.degrees());
}

std::uint64_t count_copies(const Hypergraph& h, const Hypergraph& g)
{
    return count_embeddings(h, g) / automorphism_count(h, 8);
}

bool meets_threshold(double count, double threshold) { return count >= threshold - 1e-12 * std::fabs(threshold); }

SampleReport tail_estimate(const Hypergraph& h, int n, double p, double delta, std::uint64_t samples,
                           std::uint64_t seed, const SimulationOptions& opts)
{
    if (delta < -1.0)
        throw std::domain_error("tail_estimate: delta must be at least -1");
    if (samples == 0)
        throw std::invalid_argument("tail_estimate: need at least one sample");
    SampleReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.expected = expected_count(h, n, p);
    rep.threshold = (1.0 + delta) * rep.expected;
    rep.importance = opts.importance;

    const int r = h.uniformity();
    const double aut = static_cast<double>(automorphism_count(h, 8));
    EmbeddingCounter counter(h, n);
    const auto& index = counter.index();

    // planted prefix for the importance proposal
    const int prefix = opts.planted_prefix > 0 ? std::min(opts.planted_prefix, n) : std::min(h.vertex_count(), n);
    const double q = opts.planted_q > 0.0 ? opts.planted_q : std::sqrt(p);
    std::vector<char> inside(index.size(), 0);
    if (opts.importance) {
        std::vector<int> s(r);
        for (std::size_t rank = 0; rank < index.size(); ++rank) {
            index.unrank(rank, s);
            inside[rank] = s.back() < prefix;
        }
    }

    std::vector<double> counts(samples), weights(samples, 1.0);
    parallel_for(samples, opts.threads, [&](std::size_t i) {
        std::vector<char> present(index.size(), 0);
        double log_ratio = 0.0;
        for (std::size_t rank = 0; rank < index.size(); ++rank) {
            const double u = counter_uniform(seed, i, rank);
            if (opts.importance && inside[rank]) {
                present[rank] = u < q;
                log_ratio += present[rank] ? std::log(p / q) : std::log((1.0 - p) / (1.0 - q));
            } else {
                present[rank] = u < p;
            }
        }
        counts[i] = static_cast<double>(counter.count(present)) / aut;
        weights[i] = std::exp(log_ratio);
    });

    CompensatedSum sum, sum_sq, tail, tail_sq;
    for (std::size_t i = 0; i < samples; ++i) {
        sum += counts[i];
        if (meets_threshold(counts[i], rep.threshold)) {
            ++rep.tail_hits;
            tail += weights[i];
            tail_sq += weights[i] * weights[i];
        }
    }
    const double m = static_cast<double>(samples);
    rep.mean = sum.value() / m;
    for (double c : counts)
        sum_sq += (c - rep.mean) * (c - rep.mean);
    rep.variance = samples > 1 ? sum_sq.value() / (m - 1.0) : 0.0;
    rep.mean_standard_error = std::sqrt(rep.variance / m);
    if (opts.importance) {
        rep.tail_estimate = tail.value() / m;
        const double second = tail_sq.value() / m;
        rep.standard_error = std::sqrt(std::max(0.0, second - rep.tail_estimate * rep.tail_estimate) / m);
    } else {
        rep.tail_estimate = static_cast<double>(rep.tail_hits) / m;
        rep.standard_error = std::sqrt(rep.tail_estimate * (1.0 - rep.tail_estimate) / m);
    }
    return rep;
}

namespace {

template <typename Visit>
void enumerate_graphs(const Hypergraph& h, int n, double p, Visit&& visit)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("exact_tail: p must lie in [0,1]");
    const std::uint64_t m = binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(h.uniformity()));
    if (m > 22)
        throw SizeLimitExceeded("exact enumeration needs C(n,r) <= 22, got " + std::to_string(m));
    EmbeddingCounter counter(h, n);
    const double aut = static_cast<double>(automorphism_count(h, 8));
    std::vector<char> present(m);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        for (std::uint64_t i = 0; i < m; ++i)
            present[i] = (mask >> i) & 1u;
        const int e = std::popcount(mask);
        const double prob = std::pow(p, e) * std::pow(1.0 - p, static_cast<double>(m) - e);
        if (prob == 0.0)
            continue;
        visit(static_cast<double>(counter.count(present)) / aut, prob);
    }
}

} // namespace

double exact_tail(const Hypergraph& h, int n, double p, double delta)
{
    const double threshold = (1.0 + delta) * expected_count(h, n, p);
    CompensatedSum total;
    enumerate_graphs(h, n, p, [&](double count, double prob) {
        if (meets_threshold(count, threshold))
            total += prob;
    });
    return total.value();
}

double exact_mean_count(const Hypergraph& h, int n, double p)
{
    CompensatedSum total;
    enumerate_graphs(h, n, p, [&](double count, double prob) { total += count * prob; });
    return total.value();
}

} // namespace hyperrate
