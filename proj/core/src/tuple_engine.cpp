#include "tuple_engine.hpp"

#include "hyperrate/errors.hpp"
#include "hyperrate/parallel.hpp"
#include "hyperrate/summation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperrate::detail {

std::vector<int> placement_order(const Hypergraph& h)
{
    const int k = h.vertex_count();
    std::vector<int> order;
    std::vector<char> placed(k, 0);
    std::vector<int> missing(h.edge_count(), h.uniformity());
    while (static_cast<int>(order.size()) < k) {
        int best = -1;
        long best_closed = -1, best_touch = -1;
        for (int v = 0; v < k; ++v) {
            if (placed[v])
                continue;
            long closed = 0, touch = 0;
            for (std::size_t e = 0; e < h.edge_count(); ++e) {
                const auto& ed = h.edge(e);
                if (std::find(ed.begin(), ed.end(), v) == ed.end())
                    continue;
                if (missing[e] == 1)
                    ++closed;
                if (missing[e] < h.uniformity())
                    ++touch;
            }
            // degree as a last tie-break so the first pick is a busy vertex
            touch = touch * 64 + h.degree(v);
            if (closed > best_closed || (closed == best_closed && touch > best_touch)) {
                best = v;
                best_closed = closed;
                best_touch = touch;
            }
        }
        placed[best] = 1;
        order.push_back(best);
        for (std::size_t e = 0; e < h.edge_count(); ++e) {
            const auto& ed = h.edge(e);
            if (std::find(ed.begin(), ed.end(), best) != ed.end())
                --missing[e];
        }
    }
    return order;
}

TupleEngine::TupleEngine(const Hypergraph& h, const WeightedHypergraph& w)
    : n_(w.vertex_count()), r_(w.uniformity()), k_(h.vertex_count()), m_(static_cast<int>(h.edge_count())), w_(&w)
{
    if (m_ > 63)
        throw SizeLimitExceeded("density evaluation supports at most 63 pattern edges");
    if (h.uniformity() != r_)
        throw std::invalid_argument("pattern and weighted hypergraph have different uniformity");
    const auto order = placement_order(h);
    std::vector<int> level_of(k_);
    for (int lv = 0; lv < k_; ++lv)
        level_of[order[lv]] = lv;
    closing_.assign(k_, {});
    for (int e = 0; e < m_; ++e) {
        ClosingEdge ce{e, {}};
        int last = 0;
        for (int v : h.edge(e)) {
            ce.levels.push_back(level_of[v]);
            last = std::max(last, level_of[v]);
        }
        closing_[last].push_back(std::move(ce));
    }

    std::size_t cells = 1;
    for (int j = 0; j < r_; ++j)
        cells *= static_cast<std::size_t>(n_);
    table_.assign(cells, 0.0);
    distinct_.assign(cells, 0);
    std::vector<int> tuple(r_);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        std::size_t rest = idx;
        for (int j = r_ - 1; j >= 0; --j) {
            tuple[j] = static_cast<int>(rest % n_);
            rest /= n_;
        }
        auto sorted = tuple;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            continue;
        distinct_[idx] = 1;
        table_[idx] = w.weight(w.indexer().rank(sorted));
    }
}

double TupleEngine::subtree(int* x, int level, double partial) const
{
    if (level == k_)
        return partial;
    double sum = 0.0;
    for (int v = 0; v < n_; ++v) {
        x[level] = v;
        double q = partial;
        for (const auto& e : closing_[level]) {
            q *= table_[dense_index(e, x)];
            if (q == 0.0)
                break;
        }
        if (q != 0.0)
            sum += subtree(x, level + 1, q);
    }
    return sum;
}

double TupleEngine::density(int threads) const
{
    std::vector<double> slots(n_, 0.0);
    parallel_for(static_cast<std::size_t>(n_), threads, [&](std::size_t v0) {
        std::vector<int> x(k_);
        x[0] = static_cast<int>(v0);
        double q = 1.0;
        for (const auto& e : closing_[0])
            q *= table_[dense_index(e, x.data())];
        slots[v0] = (q == 0.0) ? 0.0 : subtree(x.data(), 1, q);
    });
    CompensatedSum total;
    for (double s : slots)
        total += s;
    return total.value() / std::pow(static_cast<double>(n_), k_);
}

double TupleEngine::subtree_grad(int* x, int level, double* factors, std::size_t* slots, int closed,
                                 double* buf) const
{
    if (level == k_) {
        // prefix/suffix products give the product of all other factors
        double suffix[64];
        suffix[m_] = 1.0;
        for (int j = m_ - 1; j >= 0; --j)
            suffix[j] = suffix[j + 1] * factors[j];
        double prefix = 1.0;
        for (int j = 0; j < m_; ++j) {
            buf[slots[j]] += prefix * suffix[j + 1];
            prefix *= factors[j];
        }
        const double leaf = suffix[0];
        return leaf;
    }
    double sum = 0.0;
    for (int v = 0; v < n_; ++v) {
        x[level] = v;
        int c = closed;
        bool ok = true;
        for (const auto& e : closing_[level]) {
            const std::size_t idx = dense_index(e, x);
            if (!distinct_[idx]) {
                ok = false;
                break;
            }
            factors[c] = table_[idx];
            slots[c] = idx;
            ++c;
        }
        if (ok)
            sum += subtree_grad(x, level + 1, factors, slots, c, buf);
    }
    return sum;
}

double TupleEngine::density_and_gradient(std::vector<double>& grad, int threads) const
{
    const std::size_t cells = table_.size();
    std::vector<std::vector<double>> bufs(n_);
    std::vector<double> sums(n_, 0.0);
    parallel_for(static_cast<std::size_t>(n_), threads, [&](std::size_t v0) {
        std::vector<double> buf(cells, 0.0);
        std::vector<int> x(k_);
        std::vector<double> factors(m_ + 1);
        std::vector<std::size_t> slots(m_ + 1);
        x[0] = static_cast<int>(v0);
        int c = 0;
        for (const auto& e : closing_[0]) {
            const std::size_t idx = dense_index(e, x.data());
            if (!distinct_[idx])
                return;
            factors[c] = table_[idx];
            slots[c] = idx;
            ++c;
        }
        sums[v0] = subtree_grad(x.data(), 1, factors.data(), slots.data(), c, buf.data());
        bufs[v0] = std::move(buf);
    });

    std::vector<double> dense(cells, 0.0);
    for (const auto& b : bufs)
        if (!b.empty())
            for (std::size_t i = 0; i < cells; ++i)
                dense[i] += b[i];

    const double scale = 1.0 / std::pow(static_cast<double>(n_), k_);
    const auto& index = w_->indexer();
    grad.assign(index.size(), 0.0);
    std::vector<int> subset(r_);
    for (std::size_t rank = 0; rank < index.size(); ++rank) {
        index.unrank(rank, subset);
        double g = 0.0;
        auto perm = subset;
        do {
            std::size_t idx = 0;
            for (int v : perm)
                idx = idx * n_ + static_cast<std::size_t>(v);
            g += dense[idx];
        } while (std::next_permutation(perm.begin(), perm.end()));
        grad[rank] = g * scale;
    }
    CompensatedSum total;
    for (double s : sums)
        total += s;
    return total.value() * scale;
}

} // namespace hyperrate::detail
