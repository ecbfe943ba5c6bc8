#include "hyperrate/analysis.hpp"

#include "hyperrate/errors.hpp"
#include "hyperrate/parallel.hpp"
#include "hyperrate/rng.hpp"
#include "hyperrate/simulate.hpp"
#include "hyperrate/summation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hyperrate {

namespace {

std::size_t dense_size(int n, int r)
{
    double sz = std::pow(static_cast<double>(n), r);
    if (sz > 1e8)
        throw SizeLimitExceeded("dense tensor with n^r = " + std::to_string(sz) + " entries");
    return static_cast<std::size_t>(sz);
}

void decode(std::size_t code, int n, std::span<int> out)
{
    for (std::size_t j = out.size(); j-- > 0;) {
        out[j] = static_cast<int>(code % static_cast<std::size_t>(n));
        code /= static_cast<std::size_t>(n);
    }
}

std::size_t multiset_rank(const MultisetIndexer& idx, std::span<const int> tuple)
{
    std::vector<int> s(tuple.begin(), tuple.end());
    std::sort(s.begin(), s.end());
    return idx.rank(s);
}

} // namespace

SymmetricTensor::SymmetricTensor(int n, int r, double fill) : n_(n), r_(r)
{
    if (n < 1 || r < 1)
        throw std::invalid_argument("SymmetricTensor: need n >= 1 and r >= 1");
    index_ = MultisetIndexer(n, r);
    values_.assign(index_.size(), fill);
    if (!std::isfinite(fill))
        throw std::invalid_argument("SymmetricTensor: values must be finite");
}

SymmetricTensor::SymmetricTensor(int n, int r, std::vector<double> values) : SymmetricTensor(n, r)
{
    if (values.size() != values_.size())
        throw std::invalid_argument("SymmetricTensor: expected " + std::to_string(values_.size()) + " values");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("SymmetricTensor: values must be finite");
    values_ = std::move(values);
}

SymmetricTensor SymmetricTensor::from_weighted(const WeightedHypergraph& w)
{
    SymmetricTensor t(w.vertex_count(), w.uniformity());
    for (std::size_t rank = 0; rank < t.size(); ++rank) {
        auto m = t.index_.unrank(rank);
        t.values_[rank] = w(m);
    }
    return t;
}

SymmetricTensor SymmetricTensor::gaussian(int n, int r, std::uint64_t seed, std::uint64_t stream)
{
    SymmetricTensor t(n, r);
    RandomStream rng(seed, stream);
    for (auto& v : t.values_)
        v = rng.normal();
    return t;
}

double SymmetricTensor::operator()(std::span<const int> tuple) const
{
    if (static_cast<int>(tuple.size()) != r_)
        throw std::invalid_argument("SymmetricTensor: tuple has wrong length");
    for (int v : tuple)
        if (v < 0 || v >= n_)
            throw std::out_of_range("SymmetricTensor: index out of range");
    return values_[multiset_rank(index_, tuple)];
}

std::vector<double> SymmetricTensor::dense() const
{
    const std::size_t total = dense_size(n_, r_);
    std::vector<double> out(total);
    std::vector<int> t(r_);
    for (std::size_t code = 0; code < total; ++code) {
        decode(code, n_, t);
        out[code] = values_[multiset_rank(index_, t)];
    }
    return out;
}

// reduced programs

namespace {

// Minimizes sum_i cost_i(c_i) over allocations c >= 0 with sum c = delta by a
// simplex grid followed by pairwise mass transfers. Each cost_i is concave,
// so this should only ever land on a vertex.
double allocation_minimum(const std::vector<std::function<double(double)>>& cost, double delta, int steps)
{
    const int d = static_cast<int>(cost.size());
    auto eval = [&](const std::vector<double>& c) {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
            s += cost[i](c[i]);
        return s;
    };
    std::vector<double> best_c;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> parts(d, 0);
    std::function<void(int, int)> walk = [&](int i, int left) {
        if (i == d - 1) {
            parts[i] = left;
            std::vector<double> c(d);
            for (int j = 0; j < d; ++j)
                c[j] = delta * parts[j] / steps;
            double v = eval(c);
            if (v < best) {
                best = v;
                best_c = c;
            }
            return;
        }
        for (int a = 0; a <= left; ++a) {
            parts[i] = a;
            walk(i + 1, left - a);
        }
    };
    walk(0, steps);

    double step = delta / steps;
    while (step > delta * 1e-14) {
        bool moved = false;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (i == j)
                    continue;
                double m = std::min(step, best_c[j]);
                if (m <= 0.0)
                    continue;
                auto c = best_c;
                c[i] += m;
                c[j] -= m;
                double v = eval(c);
                if (v < best) {
                    best = v;
                    best_c = c;
                    moved = true;
                }
            }
        if (!moved)
            step *= 0.5;
    }
    return best;
}

// Root of 4x^{3/2} + 3x^2 = c.
double special_x2(double c)
{
    if (c <= 0.0)
        return 0.0;
    double lo = 0.0, hi = std::max(1.0, std::sqrt(c));
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = 4.0 * std::pow(mid, 1.5) + 3.0 * mid * mid;
        (v < c ? lo : hi) = mid;
    }
    return hi;
}

} // namespace

ReducedProgramSolution solve_clique_program(int k, int r, double delta)
{
    if (!(k > r && r >= 2))
        throw std::invalid_argument("solve_clique_program: need k > r >= 2");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::domain_error("solve_clique_program: delta must be positive");
    const double e = static_cast<double>(k) / r;
    const double a_only = std::pow(delta, 1.0 / e);
    const double b_only = r * delta / k;

    ReducedProgramSolution sol;
    sol.branch_values = {{"a", a_only}, {"b", b_only}};
    if (a_only <= b_only) {
        sol.variables = {{"a", a_only}, {"b", 0.0}};
        sol.objective = a_only;
        sol.active_branch = "a";
    } else {
        sol.variables = {{"a", 0.0}, {"b", delta / k}};
        sol.objective = b_only;
        sol.active_branch = "b";
    }
    std::vector<std::function<double(double)>> cost = {
        [e](double c) { return std::pow(c, 1.0 / e); },
        [k, r](double c) { return static_cast<double>(r) * c / k; },
    };
    sol.interior_gap = allocation_minimum(cost, delta, 2000) - sol.objective;
    return sol;
}

ReducedProgramSolution solve_special_program(double delta)
{
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::domain_error("solve_special_program: delta must be positive");
    auto x1_of = [](double c) { return (-3.0 + std::sqrt(9.0 + 3.0 * c)) / 3.0; };

    const double x1 = x1_of(delta);
    const double x2 = special_x2(delta);
    const double x3 = std::sqrt(delta);
    const double y = std::sqrt(delta / 3.0);

    ReducedProgramSolution sol;
    sol.branch_values = {{"x1", 3.0 * x1}, {"x2", 3.0 * x2}, {"x3", x3}, {"y", 3.0 * y}};
    sol.variables = {{"x1", 0.0}, {"x2", 0.0}, {"x3", 0.0}, {"y", 0.0}};
    // x2 and y never win (3x2* >= min of the others), but they are compared
    // like the rest rather than assumed away.
    std::string best = "x1";
    for (const auto& [name, v] : sol.branch_values)
        if (v < sol.branch_values[best])
            best = name;
    sol.active_branch = best;
    sol.objective = sol.branch_values[best];
    const std::map<std::string, double> vertex = {{"x1", x1}, {"x2", x2}, {"x3", x3}, {"y", y}};
    sol.variables[best] = vertex.at(best);

    std::vector<std::function<double(double)>> cost = {
        [&](double c) { return 3.0 * x1_of(c); },
        [](double c) { return 3.0 * special_x2(c); },
        [](double c) { return std::sqrt(c); },
        [](double c) { return 3.0 * std::sqrt(c / 3.0); },
    };
    sol.interior_gap = allocation_minimum(cost, delta, 24) - sol.objective;
    return sol;
}

// counting function

double counting_function(const Hypergraph& h, const SymmetricTensor& x, double budget)
{
    if (h.uniformity() != x.r())
        throw std::invalid_argument("counting_function: uniformity mismatch");
    const int k = h.vertex_count();
    const int n = x.n();
    if (k > n)
        return 0.0;
    check_budget("counting_function", falling_factorial(n, k), budget);

    // edges closed by each vertex (largest endpoint)
    std::vector<std::vector<std::size_t>> closes(k);
    for (std::size_t e = 0; e < h.edge_count(); ++e)
        closes[h.edge(e).back()].push_back(e);

    std::vector<double> slots(n, 0.0);
    parallel_for(static_cast<std::size_t>(n), default_threads(), [&](std::size_t first) {
        std::vector<int> img(k, -1);
        std::vector<char> used(n, 0);
        std::vector<int> t(h.uniformity());
        CompensatedSum acc;
        std::function<void(int, double)> go = [&](int v, double prod) {
            if (v == k) {
                acc += prod;
                return;
            }
            for (int i = (v == 0 ? static_cast<int>(first) : 0); i < (v == 0 ? static_cast<int>(first) + 1 : n); ++i) {
                if (used[i])
                    continue;
                img[v] = i;
                double q = prod;
                for (auto e : closes[v]) {
                    const auto& edge = h.edge(e);
                    for (std::size_t j = 0; j < edge.size(); ++j)
                        t[j] = img[edge[j]];
                    q *= x(t);
                    if (q == 0.0)
                        break;
                }
                if (q != 0.0) {
                    used[i] = 1;
                    go(v + 1, q);
                    used[i] = 0;
                }
            }
        };
        if (k == 0)
            return;
        go(0, 1.0);
        slots[first] = acc.value();
    });
    if (k == 0)
        return 1.0;
    CompensatedSum total;
    for (double s : slots)
        total += s;
    return total.value();
}

double disc_lip(const Hypergraph& h, int n, DiscLipMode mode)
{
    const int r = h.uniformity();
    const int k = h.vertex_count();
    if (n < r)
        throw std::invalid_argument("disc_lip: need n >= r");
    const double N = static_cast<double>(binomial(n, r));
    const double scale = N / std::pow(static_cast<double>(n), k);
    if (h.edge_count() == 0)
        return 0.0;
    if (mode == DiscLipMode::bound) {
        double rf = falling_factorial(r, r);
        return scale * static_cast<double>(h.edge_count()) * rf * std::pow(static_cast<double>(n), k - r);
    }
    if (k > n)
        return 0.0;
    // T_H is multilinear with nonnegative coefficients, so every discrete
    // derivative is largest at the all-ones input, and all coordinates agree
    // there by symmetry: T(1) - T(1 - e_S) counts maps hitting S with an edge.
    check_budget("disc_lip", falling_factorial(n, k), evaluation_budget());
    std::vector<Edge> all;
    SubsetIndexer idx(n, r);
    for (std::size_t rank = 1; rank < idx.size(); ++rank)
        all.push_back(idx.unrank(rank));
    Hypergraph minus(r, n, std::move(all));
    const double full = falling_factorial(n, k);
    const double without = static_cast<double>(count_embeddings(h, minus));
    return scale * (full - without);
}

// cut norm

namespace {

struct CutLayout {
    int n, r;
    std::size_t tuples;
    std::size_t selectors; // number of (r-1)-multisets
    std::vector<double> f;
    // sel[k * tuples + t]: rank of tuple t with coordinate k removed
    std::vector<std::uint32_t> sel;
};

CutLayout make_layout(const SymmetricTensor& f)
{
    CutLayout L;
    L.n = f.n();
    L.r = f.r();
    L.f = f.dense();
    L.tuples = L.f.size();
    if (L.r == 1) {
        L.selectors = 1;
        L.sel.assign(L.tuples, 0);
        return L;
    }
    MultisetIndexer idx(L.n, L.r - 1);
    L.selectors = idx.size();
    L.sel.resize(static_cast<std::size_t>(L.r) * L.tuples);
    std::vector<int> t(L.r), rest(L.r - 1);
    for (std::size_t code = 0; code < L.tuples; ++code) {
        decode(code, L.n, t);
        for (int k = 0; k < L.r; ++k) {
            int c = 0;
            for (int j = 0; j < L.r; ++j)
                if (j != k)
                    rest[c++] = t[j];
            L.sel[k * L.tuples + code] = static_cast<std::uint32_t>(multiset_rank(idx, rest));
        }
    }
    return L;
}

// Marginal of selector k given the others: g[mu] = sum over tuples whose
// k-th complement is mu of f(t) prod_{j != k} u_j(...).
void marginal(const CutLayout& L, const std::vector<std::vector<char>>& u, int k, std::vector<double>& g)
{
    g.assign(L.selectors, 0.0);
    for (std::size_t t = 0; t < L.tuples; ++t) {
        double v = L.f[t];
        if (v == 0.0)
            continue;
        bool on = true;
        for (int j = 0; j < L.r && on; ++j)
            if (j != k && !u[j][L.sel[j * L.tuples + t]])
                on = false;
        if (on)
            g[L.sel[k * L.tuples + t]] += v;
    }
}

double best_last(const std::vector<double>& g)
{
    double pos = 0.0, neg = 0.0;
    for (double v : g)
        (v > 0.0 ? pos : neg) += v;
    return std::max(pos, -neg);
}

} // namespace

double cut_norm_exact(const SymmetricTensor& f, double budget)
{
    const CutLayout L = make_layout(f);
    const double combos = std::pow(2.0, static_cast<double>(L.selectors) * (L.r - 1));
    check_budget("cut_norm_exact", combos * static_cast<double>(L.tuples), budget);
    if (L.r == 1) {
        double s = 0.0;
        for (double v : L.f)
            s += v;
        return std::fabs(s);
    }
    const std::size_t m = L.selectors;
    const int free = L.r - 1;
    const std::uint64_t count = static_cast<std::uint64_t>(combos);
    // The last selector is chosen optimally from the marginal, so only the
    // first r-1 are enumerated.
    const int threads = default_threads();
    const std::size_t chunks = static_cast<std::size_t>(std::max(1, threads)) * 8;
    std::vector<double> slot(chunks, 0.0);
    parallel_for(chunks, threads, [&](std::size_t c) {
        std::vector<std::vector<char>> u(L.r, std::vector<char>(m, 1));
        std::vector<double> g;
        double best = 0.0;
        for (std::uint64_t code = c; code < count; code += chunks) {
            std::uint64_t bits = code;
            for (int k = 0; k < free; ++k)
                for (std::size_t s = 0; s < m; ++s) {
                    u[k][s] = static_cast<char>(bits & 1u);
                    bits >>= 1;
                }
            marginal(L, u, L.r - 1, g);
            best = std::max(best, best_last(g));
        }
        slot[c] = best;
    });
    return *std::max_element(slot.begin(), slot.end());
}

double cut_norm_heuristic(const SymmetricTensor& f, int restarts, std::uint64_t seed)
{
    if (restarts < 1)
        throw std::invalid_argument("cut_norm_heuristic: need at least one restart");
    const CutLayout L = make_layout(f);
    if (L.r == 1) {
        double s = 0.0;
        for (double v : L.f)
            s += v;
        return std::fabs(s);
    }
    std::vector<double> slot(static_cast<std::size_t>(restarts), 0.0);
    parallel_for(slot.size(), default_threads(), [&](std::size_t run) {
        double best = 0.0;
        // sign = +1 maximizes the sum, -1 minimizes it
        for (int sign : {1, -1}) {
            RandomStream rng(seed, run * 2 + (sign > 0 ? 0 : 1));
            std::vector<std::vector<char>> u(L.r, std::vector<char>(L.selectors, 1));
            if (run > 0)
                for (auto& uk : u)
                    for (auto& b : uk)
                        b = static_cast<char>(rng.bernoulli(0.5));
            std::vector<double> g;
            double value = -std::numeric_limits<double>::infinity();
            for (int sweep = 0; sweep < 200; ++sweep) {
                bool changed = false;
                for (int k = 0; k < L.r; ++k) {
                    marginal(L, u, k, g);
                    for (std::size_t s = 0; s < L.selectors; ++s) {
                        char want = static_cast<char>(sign * g[s] > 0.0);
                        if (want != u[k][s]) {
                            u[k][s] = want;
                            changed = true;
                        }
                    }
                }
                marginal(L, u, 0, g);
                double now = 0.0;
                for (std::size_t s = 0; s < L.selectors; ++s)
                    if (u[0][s])
                        now += g[s];
                value = sign * now;
                if (!changed)
                    break;
            }
            best = std::max(best, value);
        }
        slot[run] = best;
    });
    return *std::max_element(slot.begin(), slot.end());
}

GaussianWidthEstimate disc_gw_estimate(const Hypergraph& h, int n, int gaussian_samples, std::uint64_t seed,
                                       int restarts)
{
    if (gaussian_samples < 2)
        throw std::invalid_argument("disc_gw_estimate: need at least two samples");
    const int r = h.uniformity();
    if (n < r)
        throw std::invalid_argument("disc_gw_estimate: need n >= r");
    GaussianWidthEstimate est;
    est.samples = gaussian_samples;
    if (h.edge_count() == 0) {
        est.quantity = "zero";
        return est;
    }
    std::vector<double> draws(static_cast<std::size_t>(gaussian_samples));
    if (h.edge_count() == 1 && h.vertex_count() == r) {
        // T_H = r! sum_S x_S is linear: its gradient set is {r! 1}, and the
        // width is E max(<r! 1, G>, 0) over a Gaussian indexed by r-sets.
        est.quantity = "exact_linear";
        const std::size_t N = binomial(n, r);
        const double rf = falling_factorial(r, r);
        parallel_for(draws.size(), default_threads(), [&](std::size_t s) {
            RandomStream rng(seed, s);
            CompensatedSum acc;
            for (std::size_t i = 0; i < N; ++i)
                acc += rng.normal();
            draws[s] = std::max(rf * acc.value(), 0.0);
        });
    } else {
        est.quantity = "cut_norm_bound";
        const double factor =
            static_cast<double>(h.edge_count()) * std::pow(static_cast<double>(n), h.vertex_count() - r);
        for (std::size_t s = 0; s < draws.size(); ++s) {
            auto g = SymmetricTensor::gaussian(n, r, seed, s);
            draws[s] = factor * cut_norm_heuristic(g, restarts, seed ^ (0x9e3779b97f4a7c15ULL + s));
        }
    }
    CompensatedSum sum;
    for (double d : draws)
        sum += d;
    est.value = sum.value() / draws.size();
    CompensatedSum var;
    for (double d : draws)
        var += (d - est.value) * (d - est.value);
    est.standard_error = std::sqrt(var.value() / (draws.size() - 1) / draws.size());
    return est;
}

// Holder

HolderResult holder_check(const Hypergraph& h, const SymmetricTensor& u,
                          const std::optional<std::vector<std::vector<int>>>& blocks, double budget)
{
    const int r = h.uniformity();
    const int k = h.vertex_count();
    const int n = u.n();
    if (u.r() != r)
        throw std::invalid_argument("holder_check: uniformity mismatch");
    for (double v : u.values())
        if (v < 0.0)
            throw std::domain_error("holder_check: U must be nonnegative");

    std::vector<std::vector<int>> B(k);
    if (blocks) {
        if (static_cast<int>(blocks->size()) != k)
            throw std::invalid_argument("holder_check: need one block per pattern vertex");
        for (int v = 0; v < k; ++v) {
            B[v] = (*blocks)[v];
            std::sort(B[v].begin(), B[v].end());
            B[v].erase(std::unique(B[v].begin(), B[v].end()), B[v].end());
            for (int i : B[v])
                if (i < 0 || i >= n)
                    throw std::out_of_range("holder_check: block element out of range");
        }
    } else {
        for (auto& b : B) {
            b.resize(n);
            for (int i = 0; i < n; ++i)
                b[i] = i;
        }
    }
    double work = 1.0;
    for (auto& b : B)
        work *= static_cast<double>(b.size());
    check_budget("holder_check", work, budget);

    std::vector<std::vector<std::size_t>> closes(k);
    for (std::size_t e = 0; e < h.edge_count(); ++e)
        closes[h.edge(e).back()].push_back(e);

    const auto dense = u.dense();
    auto code_of = [n](std::span<const int> t) {
        std::size_t c = 0;
        for (int v : t)
            c = c * n + v;
        return c;
    };

    HolderResult res;
    // lhs: product measure over the blocks, normalized by n^k
    {
        std::vector<int> img(k), t(r);
        CompensatedSum acc;
        std::function<void(int, double)> go = [&](int v, double prod) {
            if (v == k) {
                acc += prod;
                return;
            }
            for (int i : B[v]) {
                img[v] = i;
                double q = prod;
                for (auto e : closes[v]) {
                    const auto& edge = h.edge(e);
                    for (int j = 0; j < r; ++j)
                        t[j] = img[edge[j]];
                    q *= dense[code_of(t)];
                }
                if (q != 0.0)
                    go(v + 1, q);
            }
        };
        go(0, 1.0);
        res.lhs = acc.value() / std::pow(static_cast<double>(n), k);
    }

    // integral of U^power over prod_{v in S} B_v, normalized by n^r
    auto edge_integral = [&](const Edge& S, double power) {
        std::vector<int> t(r);
        CompensatedSum acc;
        std::function<void(int)> go = [&](int j) {
            if (j == r) {
                acc += std::pow(dense[code_of(t)], power);
                return;
            }
            for (int i : B[S[j]]) {
                t[j] = i;
                go(j + 1);
            }
        };
        go(0);
        return acc.value() / std::pow(static_cast<double>(n), r);
    };

    const bool same_blocks = std::all_of(B.begin(), B.end(), [&](const auto& b) { return b == B.front(); });
    if (k > 0 && is_complete(h) && same_blocks && k >= r) {
        res.variant = "clique";
        const double power = static_cast<double>(binomial(k - 1, r - 1));
        std::vector<int> S(r);
        for (int j = 0; j < r; ++j)
            S[j] = j;
        res.rhs = std::pow(edge_integral(S, power), static_cast<double>(k) / r);
    } else {
        res.variant = "bounded_degree";
        const double delta = static_cast<double>(std::max(1, max_degree(h)));
        double rhs = 1.0;
        for (const auto& e : h.edges())
            rhs *= std::pow(edge_integral(e, delta), 1.0 / delta);
        res.rhs = rhs;
    }
    res.holds = res.lhs <= res.rhs * (1.0 + 1e-12);
    return res;
}

// entropy lemmas

namespace {

// (1+u) log(1+u) - u, accurate near u = 0.
double phi(double u)
{
    if (u <= -1.0)
        return 1.0;
    if (std::fabs(u) < 1e-3)
        return u * u * (0.5 - u * (1.0 / 6.0 - u * (1.0 / 12.0 - u / 20.0)));
    return (1.0 + u) * std::log1p(u) - u;
}

// I_p(p+x) with the linear terms cancelled analytically; the direct formula
// loses everything to cancellation once x is as small as p^2.
double deviation_entropy(double p, double x)
{
    return p * phi(x / p) + (1.0 - p) * phi(-x / (1.0 - p));
}

} // namespace

EntropyLemmaReport entropy_lemma_checks(const std::vector<double>& p_grid)
{
    EntropyLemmaReport rep;
    auto note = [&](const std::string& what) {
        rep.pass = false;
        if (rep.first_violation.empty())
            rep.first_violation = what;
    };
    for (double p : p_grid) {
        if (!(p > 0.0 && p <= 0.01))
            throw std::domain_error("entropy_lemma_checks: p must lie in (0, 0.01]");
        EntropyLemmaRow row;
        row.p = p;
        auto Ip = [p](double x) { return deviation_entropy(p, std::min(x, 1.0 - p)); }; // I_p(p+x)

        const double xs = p * p;
        row.small_ratio = Ip(xs) / (xs * xs / (2.0 * p));
        row.small_ok = row.small_ratio >= 0.9 && row.small_ratio <= 1.1;
        if (!row.small_ok)
            note("small-deviation ratio at p=" + std::to_string(p) + " x=" + std::to_string(xs) +
                 " ratio=" + std::to_string(row.small_ratio));

        const double xl = std::sqrt(p);
        row.large_ratio = Ip(xl) / (xl * std::log(xl / p));
        row.large_ok = row.large_ratio >= 0.9 && row.large_ratio <= 1.1;
        if (!row.large_ok)
            note("large-deviation ratio at p=" + std::to_string(p) + " x=" + std::to_string(xl) +
                 " ratio=" + std::to_string(row.large_ratio));

        const double L = std::log(1.0 / p);
        const double bmax = 1.0 - p - 1.0 / L;
        row.quadratic_ok = true;
        row.quadratic_min_ratio = std::numeric_limits<double>::infinity();
        for (int j = 1; j <= 20; ++j) {
            const double b = bmax * j / 20.0;
            const double Ib = Ip(b);
            for (int i = 0; i < 20; ++i) {
                const double x = b * i / 19.0;
                const double lhs = Ip(x);
                const double rhs = (x / b) * (x / b) * Ib;
                if (rhs > 0.0)
                    row.quadratic_min_ratio = std::min(row.quadratic_min_ratio, lhs / rhs);
                if (lhs < rhs - 1e-12 * rhs) {
                    if (row.quadratic_ok)
                        note("quadratic comparison at p=" + std::to_string(p) + " x=" + std::to_string(x) +
                             " b=" + std::to_string(b));
                    row.quadratic_ok = false;
                }
            }
        }

        const double anchor = Ip(1.0 - 1.0 / L - p);
        row.log_ok = true;
        row.log_min_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 200; ++i) {
            const double x = (1.0 - p) * i / 200.0;
            const double lhs = Ip(x);
            const double rhs = x * x * anchor;
            if (rhs > 0.0)
                row.log_min_ratio = std::min(row.log_min_ratio, lhs / rhs);
            if (lhs < rhs - 1e-12 * rhs) {
                if (row.log_ok)
                    note("x^2 log comparison at p=" + std::to_string(p) + " x=" + std::to_string(x));
                row.log_ok = false;
            }
        }
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace hyperrate
