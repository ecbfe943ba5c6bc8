#include "hyperrate/hubplan.hpp"

#include "hyperrate/errors.hpp"
#include "hyperrate/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hyperrate {

std::vector<LabelTuple> permutation_closure(std::vector<LabelTuple> tuples)
{
    std::set<LabelTuple> out;
    for (auto t : tuples) {
        std::sort(t.begin(), t.end());
        do
            out.insert(t);
        while (std::next_permutation(t.begin(), t.end()));
    }
    return {out.begin(), out.end()};
}

MixedHubCollection::MixedHubCollection(int r, std::vector<LabelTuple> tuples, WidthMap c)
    : r_(r), tuples_(std::move(tuples)), c_(std::move(c))
{
    std::sort(tuples_.begin(), tuples_.end());
    tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
    for (const auto& t : tuples_) {
        if (static_cast<int>(t.size()) != r)
            throw std::invalid_argument("tuple length differs from uniformity");
        Rational s = 0;
        for (const auto& x : t) {
            if (x < 0)
                throw std::invalid_argument("negative label value in tuple");
            s += x;
        }
        if (s != 1)
            throw std::invalid_argument("tuple does not sum to 1");
    }
    if (permutation_closure(tuples_) != tuples_)
        throw std::invalid_argument("tuple set is not closed under permutation");
    if (auto it = c_.find(Rational(0)); it != c_.end()) {
        if (it->second != 1.0)
            throw std::invalid_argument("c(0) must equal 1");
        c_.erase(it);
    }
    for (const auto& [t, w] : c_)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("width for " + hyperrate::to_string(t) + " must be finite and nonnegative");
    for (const auto& t : values())
        if (!c_.count(t))
            throw std::invalid_argument("no width given for value " + hyperrate::to_string(t));
}

double MixedHubCollection::c(const Rational& t) const
{
    if (t == 0)
        return 1.0;
    auto it = c_.find(t);
    return it == c_.end() ? 0.0 : it->second;
}

std::vector<Rational> MixedHubCollection::values() const
{
    std::set<Rational> vs;
    for (const auto& t : tuples_)
        for (const auto& x : t)
            if (x != 0)
                vs.insert(x);
    return {vs.begin(), vs.end()};
}

bool MixedHubCollection::active(const LabelTuple& t) const
{
    return std::all_of(t.begin(), t.end(), [&](const Rational& x) { return x == 0 || c(x) > 0.0; });
}

std::vector<LabelTuple> tuples_from_labelings(const Hypergraph& h, const std::vector<Labeling>& gamma)
{
    if (gamma.empty())
        throw std::invalid_argument("tuples_from_labelings needs at least one labeling");
    std::vector<LabelTuple> raw;
    for (const auto& f : gamma)
        for (const auto& e : h.edges()) {
            LabelTuple t;
            Rational s = 0;
            for (int v : e) {
                t.push_back(f.values[v]);
                s += f.values[v];
            }
            if (s != 0)
                raw.push_back(std::move(t));
        }
    return permutation_closure(std::move(raw));
}

double volume(const MixedHubCollection& m)
{
    double total = 0.0;
    for (const auto& t : m.tuples()) {
        double prod = 1.0;
        for (const auto& x : t)
            prod *= m.c(x);
        total += prod;
    }
    return total;
}

std::vector<Labeling> respecting_labelings(const Hypergraph& h, const std::vector<Labeling>& gamma,
                                           const std::vector<LabelTuple>& tuples)
{
    std::vector<Labeling> out;
    for (const auto& f : gamma) {
        bool ok = true;
        for (const auto& e : h.edges()) {
            LabelTuple t;
            Rational s = 0;
            for (int v : e) {
                t.push_back(f.values[v]);
                s += f.values[v];
            }
            if (s != 0 && !std::binary_search(tuples.begin(), tuples.end(), t)) {
                ok = false;
                break;
            }
        }
        if (ok)
            out.push_back(f);
    }
    return out;
}

double p_value(const Hypergraph& h, const std::vector<Labeling>& gamma, const MixedHubCollection& m)
{
    double total = 0.0;
    for (const auto& f : respecting_labelings(h, gamma, m.tuples())) {
        double prod = 1.0;
        for (const auto& x : f.values)
            prod *= m.c(x);
        total += prod;
    }
    return total;
}

double Posynomial::operator()(const std::vector<double>& c) const
{
    double total = 0.0;
    for (const auto& term : terms) {
        double prod = static_cast<double>(term.coefficient);
        for (std::size_t i = 0; i < variables.size(); ++i)
            if (term.exponents[i])
                prod *= std::pow(c[i], term.exponents[i]);
        total += prod;
    }
    return total;
}

std::string Posynomial::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (const auto& term : terms) {
        if (!first)
            os << " + ";
        first = false;
        bool constant = true;
        std::ostringstream mono;
        for (std::size_t i = 0; i < variables.size(); ++i) {
            if (!term.exponents[i])
                continue;
            if (!constant)
                mono << '*';
            constant = false;
            mono << "c[" << hyperrate::to_string(variables[i]) << ']';
            if (term.exponents[i] > 1)
                mono << '^' << term.exponents[i];
        }
        if (constant)
            os << term.coefficient;
        else if (term.coefficient == 1)
            os << mono.str();
        else
            os << term.coefficient << '*' << mono.str();
    }
    return first ? "0" : os.str();
}

namespace {

std::vector<Rational> values_of(const std::vector<LabelTuple>& tuples)
{
    std::set<Rational> vs;
    for (const auto& t : tuples)
        for (const auto& x : t)
            if (x != 0)
                vs.insert(x);
    return {vs.begin(), vs.end()};
}

template <typename Range>
std::vector<int> exponents_of(const std::vector<Rational>& vars, const Range& values)
{
    std::vector<int> e(vars.size(), 0);
    for (const auto& x : values) {
        if (x == 0)
            continue;
        auto it = std::lower_bound(vars.begin(), vars.end(), x);
        if (it == vars.end() || *it != x)
            throw std::logic_error("value missing from posynomial variables");
        ++e[it - vars.begin()];
    }
    return e;
}

Posynomial merged(std::vector<Rational> vars, std::vector<std::vector<int>> monomials)
{
    std::sort(monomials.begin(), monomials.end(), [](const auto& a, const auto& b) {
        const int da = std::accumulate(a.begin(), a.end(), 0);
        const int db = std::accumulate(b.begin(), b.end(), 0);
        return da != db ? da < db : a > b;
    });
    Posynomial poly{std::move(vars), {}};
    for (auto& m : monomials) {
        if (!poly.terms.empty() && poly.terms.back().exponents == m)
            ++poly.terms.back().coefficient;
        else
            poly.terms.push_back({1, std::move(m)});
    }
    return poly;
}

} // namespace

Posynomial volume_polynomial(const std::vector<LabelTuple>& tuples)
{
    auto vars = values_of(tuples);
    std::vector<std::vector<int>> monos;
    for (const auto& t : tuples)
        monos.push_back(exponents_of(vars, t));
    return merged(std::move(vars), std::move(monos));
}

Posynomial p_polynomial(const Hypergraph& h, const std::vector<Labeling>& gamma, const std::vector<LabelTuple>& tuples)
{
    auto vars = values_of(tuples);
    std::vector<std::vector<int>> monos;
    for (const auto& f : respecting_labelings(h, gamma, tuples))
        monos.push_back(exponents_of(vars, f.values));
    return merged(std::move(vars), std::move(monos));
}

std::string to_string(RateMethod m)
{
    switch (m) {
    case RateMethod::closed_form:
        return "closed_form";
    case RateMethod::optimizer:
        return "optimizer";
    case RateMethod::single_labeling_scan:
        return "single_labeling_scan";
    }
    return "unknown";
}

// ---- rate optimization ----

RateProblem::RateProblem(const Hypergraph& h, const RateOptions& opts) : h_(h), opts_(opts) { build(std::nullopt); }

RateProblem::RateProblem(const Hypergraph& h, const std::vector<Rational>& allowed_values, const RateOptions& opts)
    : h_(h), opts_(opts)
{
    build(allowed_values);
}

void RateProblem::build(const std::optional<std::vector<Rational>>& allowed)
{
    gamma_ = enumerate_stable_labelings(h_, opts_.labeling);
    tuples_ = tuples_from_labelings(h_, gamma_);
    if (allowed) {
        std::set<Rational> ok(allowed->begin(), allowed->end());
        ok.insert(Rational(0));
        std::erase_if(tuples_, [&](const LabelTuple& t) {
            return std::any_of(t.begin(), t.end(), [&](const Rational& x) { return !ok.count(x); });
        });
    }
    vol_ = volume_polynomial(tuples_);
    p_ = p_polynomial(h_, gamma_, tuples_);
    p_.variables = vol_.variables; // both derive from the same tuple set

    std::set<std::vector<bool>> supports;
    for (const auto& term : p_.terms) {
        std::vector<bool> s(p_.variables.size());
        bool any = false;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (term.exponents[i]) {
                s[i] = true;
                any = true;
            }
        if (any)
            supports.insert(std::move(s));
    }
    supports_.assign(supports.begin(), supports.end());
}

namespace {

// Degree of a monomial under the scaling c_t -> s^t c_t.
double scaled_degree(const Posynomial& poly, const Posynomial::Term& term)
{
    double d = 0.0;
    for (std::size_t i = 0; i < poly.variables.size(); ++i)
        d += term.exponents[i] * to_double(poly.variables[i]);
    return d;
}

// Smallest root of an increasing function crossing `target`, found by
// bisection in log space.
template <typename F>
double solve_increasing(F&& g, double target)
{
    double lo = 1.0, hi = 1.0;
    while (g(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300)
            throw NoFeasiblePoint("constraint cannot be met");
    }
    if (lo == hi) {
        lo = 0.5;
        while (g(lo) >= target && lo > 1e-300)
            lo *= 0.5;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (mid <= lo || mid >= hi)
            break;
        (g(mid) < target ? lo : hi) = mid;
    }
    return hi;
}

} // namespace

bool RateProblem::project(std::vector<double>& c, double delta) const
{
    const std::size_t d = c.size();
    bool live = false;
    for (const auto& term : p_.terms) {
        bool ok = scaled_degree(p_, term) > 0.0;
        for (std::size_t i = 0; i < d && ok; ++i)
            if (term.exponents[i] && c[i] <= 0.0)
                ok = false;
        live = live || ok;
    }
    if (!live)
        return false;
    auto scaled = [&](double s) {
        std::vector<double> cs(d);
        for (std::size_t i = 0; i < d; ++i)
            cs[i] = c[i] * std::pow(s, to_double(p_.variables[i]));
        return cs;
    };
    const double s = solve_increasing([&](double x) { return p_(scaled(x)); }, 1.0 + delta);
    c = scaled(s);
    return true;
}

RateResult RateProblem::make_result(const std::vector<double>& c, RateMethod method) const
{
    RateResult res;
    res.method = method;
    for (std::size_t i = 0; i < c.size(); ++i)
        res.certificate[p_.variables[i]] = c[i];
    res.volume = vol_(c);
    res.p_value = p_(c);
    res.value = res.volume;
    return res;
}

RateResult RateProblem::scan(double delta) const
{
    if (!(delta > 0.0))
        throw std::domain_error("delta must be positive");
    if (supports_.empty())
        throw NoFeasiblePoint("no nonzero stable labeling respects the tuple set");
    const std::size_t d = p_.variables.size();
    std::optional<RateResult> best;
    std::size_t best_active = 0;
    for (const auto& support : supports_) {
        // c_t = lambda^t on the support; Vol is then linear in lambda
        auto widths = [&](double lambda) {
            std::vector<double> c(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
                if (support[i])
                    c[i] = std::pow(lambda, to_double(p_.variables[i]));
            return c;
        };
        const double lambda = solve_increasing([&](double x) { return p_(widths(x)); }, 1.0 + delta);
        auto res = make_result(widths(lambda), RateMethod::single_labeling_scan);
        const auto active = static_cast<std::size_t>(std::count(support.begin(), support.end(), true));
        if (!best || res.value < best->value * (1.0 - 1e-12) ||
            (res.value <= best->value * (1.0 + 1e-12) && active < best_active)) {
            best = std::move(res);
            best_active = active;
        }
    }
    return *best;
}

RateResult RateProblem::polish(double delta) const
{
    const std::size_t d = p_.variables.size();
    const double target = std::log1p(delta);
    constexpr double kFloor = -40.0, kCeil = 12.0;

    auto eval = [&](const Posynomial& poly, const std::vector<double>& y, std::vector<double>* grad) {
        double total = 0.0;
        if (grad)
            grad->assign(d, 0.0);
        for (const auto& term : poly.terms) {
            double ex = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                ex += term.exponents[i] * y[i];
            const double v = static_cast<double>(term.coefficient) * std::exp(ex);
            total += v;
            if (grad)
                for (std::size_t i = 0; i < d; ++i)
                    (*grad)[i] += term.exponents[i] * v;
        }
        return total;
    };

    // augmented Lagrangian for log P(y) - log(1 + delta) >= 0
    auto run = [&](std::vector<double> y) {
        double mult = 0.0, mu = 1.0;
        std::vector<double> gv, gp;
        auto lagrangian = [&](const std::vector<double>& z, std::vector<double>* grad) {
            const double v = eval(vol_, z, grad ? &gv : nullptr);
            const double pv = eval(p_, z, grad ? &gp : nullptr);
            const double g = std::log(pv) - target;
            const double shifted = std::max(0.0, mult - mu * g);
            if (grad) {
                grad->assign(d, 0.0);
                for (std::size_t i = 0; i < d; ++i)
                    (*grad)[i] = gv[i] - shifted * gp[i] / pv;
            }
            return v + (shifted * shifted - mult * mult) / (2.0 * mu);
        };
        std::vector<double> grad, trial(d);
        for (int outer = 0; outer < 8; ++outer) {
            double step = 1.0;
            double f = lagrangian(y, &grad);
            for (int it = 0; it < opts_.iterations; ++it) {
                double gnorm = 0.0;
                for (double g : grad)
                    gnorm += g * g;
                if (gnorm < 1e-24)
                    break;
                bool moved = false;
                for (int bt = 0; bt < 60; ++bt) {
                    double dec = 0.0;
                    for (std::size_t i = 0; i < d; ++i) {
                        trial[i] = std::clamp(y[i] - step * grad[i], kFloor, kCeil);
                        dec += grad[i] * (y[i] - trial[i]);
                    }
                    const double ft = lagrangian(trial, nullptr);
                    if (ft <= f - 1e-4 * dec) {
                        y = trial;
                        f = lagrangian(y, &grad);
                        step *= 2.0;
                        moved = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!moved)
                    break;
            }
            const double g = std::log(eval(p_, y, nullptr)) - target;
            mult = std::max(0.0, mult - mu * g);
            mu *= 10.0;
        }
        std::vector<double> c(d);
        for (std::size_t i = 0; i < d; ++i)
            c[i] = (y[i] <= kFloor + 1.0) ? 0.0 : std::exp(y[i]);
        return c;
    };

    const auto seed_result = scan(delta);
    std::vector<std::optional<RateResult>> results(static_cast<std::size_t>(opts_.starts));
    parallel_for(results.size(), opts_.threads, [&](std::size_t s) {
        std::vector<double> y(d);
        if (s == 0) {
            for (std::size_t i = 0; i < d; ++i) {
                const double c = seed_result.certificate.at(p_.variables[i]);
                y[i] = c > 0.0 ? std::log(c) : kFloor;
            }
        } else {
            RandomStream rng(opts_.seed, s);
            for (auto& v : y)
                v = rng.uniform(-4.0, 2.0);
        }
        auto c = run(std::move(y));
        if (!project(c, delta))
            return;
        // drop negligible widths when that does not cost anything
        for (std::size_t i = 0; i < d; ++i) {
            if (c[i] <= 0.0)
                continue;
            auto trimmed = c;
            trimmed[i] = 0.0;
            if (project(trimmed, delta) && vol_(trimmed) <= vol_(c) * (1.0 + 1e-12))
                c = std::move(trimmed);
        }
        results[s] = make_result(c, RateMethod::optimizer);
    });
    std::optional<RateResult> best;
    for (auto& r : results)
        if (r && (!best || r->value < best->value))
            best = std::move(r);
    if (!best)
        throw NoFeasiblePoint("optimizer found no feasible width function");
    return *best;
}

RateResult RateProblem::solve(double delta) const
{
    auto scanned = scan(delta);
    if (opts_.starts <= 0)
        return scanned;
    auto polished = polish(delta);
    return polished.value < scanned.value * (1.0 - 1e-12) ? polished : scanned;
}

RateResult rho(const Hypergraph& h, double delta, const RateOptions& opts)
{
    return RateProblem(h, opts).solve(delta);
}

RateResult rho_restricted(const Hypergraph& h, double delta, const std::vector<Rational>& allowed_values,
                          const RateOptions& opts)
{
    return RateProblem(h, allowed_values, opts).solve(delta);
}

// ---- closed forms ----

std::vector<std::uint64_t> independence_polynomial(const Hypergraph& h2)
{
    if (h2.uniformity() != 2)
        throw std::invalid_argument("independence_polynomial needs a 2-graph");
    const int delta = max_degree(h2);
    std::vector<int> top;
    for (int v = 0; v < h2.vertex_count(); ++v)
        if (h2.degree(v) == delta)
            top.push_back(v);
    const int m = static_cast<int>(top.size());
    if (m > 30)
        throw SizeLimitExceeded("independence_polynomial supports at most 30 maximum-degree vertices");
    std::vector<std::uint32_t> adj(m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j && h2.has_edge(std::vector<int>{top[i], top[j]}))
                adj[i] |= 1u << j;
    std::vector<std::uint64_t> out(m + 1, 0);
    for (std::uint64_t set = 0; set < (std::uint64_t{1} << m); ++set) {
        bool ok = true;
        for (int i = 0; i < m && ok; ++i)
            if ((set >> i & 1u) && (adj[i] & set))
                ok = false;
        if (ok)
            ++out[std::popcount(set)];
    }
    while (out.size() > 1 && out.back() == 0)
        out.pop_back();
    return out;
}

double closed_form_rho(const ClosedFormKind& kind, double delta)
{
    if (!(delta > 0.0))
        throw std::domain_error("delta must be positive");
    switch (kind.family) {
    case ClosedFormKind::Family::clique:
        if (kind.k <= kind.r || kind.r < 2)
            throw std::domain_error("clique closed form needs k > r >= 2");
        return std::min(std::pow(delta, static_cast<double>(kind.r) / kind.k), kind.r * delta / kind.k);
    case ClosedFormKind::Family::special3:
        return std::min(std::sqrt(9.0 + 3.0 * delta) - 3.0, std::sqrt(delta));
    case ClosedFormKind::Family::twograph: {
        const auto& g = kind.graph;
        if (g.uniformity() != 2 || !is_connected(g) || max_degree(g) < 2)
            throw std::domain_error("2-graph closed form needs a connected 2-graph with maximum degree >= 2");
        const auto a = independence_polynomial(g);
        auto poly = [&](double theta) {
            double s = 0.0, pw = 1.0;
            for (auto coef : a) {
                s += static_cast<double>(coef) * pw;
                pw *= theta;
            }
            return s;
        };
        const double theta = solve_increasing(poly, 1.0 + delta);
        double value = 2.0 * theta;
        if (is_regular(g))
            value = std::min(value, std::pow(delta, 2.0 / g.vertex_count()));
        return value;
    }
    }
    throw std::domain_error("unknown closed-form family");
}

std::optional<ClosedFormKind> classify(const Hypergraph& h)
{
    if (is_complete(h) && h.vertex_count() > h.uniformity())
        return ClosedFormKind::clique(h.vertex_count(), h.uniformity());
    if (h.uniformity() == 3 && h.vertex_count() == 6 && h.edge_count() == 4) {
        const auto target = instances::alternating_octahedron();
        std::vector<int> perm(6);
        std::iota(perm.begin(), perm.end(), 0);
        do
            if (h.relabeled(perm) == target)
                return ClosedFormKind::special3();
        while (std::next_permutation(perm.begin(), perm.end()));
    }
    if (h.uniformity() == 2 && is_connected(h) && max_degree(h) >= 2)
        return ClosedFormKind::twograph(h);
    return std::nullopt;
}

// ---- planting ----

std::map<Rational, std::uint64_t> plant_widths(const Hypergraph& h, const MixedHubCollection& m, std::uint64_t n,
                                               double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("plant: p must lie in (0,1)");
    const int delta = max_degree(h);
    std::set<Rational> used;
    for (const auto& t : m.tuples())
        if (m.active(t))
            for (const auto& x : t)
                if (x != 0)
                    used.insert(x);
    std::map<Rational, std::uint64_t> out;
    for (const auto& t : used) {
        const double raw = m.c(t) * std::pow(p, to_double(t) * delta) * static_cast<double>(n);
        const double rounded = std::floor(raw + 0.5);
        if (rounded < 1.0 || rounded > static_cast<double>(n)) {
            std::ostringstream os;
            os << "prefix width for value " << hyperrate::to_string(t) << " is " << raw << ", outside [1, " << n << "]";
            throw DegenerateWidth(os.str());
        }
        out[t] = static_cast<std::uint64_t>(rounded);
    }
    return out;
}

WidthMap effective_widths(const Hypergraph& h, const MixedHubCollection& m, std::uint64_t n, double p)
{
    const int delta = max_degree(h);
    WidthMap out;
    for (const auto& t : m.values())
        out[t] = 0.0;
    for (const auto& [t, w] : plant_widths(h, m, n, p))
        out[t] = static_cast<double>(w) / (std::pow(p, to_double(t) * delta) * static_cast<double>(n));
    return out;
}

BlockModel plant(const Hypergraph& h, const MixedHubCollection& m, std::uint64_t n, double p)
{
    if (m.uniformity() != h.uniformity())
        throw std::invalid_argument("collection and pattern have different uniformity");
    const auto widths = plant_widths(h, m, n, p);
    std::set<std::uint64_t> cuts;
    for (const auto& [t, w] : widths)
        cuts.insert(w);
    cuts.insert(n);
    std::vector<std::uint64_t> sizes, upper;
    std::uint64_t prev = 0;
    for (auto c : cuts) {
        sizes.push_back(c - prev);
        upper.push_back(c);
        prev = c;
    }
    const int r = h.uniformity();
    BlockModel model(r, p, sizes);
    auto width_of = [&](const Rational& t) { return t == 0 ? n : widths.at(t); };
    const auto& ms = model.multisets();
    for (std::size_t rank = 0; rank < ms.size(); ++rank) {
        const auto classes = ms.unrank(rank);
        // S is permutation closed, so matching classes in sorted order
        // against every ordered tuple covers all assignments
        bool hit = false;
        for (const auto& t : m.tuples()) {
            if (!m.active(t))
                continue;
            bool fits = true;
            for (int i = 0; i < r && fits; ++i)
                fits = upper[classes[i]] <= width_of(t[i]);
            if (fits) {
                hit = true;
                break;
            }
        }
        if (hit)
            model.set_weight(classes, 1.0);
    }
    return model;
}

} // namespace hyperrate
