#include "hyperrate/varsolve.hpp"

#include "hyperrate/errors.hpp"
#include "hyperrate/hubplan.hpp"
#include "hyperrate/rng.hpp"
#include "hyperrate/summation.hpp"
#include "tuple_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>

namespace hyperrate {

namespace {

void check_density_budget(const Hypergraph& h, const WeightedHypergraph& w, double budget, const char* what)
{
    check_budget(what, std::pow(static_cast<double>(w.vertex_count()), h.vertex_count()), budget);
}

} // namespace

std::vector<double> density_gradient(const Hypergraph& h, const WeightedHypergraph& w, const EvalOptions& opts)
{
    std::vector<double> grad;
    density_with_gradient(h, w, grad, opts);
    return grad;
}

double density_with_gradient(const Hypergraph& h, const WeightedHypergraph& w, std::vector<double>& grad,
                             const EvalOptions& opts)
{
    check_density_budget(h, w, opts.budget, "density_gradient");
    return detail::TupleEngine(h, w).density_and_gradient(grad, opts.threads);
}

double finite_difference_check(const Hypergraph& h, const WeightedHypergraph& w, double step, std::uint64_t seed,
                               int coordinates)
{
    if (!(step > 1e-8 && step < 1e-3))
        throw std::domain_error("finite-difference step must lie in (1e-8, 1e-3)");
    const auto grad = density_gradient(h, w);
    RandomStream rng(seed, 0);
    double worst = 0.0;
    const int count = std::min<int>(coordinates, static_cast<int>(w.size()));
    for (int i = 0; i < count; ++i) {
        const std::size_t e = (count == static_cast<int>(w.size())) ? static_cast<std::size_t>(i) : rng.below(w.size());
        const double x = w.weight(e);
        const double hi = std::min(1.0, x + step);
        const double lo = std::max(0.0, x - step);
        WeightedHypergraph plus = w, minus = w;
        plus.set_weight(e, hi);
        minus.set_weight(e, lo);
        const double numeric = (density(h, plus) - density(h, minus)) / (hi - lo);
        worst = std::max(worst, std::fabs(grad[e] - numeric) / (std::fabs(grad[e]) + 1e-12));
    }
    return worst;
}

// ---- solver ----

namespace {

struct Candidate {
    std::string label;
    WeightedHypergraph w;
    double objective = 0.0;
    double density = 0.0;
};

class Solver {
public:
    explicit Solver(const VariationalInstance& inst)
        : inst_(inst), h_(inst.pattern), opts_(inst.options), edges_(static_cast<int>(inst.pattern.edge_count()))
    {
        if (inst.n < h_.vertex_count())
            throw std::invalid_argument("solve_phi needs n >= |V(H)|");
        if (!(inst.p > 0.0 && inst.p < 1.0))
            throw std::domain_error("solve_phi needs 0 < p < 1");
        if (!(inst.delta > 0.0))
            throw std::domain_error("solve_phi needs delta > 0");
        check_budget("solve_phi", std::pow(static_cast<double>(inst.n), h_.vertex_count()), opts_.budget);
        pe_ = std::pow(inst.p, edges_);
        target_ = (1.0 + inst.delta) * pe_;
        tol_ = 1e-10 * pe_;
        hi_ = 1.0 - 1e-9;
        eval_.budget = opts_.budget;
        eval_.threads = 1;
    }

    VariationalSolution run();

private:
    bool feasible(double t) const { return t >= target_ - tol_; }
    double violation(double t) const { return 1.0 + inst_.delta - t / pe_; }

    double objective(const std::vector<double>& a) const
    {
        CompensatedSum s;
        for (double x : a)
            s += entropy_scalar(x, inst_.p);
        return s.value();
    }

    WeightedHypergraph make(std::vector<double> a) const
    {
        return WeightedHypergraph(inst_.n, h_.uniformity(), inst_.p, std::move(a));
    }

    std::optional<Candidate> planted(const std::string& label, const MixedHubCollection& m, std::uint64_t n) const;
    std::optional<Candidate> smallest_feasible_width(const std::string& label, const LabelTuple& tuple) const;
    std::optional<Candidate> scaled_certificate(const std::string& label, const RateResult& cert) const;

    struct Outcome {
        StartReport report;
        std::optional<Candidate> best_feasible;
        std::vector<double> last;
        double last_density = 0.0;
    };
    Outcome descend(const std::string& label, std::vector<double> a) const;

    const VariationalInstance& inst_;
    const Hypergraph& h_;
    SolverOptions opts_;
    int edges_;
    double pe_ = 0.0, target_ = 0.0, tol_ = 0.0, hi_ = 1.0;
    EvalOptions eval_;
};

std::optional<Candidate> Solver::planted(const std::string& label, const MixedHubCollection& m, std::uint64_t n) const
{
    BlockModel b;
    try {
        b = plant(h_, m, n, inst_.p);
    } catch (const DegenerateWidth&) {
        return std::nullopt;
    }
    if (b.class_count() > 8)
        return std::nullopt;
    const double t = density_blockwise(h_, b, eval_);
    if (!feasible(t))
        return std::nullopt;
    auto w = b.materialize();
    // clamp to the solver's box so warm starts are admissible points
    std::vector<double> a(w.weights().begin(), w.weights().end());
    for (auto& x : a)
        x = std::min(x, hi_);
    auto wa = make(std::move(a));
    const double td = density(h_, wa, eval_);
    if (!feasible(td))
        return std::nullopt;
    return Candidate{label, wa, relative_entropy(wa), td};
}

std::optional<Candidate> Solver::smallest_feasible_width(const std::string& label, const LabelTuple& tuple) const
{
    // width w realized exactly: c(t) = w / (p^{t Delta} n)
    const int delta = max_degree(h_);
    const auto tuples = permutation_closure({tuple});
    std::set<Rational> values;
    for (const auto& x : tuple)
        if (x != 0)
            values.insert(x);
    for (int width = 1; width <= inst_.n; ++width) {
        WidthMap c;
        for (const auto& t : values)
            c[t] = width / (std::pow(inst_.p, to_double(t) * delta) * inst_.n);
        if (auto cand = planted(label, MixedHubCollection(h_.uniformity(), tuples, c), inst_.n))
            return cand;
    }
    return std::nullopt;
}

std::optional<Candidate> Solver::scaled_certificate(const std::string& label, const RateResult& cert) const
{
    std::vector<LabelTuple> tuples;
    WidthMap c;
    for (const auto& [t, w] : cert.certificate)
        if (w > 0.0)
            c[t] = w;
    if (c.empty())
        return std::nullopt;
    // tuples of the pattern's own labelings whose values are all active
    const auto gamma = enumerate_stable_labelings(h_);
    for (const auto& t : tuples_from_labelings(h_, gamma))
        if (std::all_of(t.begin(), t.end(), [&](const Rational& x) { return x == 0 || c.count(x); }))
            tuples.push_back(t);
    if (tuples.empty())
        return std::nullopt;
    std::optional<Candidate> best;
    std::set<std::map<Rational, std::uint64_t>> seen;
    for (double s = 1e-3; s < 1e6; s *= 1.05) {
        WidthMap cs;
        for (const auto& [t, w] : c)
            cs[t] = w * std::pow(s, to_double(t));
        MixedHubCollection m(h_.uniformity(), tuples, cs);
        std::map<Rational, std::uint64_t> widths;
        try {
            widths = plant_widths(h_, m, inst_.n, inst_.p);
        } catch (const DegenerateWidth&) {
            bool too_wide = false;
            for (const auto& [t, w] : cs)
                too_wide = too_wide || w * std::pow(inst_.p, to_double(t) * max_degree(h_)) * inst_.n > inst_.n + 0.5;
            if (too_wide)
                break;
            continue;
        }
        if (!seen.insert(widths).second)
            continue;
        if (auto cand = planted(label, m, inst_.n))
            return cand;
    }
    return best;
}

Solver::Outcome Solver::descend(const std::string& label, std::vector<double> a) const
{
    const double p = inst_.p;
    for (auto& x : a)
        x = std::clamp(x, p, hi_);
    Outcome out;
    out.report.label = label;

    std::vector<double> gt;
    auto density_grad = [&](const std::vector<double>& z) {
        return detail::TupleEngine(h_, make(z)).density_and_gradient(gt, 1);
    };
    auto density_only = [&](const std::vector<double>& z) { return detail::TupleEngine(h_, make(z)).density(1); };

    double t = density_grad(a);
    double obj = objective(a);
    out.report.initial_objective = obj;
    out.report.initial_feasible = feasible(t);
    auto consider = [&](const std::vector<double>& z, double tz, double oz) {
        if (feasible(tz) && (!out.best_feasible || oz < out.best_feasible->objective))
            out.best_feasible = Candidate{label, make(z), oz, tz};
    };
    consider(a, t, obj);

    double mult = 0.0, mu = opts_.initial_penalty;
    const std::size_t d = a.size();
    std::vector<double> grad(d), trial(d);
    double step = -1.0;
    for (int outer = 0; outer < opts_.outer_iterations; ++outer) {
        const double round_start = obj;
        auto lagr = [&](double oz, double tz) {
            const double s = std::max(0.0, mult + mu * violation(tz));
            return oz + (s * s - mult * mult) / (2.0 * mu);
        };
        auto gradient = [&]() {
            const double s = std::max(0.0, mult + mu * violation(t));
            for (std::size_t i = 0; i < d; ++i) {
                const double x = a[i];
                grad[i] = std::log(x / p) - std::log((1.0 - x) / (1.0 - p)) - s * gt[i] / pe_;
            }
        };
        double f = lagr(obj, t);
        gradient();
        if (step < 0.0) {
            double gmax = 0.0;
            for (double g : grad)
                gmax = std::max(gmax, std::fabs(g));
            step = gmax > 0.0 ? 0.1 / gmax : 1.0;
        }
        for (int it = 0; it < opts_.inner_iterations; ++it) {
            bool moved = false;
            for (int bt = 0; bt < 40; ++bt) {
                double dec = 0.0;
                bool changed = false;
                for (std::size_t i = 0; i < d; ++i) {
                    trial[i] = std::clamp(a[i] - step * grad[i], p, hi_);
                    dec += grad[i] * (a[i] - trial[i]);
                    changed = changed || trial[i] != a[i];
                }
                if (!changed)
                    break;
                const double tt = density_only(trial);
                const double ot = objective(trial);
                if (lagr(ot, tt) <= f - 1e-4 * dec) {
                    a = trial;
                    obj = ot;
                    consider(a, tt, ot);
                    step *= 1.5;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved)
                break;
            t = density_grad(a);
            const double f_new = lagr(obj, t);
            const bool stalled = f - f_new <= 1e-10 * std::max(1.0, std::fabs(f));
            f = f_new;
            gradient();
            if (stalled)
                break;
        }
        out.report.violation_trace.push_back(std::max(0.0, violation(t)));
        const bool settled = violation(t) <= 1e-10 && std::fabs(obj - round_start) <= 1e-9 * std::max(1.0, obj);
        if (settled)
            break;
        mult = std::max(0.0, mult + mu * violation(t));
        mu *= opts_.penalty_growth;
    }
    out.report.final_objective = obj;
    out.report.final_feasible = feasible(t);
    out.last = std::move(a);
    out.last_density = t;
    return out;
}

VariationalSolution Solver::run()
{
    const int r = h_.uniformity();
    const int n = inst_.n;
    {
        const WeightedHypergraph ones(n, r, inst_.p, 1.0);
        if (!feasible(density(h_, ones, eval_)))
            throw NoFeasiblePoint("even the complete weighting misses the density target");
    }

    std::vector<Candidate> planted_points;
    std::vector<std::pair<std::string, std::vector<double>>> starts;
    starts.emplace_back("constant", std::vector<double>(SubsetIndexer(n, r).size(), inst_.p));

    LabelTuple hub(r, Rational(0));
    hub[0] = 1;
    if (auto c = smallest_feasible_width("hub", hub))
        planted_points.push_back(std::move(*c));
    if (n >= r) {
        LabelTuple clique(r, Rational(1, r));
        if (auto c = smallest_feasible_width("clique", clique))
            planted_points.push_back(std::move(*c));
    }
    try {
        RateOptions ro;
        ro.threads = 1;
        ro.seed = opts_.seed;
        const auto cert = rho(h_, inst_.delta, ro);
        if (auto c = scaled_certificate("rate-certificate", cert))
            planted_points.push_back(std::move(*c));
    } catch (const NoFeasiblePoint&) {
    }
    if (planted_points.empty())
        throw NoFeasiblePoint("no planted construction meets the density target");

    auto best_planted = std::min_element(planted_points.begin(), planted_points.end(),
                                         [](const Candidate& x, const Candidate& y) { return x.objective < y.objective; });
    for (const auto& c : planted_points) {
        std::vector<double> a(c.w.weights().begin(), c.w.weights().end());
        const bool duplicate = std::any_of(starts.begin(), starts.end(), [&](const auto& s) { return s.second == a; });
        if (!duplicate)
            starts.emplace_back(c.label, std::move(a));
    }
    for (int i = 0; i < opts_.restarts; ++i) {
        RandomStream rng(opts_.seed, 1000 + static_cast<std::uint64_t>(i));
        std::vector<double> a(best_planted->w.weights().begin(), best_planted->w.weights().end());
        for (auto& x : a)
            x += rng.uniform(-opts_.perturbation, opts_.perturbation);
        starts.emplace_back("perturbed-" + std::to_string(i), std::move(a));
    }

    std::vector<Outcome> outcomes(starts.size());
    parallel_for(starts.size(), opts_.threads,
                 [&](std::size_t i) { outcomes[i] = descend(starts[i].first, starts[i].second); });

    std::optional<Candidate> best;
    auto offer = [&](const Candidate& c) {
        if (!best || c.objective < best->objective)
            best = c;
    };
    for (const auto& c : planted_points)
        offer(c);
    for (auto& o : outcomes) {
        if (o.best_feasible)
            offer(*o.best_feasible);
        // marginally infeasible end point: walk toward the best planted point
        if (!o.report.final_feasible && objective(o.last) < best->objective) {
            const auto& anchor = best_planted->w.weights();
            double lo = 0.0, hi = 1.0;
            std::vector<double> z(o.last.size());
            auto mix = [&](double theta) {
                for (std::size_t i = 0; i < z.size(); ++i)
                    z[i] = (1.0 - theta) * o.last[i] + theta * anchor[i];
            };
            for (int it = 0; it < 50; ++it) {
                const double mid = 0.5 * (lo + hi);
                mix(mid);
                (feasible(density(h_, make(z), eval_)) ? hi : lo) = mid;
            }
            mix(hi);
            const double tz = density(h_, make(z), eval_);
            if (feasible(tz))
                offer(Candidate{o.report.label + "+projected", make(z), objective(z), tz});
        }
    }

    VariationalSolution sol;
    sol.W = best->w;
    sol.objective = best->objective;
    sol.constraint_value = best->density;
    sol.target = target_;
    sol.feasible = feasible(best->density);
    sol.source = best->label;
    sol.best_planted_objective = best_planted->objective;
    const double scale = std::pow(static_cast<double>(n), r) * std::pow(inst_.p, max_degree(h_)) * std::log(1.0 / inst_.p);
    sol.normalized_rate = sol.objective / scale;
    for (auto& o : outcomes)
        sol.starts.push_back(std::move(o.report));
    return sol;
}

} // namespace

VariationalSolution solve_phi(const VariationalInstance& inst) { return Solver(inst).run(); }

// ---- tensor files ----

namespace {

template <typename T>
void put_le(std::ostream& out, T value)
{
    auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bits.begin(), bits.end());
    out.write(reinterpret_cast<const char*>(bits.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in)
{
    std::array<unsigned char, sizeof(T)> bits{};
    if (!in.read(reinterpret_cast<char*>(bits.data()), sizeof(T)))
        throw std::ios_base::failure("truncated tensor file");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bits.begin(), bits.end());
    return std::bit_cast<T>(bits);
}

} // namespace

void write_tensor(const WeightedHypergraph& w, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::ios_base::failure("cannot write tensor file " + path.string());
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(w.vertex_count()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(w.uniformity()));
    put_le<std::uint64_t>(out, w.size());
    for (double x : w.weights())
        put_le<double>(out, x);
}

WeightedHypergraph read_tensor(const std::filesystem::path& path, double base_p)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open tensor file " + path.string());
    const auto n = get_le<std::uint64_t>(in);
    const auto r = get_le<std::uint64_t>(in);
    const auto count = get_le<std::uint64_t>(in);
    std::vector<double> w(count);
    for (auto& x : w)
        x = get_le<double>(in);
    return WeightedHypergraph(static_cast<int>(n), static_cast<int>(r), base_p, std::move(w));
}

} // namespace hyperrate
