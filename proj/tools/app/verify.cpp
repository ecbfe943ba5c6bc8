#include "app.hpp"

#include "hyperrate/analysis.hpp"
#include "hyperrate/hubplan.hpp"
#include "hyperrate/labelings.hpp"
#include "hyperrate/rng.hpp"
#include "hyperrate/simulate.hpp"
#include "hyperrate/varsolve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace hyperrate::app {

using json = nlohmann::ordered_json;

namespace {

class Runner {
public:
    explicit Runner(VerifyReport& rep) : rep_(rep) {}

    // body fills expected/observed/tolerance/pass; exceptions count as failures
    void run(const std::string& name, const std::function<void(Check&)>& body)
    {
        Check c;
        c.name = name;
        auto t0 = std::chrono::steady_clock::now();
        try {
            body(c);
        } catch (const std::exception& e) {
            c.pass = false;
            c.note = std::string("exception: ") + e.what();
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep_.pass = rep_.pass && c.pass;
        rep_.checks.push_back(std::move(c));
    }

private:
    VerifyReport& rep_;
};

std::string join(const std::vector<Rational>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + to_string(v[i]);
    return s;
}

std::vector<double> grid(double lo, double hi, int points)
{
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i)
        out[i] = lo + (hi - lo) * i / (points - 1);
    return out;
}

std::set<Labeling> clique_expectation(int k, int r)
{
    std::set<Labeling> out;
    out.insert(Labeling{std::vector<Rational>(k, Rational(0))});
    for (int v = 0; v < k; ++v) {
        std::vector<Rational> x(k, Rational(0));
        x[v] = 1;
        out.insert(Labeling{x});
    }
    out.insert(Labeling{std::vector<Rational>(k, Rational(1, r))});
    return out;
}

} // namespace

VerifyReport verify_all(VerifyMode mode, const std::filesystem::path& data_dir, std::uint64_t seed)
{
    VerifyReport rep;
    rep.mode = mode == VerifyMode::quick ? "quick" : "full";
    rep.seed = seed;
    const bool full = mode == VerifyMode::full;

    // Read everything up front so a broken bundle is an IO failure, not a
    // failed check.
    std::map<std::string, Hypergraph> g;
    for (const char* name : {"k4r3", "k5r3", "k5r4", "k4r2", "k3", "c4", "special3", "counterexample", "edge2", "p3"})
        g[name] = read_hypergraph(data_dir / (std::string(name) + ".json"));

    Runner run(rep);

    // 1. stable labelings of cliques
    for (auto [name, k, r] : std::vector<std::tuple<std::string, int, int>>{
             {"k4r3", 4, 3}, {"k5r3", 5, 3}, {"k5r4", 5, 4}, {"k4r2", 4, 2}}) {
        run.run("labelings." + name, [&, k = k, r = r, name = name](Check& c) {
            auto ls = enumerate_stable_labelings(g.at(name));
            std::set<Labeling> got(ls.begin(), ls.end());
            c.expected = k + 2;
            c.observed = ls.size();
            c.pass = got == clique_expectation(k, r) && got.size() == ls.size();
        });
    }

    // 2. special 3-graph
    run.run("labelings.special3", [&](Check& c) {
        const auto& h = g.at("special3");
        auto ls = enumerate_stable_labelings(h);
        // multiplicity per shape, keyed by the nonzero values
        json shapes = json::object();
        for (const auto& [shape, members] : group_by_shape(ls)) {
            std::vector<Rational> nz;
            for (const auto& q : shape)
                if (q != 0)
                    nz.push_back(q);
            shapes[nz.empty() ? "0" : join(nz)] = members.size();
        }
        json ordered = json::object();
        std::string pattern;
        for (const char* key : {"0", "1/1", "1/2 1/2 1/2", "1/1 1/1", "1/2 1/2 1/2 1/2", "1/3 1/3 1/3 1/3 1/3 1/3"}) {
            json count = shapes.contains(key) ? shapes[key] : json(0);
            ordered[key] = count;
            pattern += (pattern.empty() ? "" : "/") + count.dump();
        }
        auto P = p_polynomial(h, ls, tuples_from_labelings(h, ls)).to_string();
        c.expected = {{"count", 18},
                      {"pattern", "1/6/4/3/3/1"},
                      {"P", "1 + 6*c[1/1] + 3*c[1/1]^2 + 4*c[1/2]^3 + 3*c[1/2]^4 + c[1/3]^6"}};
        c.observed = {{"count", ls.size()}, {"pattern", pattern}, {"P", P}};
        if (shapes.size() != ordered.size())
            c.note = "unexpected shapes present";
        c.pass = c.expected == c.observed && c.note.empty();
    });

    // 3. counterexample
    run.run("counterexample.full_labeling", [&](Check& c) {
        auto f = unique_full_labeling_check(g.at("counterexample"));
        std::vector<Rational> want(19, Rational(0));
        for (int v : {0, 1, 2, 3, 7, 8, 9})
            want[v] = Rational(1, 2);
        for (int v : {4, 5, 6, 10, 11, 12})
            want[v] = Rational(1, 4);
        c.expected = join(want);
        c.observed = f ? json(join(f->values)) : json(nullptr);
        c.pass = f && f->values == want;
    });
    {
        RateProblem problem(g.at("counterexample"));
        run.run("counterexample.rho_bound", [&](Check& c) {
            c.tolerance = 1e-6;
            c.pass = true;
            json exp = json::array(), obs = json::array();
            for (double d : {1.0, 10.0, 100.0}) {
                double bound = 6.0 * std::pow(d, 0.2);
                double v = problem.solve(d).value;
                exp.push_back({{"delta", d}, {"max", bound}});
                obs.push_back({{"delta", d}, {"rho", v}});
                c.pass = c.pass && v <= bound + c.tolerance;
            }
            c.expected = exp;
            c.observed = obs;
        });
        run.run("counterexample.restricted_gap", [&](Check& c) {
            RateProblem restricted(g.at("counterexample"), {Rational(1), Rational(1, 2), Rational(1, 3)});
            const double d = 1e6;
            double a = problem.solve(d).value, b = restricted.solve(d).value;
            c.expected = "restricted > rho at delta = 1e6";
            c.observed = {{"rho", a}, {"restricted", b}};
            c.pass = b > a;
            if (!c.pass)
                c.note = "values {1, 1/2, 1/3} already reach rho at this delta";
        });
    }

    // 4. closed forms
    for (const char* name : {"k4r3", "k5r3", "special3", "k3", "c4"}) {
        run.run(std::string("closed_form.") + name, [&, name](Check& c) {
            const auto& h = g.at(name);
            auto kind = classify(h);
            if (!kind)
                throw std::runtime_error("no closed form");
            RateProblem problem(h);
            double worst = 0.0;
            for (double d : grid(0.05, 20.0, 50))
                worst = std::max(worst, std::fabs(problem.solve(d).value - closed_form_rho(*kind, d)));
            c.tolerance = 1e-6;
            c.expected = 0.0;
            c.observed = worst;
            c.pass = worst <= c.tolerance;
        });
    }

    // 5. reduced programs
    run.run("programs.clique", [&](Check& c) {
        double worst = 0.0;
        for (auto [k, r] : std::vector<std::pair<int, int>>{{4, 3}, {5, 3}, {6, 4}, {4, 2}})
            for (double d : grid(0.05, 20.0, 50)) {
                double want = std::min(std::pow(d, static_cast<double>(r) / k), r * d / k);
                worst = std::max(worst, std::fabs(solve_clique_program(k, r, d).objective - want));
            }
        c.tolerance = 1e-9;
        c.expected = 0.0;
        c.observed = worst;
        c.pass = worst <= c.tolerance;
    });
    run.run("programs.special", [&](Check& c) {
        double worst = 0.0;
        for (double d : grid(0.05, 20.0, 50)) {
            double want = std::min(std::sqrt(9.0 + 3.0 * d) - 3.0, std::sqrt(d));
            worst = std::max(worst, std::fabs(solve_special_program(d).objective - want));
        }
        c.tolerance = 1e-9;
        c.expected = 0.0;
        c.observed = worst;
        c.pass = worst <= c.tolerance;
    });
    run.run("programs.crossover", [&](Check& c) {
        double lo = 1.0, hi = 20.0;
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            (solve_special_program(mid).active_branch == "x1" ? lo : hi) = mid;
        }
        c.tolerance = 1e-6;
        c.expected = 9.0;
        c.observed = 0.5 * (lo + hi);
        c.pass = std::fabs(0.5 * (lo + hi) - 9.0) <= c.tolerance;
    });

    // 6. planting at n = 300 (full only)
    if (full) {
        for (double d : {9.0, 12.0}) {
            run.run("planting.special3.delta" + std::to_string(static_cast<int>(d)), [&, d](Check& c) {
                const auto& h = g.at("special3");
                const double p = 0.1;
                const int n = 300;
                RateProblem problem(h);
                auto res = problem.solve(d);
                WidthMap w = res.certificate;
                w[Rational(0)] = 1.0;
                auto block = plant(h, MixedHubCollection(3, problem.tuples(), w), n, p);
                const double dens_ratio = density_blockwise(h, block) / (res.p_value * std::pow(p, 4));
                const double ent = relative_entropy(block) / (std::pow(n, 3) / 6.0 * p * p * std::log(1.0 / p));
                const double ent_err = std::fabs(ent / res.volume - 1.0);
                c.expected = {{"density_ratio_min", 0.85}, {"entropy_rel_err_max", 0.15}};
                c.observed = {{"density_ratio", dens_ratio}, {"entropy_rel_err", ent_err}};
                c.tolerance = 0.15;
                c.pass = dens_ratio >= 0.85 && ent_err <= 0.15;
            });
        }
    }

    // 7. variational solver
    struct VarCase {
        std::string name;
        int n;
        double p;
    };
    std::vector<VarCase> cases{{"k3", 30, 0.3}};
    if (full)
        cases.push_back({"special3", 14, 0.35});
    for (const auto& vc : cases) {
        run.run("varsolve." + vc.name, [&](Check& c) {
            VariationalInstance inst;
            inst.pattern = g.at(vc.name);
            inst.n = vc.n;
            inst.p = vc.p;
            inst.delta = 1.0;
            inst.options.seed = seed;
            auto sol = solve_phi(inst);
            double fd = finite_difference_check(inst.pattern, sol.W, 1e-6, seed);
            c.expected = {{"feasible", true}, {"objective_max", sol.best_planted_objective}, {"fd_error_max", 1e-5},
                          {"normalized_rate_range", {1.0 / 50, 50.0}}};
            c.observed = {{"feasible", sol.feasible}, {"objective", sol.objective}, {"fd_error", fd},
                          {"normalized_rate", sol.normalized_rate}};
            c.tolerance = 1e-5;
            c.pass = sol.feasible && sol.objective <= sol.best_planted_objective * (1 + 1e-12) && fd < 1e-5 &&
                     sol.normalized_rate >= 1.0 / 50 && sol.normalized_rate <= 50.0;
        });
    }

    // 8. counting and simulation
    run.run("simulate.copies_vs_counting_function", [&](Check& c) {
        const std::vector<std::string> names{"k3", "c4", "p3", "k4r3", "special3"};
        int mismatches = 0;
        for (int i = 0; i < 50; ++i) {
            const auto& h = g.at(names[i % names.size()]);
            const int n = 5 + i % 3;
            auto host = sample_gnp(n, h.uniformity(), 0.6, seed, static_cast<std::uint64_t>(i));
            SymmetricTensor x(n, h.uniformity(), 0.0);
            for (const auto& e : host.edges())
                x.set_value(x.indexer().rank(e), 1.0);
            double via_t = counting_function(h, x) / static_cast<double>(automorphism_count(h));
            if (static_cast<double>(count_copies(h, host)) != via_t)
                ++mismatches;
        }
        c.expected = 0;
        c.observed = mismatches;
        c.pass = mismatches == 0;
    });
    run.run("simulate.mean_k4r3", [&](Check& c) {
        const std::uint64_t samples = full ? 100000 : 10000;
        auto r = tail_estimate(g.at("k4r3"), 6, 0.5, 0.0, samples, seed);
        c.expected = 15.0 / 16.0;
        c.observed = {{"mean", r.mean}, {"standard_error", r.mean_standard_error}, {"samples", samples}};
        c.tolerance = 3.0 * r.mean_standard_error;
        c.pass = std::fabs(r.mean - 15.0 / 16.0) <= c.tolerance;
    });
    run.run("simulate.tail_vs_exact", [&](Check& c) {
        const std::uint64_t samples = full ? 100000 : 10000;
        const auto& h = g.at("k4r3");
        double exact = exact_tail(h, 5, 0.5, 1.0);
        auto r = tail_estimate(h, 5, 0.5, 1.0, samples, seed);
        c.expected = exact;
        c.observed = r.tail_estimate;
        c.tolerance = 3.0 * std::sqrt(exact * (1.0 - exact) / static_cast<double>(samples));
        c.pass = std::fabs(r.tail_estimate - exact) <= c.tolerance;
    });

    // 9. Holder
    run.run("holder.random", [&](Check& c) {
        const std::vector<std::pair<std::string, int>> hs{{"k3", 8},       {"c4", 6},   {"p3", 8}, {"k4r2", 6},
                                                          {"k4r3", 5},     {"k5r3", 4}, {"k5r4", 4},
                                                          {"special3", 5}, {"edge2", 8}};
        int failures = 0;
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const auto& [name, n] = hs[i % hs.size()];
            const auto& h = g.at(name);
            RandomStream rng(seed, 1000 + i);
            SymmetricTensor u(n, h.uniformity());
            for (std::size_t j = 0; j < u.size(); ++j)
                u.set_value(j, rng.bernoulli(0.2) ? 0.0 : rng.uniform());
            std::optional<std::vector<std::vector<int>>> blocks;
            if (i % 2) {
                blocks.emplace(h.vertex_count());
                for (auto& b : *blocks) {
                    for (int v = 0; v < n; ++v)
                        if (rng.bernoulli(0.6))
                            b.push_back(v);
                }
            }
            auto res = holder_check(h, u, blocks);
            if (!res.holds)
                ++failures;
            if (res.rhs > 0)
                worst = std::max(worst, res.lhs / res.rhs);
        }
        c.expected = 0;
        c.observed = {{"failures", failures}, {"max_lhs_over_rhs", worst}};
        c.tolerance = 1e-12;
        c.pass = failures == 0;
    });
    run.run("holder.constant", [&](Check& c) {
        double worst = 0.0;
        for (const char* name : {"k3", "c4", "k4r3", "special3", "k5r4"}) {
            const auto& h = g.at(name);
            auto res = holder_check(h, SymmetricTensor(4, h.uniformity(), 0.7));
            worst = std::max(worst, std::fabs(res.lhs / res.rhs - 1.0));
        }
        c.expected = 0.0;
        c.observed = worst;
        c.tolerance = 1e-12;
        c.pass = worst <= c.tolerance;
    });

    // 10. entropy lemmas
    run.run("lemmas.entropy", [&](Check& c) {
        auto r = entropy_lemma_checks({1e-3, 1e-4, 1e-5, 1e-6});
        json rows = json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"p", row.p}, {"small_ratio", row.small_ratio}, {"large_ratio", row.large_ratio},
                            {"quadratic_ok", row.quadratic_ok}, {"log_ok", row.log_ok}});
        c.expected = "ratios in [0.9, 1.1], inequalities hold";
        c.observed = rows;
        c.tolerance = 0.1;
        c.pass = r.pass;
        c.note = r.first_violation;
    });

    // 11. Gaussian width
    run.run("gw.triangle_scaling", [&](Check& c) {
        const auto& h = g.at("k3");
        json obs = json::object();
        double base = 0.0, worst = 0.0;
        for (int n : {4, 6, 8, 10}) {
            auto e = disc_gw_estimate(h, n, 200, seed);
            double scaled = e.value / n / std::pow(n, 1.5);
            if (n == 4)
                base = scaled;
            worst = std::max(worst, scaled / base);
            obs[std::to_string(n)] = e.value;
        }
        c.expected = "estimate / n^(|V|-2) <= 1.3 C n^1.5";
        c.observed = {{"estimates", obs}, {"max_ratio_to_n4", worst}};
        c.tolerance = 0.3;
        c.pass = worst <= 1.3;
    });
    run.run("gw.single_edge", [&](Check& c) {
        const int n = 10;
        auto e = disc_gw_estimate(g.at("edge2"), n, 4000, seed);
        double analytic = 2.0 * std::sqrt(static_cast<double>(binomial(n, 2))) / std::sqrt(2.0 * std::numbers::pi);
        c.expected = analytic;
        c.observed = {{"estimate", e.value}, {"standard_error", e.standard_error}};
        c.tolerance = 3.0 * e.standard_error;
        c.pass = std::fabs(e.value - analytic) <= c.tolerance;
    });

    return rep;
}

} // namespace hyperrate::app
