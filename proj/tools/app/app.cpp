#include "app.hpp"

#include "hyperrate/analysis.hpp"
#include "hyperrate/errors.hpp"
#include "hyperrate/hubplan.hpp"
#include "hyperrate/labelings.hpp"
#include "hyperrate/parallel.hpp"
#include "hyperrate/simulate.hpp"
#include "hyperrate/varsolve.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef HYPERRATE_DATA_DIR
#define HYPERRATE_DATA_DIR "data/graphs"
#endif

namespace hyperrate::app {

using json = nlohmann::ordered_json;

namespace {

json rationals(const std::vector<Rational>& v)
{
    json out = json::array();
    for (const auto& q : v)
        out.push_back(to_string(q));
    return out;
}

json widths(const WidthMap& w)
{
    json out = json::object();
    for (const auto& [t, c] : w)
        out[to_string(t)] = c;
    return out;
}

Hypergraph load(const std::filesystem::path& path)
{
    if (path.empty())
        throw UsageError("--graph is required");
    return read_hypergraph(path);
}

std::vector<double> parse_sweep(const std::string& spec)
{
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || !(b >= a) || !(a > 0))
        throw UsageError("--sweep expects a:b:step with 0 < a <= b and step > 0, got '" + spec + "'");
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i)
        out.push_back(a + step * i);
    return out;
}

RateOptions rate_options(const RunConfig& cfg)
{
    RateOptions o;
    o.seed = cfg.seed;
    if (cfg.threads > 0)
        o.threads = cfg.threads;
    return o;
}

json rate_json(const RateResult& r)
{
    json j;
    j["rho"] = r.value;
    j["method"] = to_string(r.method);
    j["certificate"] = widths(r.certificate);
    j["volume"] = r.volume;
    j["p_value"] = r.p_value;
    return j;
}

std::string family_name(const ClosedFormKind& k)
{
    switch (k.family) {
    case ClosedFormKind::Family::clique:
        return "clique";
    case ClosedFormKind::Family::special3:
        return "special3";
    case ClosedFormKind::Family::twograph:
        return "twograph";
    }
    return "unknown";
}

// --- subcommands -----------------------------------------------------------

json cmd_info(const RunConfig& cfg)
{
    auto h = load(cfg.graph);
    json j;
    j["graph"] = cfg.graph.filename().string();
    j["r"] = h.uniformity();
    j["vertices"] = h.vertex_count();
    j["edges"] = h.edge_count();
    j["max_degree"] = max_degree(h);
    j["regular"] = is_regular(h);
    j["connected"] = is_connected(h);
    j["complete"] = is_complete(h);
    if (h.vertex_count() <= 12)
        j["automorphisms"] = automorphism_count(h);
    auto kind = classify(h);
    j["closed_form_family"] = kind ? json(family_name(*kind)) : json(nullptr);
    if (cfg.n > 0 && cfg.p > 0)
        j["expected_count"] = expected_count(h, cfg.n, cfg.p);
    return j;
}

json cmd_labelings(const RunConfig& cfg, std::string& csv)
{
    auto h = load(cfg.graph);
    auto ls = enumerate_stable_labelings(h);
    json j;
    j["graph"] = cfg.graph.filename().string();
    j["count"] = ls.size();
    json arr = json::array();
    std::ostringstream c;
    c << "index";
    for (int v = 0; v < h.vertex_count(); ++v)
        c << ",v" << v;
    c << '\n';
    for (std::size_t i = 0; i < ls.size(); ++i) {
        arr.push_back(rationals(ls[i].values));
        c << i;
        for (const auto& q : ls[i].values)
            c << ',' << to_string(q);
        c << '\n';
    }
    j["labelings"] = arr;
    json groups = json::array();
    for (const auto& [shape, members] : group_by_shape(ls))
        groups.push_back({{"values", rationals(shape)}, {"count", members.size()}});
    j["shapes"] = groups;
    auto tuples = tuples_from_labelings(h, ls);
    j["p_polynomial"] = p_polynomial(h, ls, tuples).to_string();
    j["volume_polynomial"] = volume_polynomial(tuples).to_string();
    auto full = unique_full_labeling_check(h);
    j["unique_full_labeling"] = full ? rationals(full->values) : json(nullptr);
    csv = c.str();
    return j;
}

json cmd_rho(const RunConfig& cfg, std::string& csv)
{
    auto h = load(cfg.graph);
    std::optional<std::vector<Rational>> allowed;
    if (!cfg.restrict_values.empty()) {
        allowed.emplace();
        for (const auto& s : cfg.restrict_values) {
            try {
                allowed->push_back(parse_rational(s));
            } catch (const std::exception&) {
                throw UsageError("--restrict: cannot parse '" + s + "' as a rational");
            }
        }
    }
    const auto opts = rate_options(cfg);
    RateProblem problem = allowed ? RateProblem(h, *allowed, opts) : RateProblem(h, opts);
    auto kind = classify(h);
    const auto deltas = cfg.sweep.empty() ? std::vector<double>{cfg.delta} : parse_sweep(cfg.sweep);

    json j;
    j["graph"] = cfg.graph.filename().string();
    j["seed"] = cfg.seed;
    if (allowed)
        j["restrict"] = rationals(*allowed);
    json rows = json::array();
    std::ostringstream c;
    c << "delta,rho,method" << (kind && !allowed ? ",closed_form" : "") << '\n';
    c.precision(17);
    for (double d : deltas) {
        auto res = problem.solve(d);
        json row{{"delta", d}};
        row.update(rate_json(res));
        c << d << ',' << res.value << ',' << to_string(res.method);
        if (kind && !allowed) {
            double cf = closed_form_rho(*kind, d);
            row["closed_form"] = cf;
            c << ',' << cf;
        }
        c << '\n';
        rows.push_back(row);
    }
    if (deltas.size() == 1)
        j.update(rows[0]);
    else
        j["sweep"] = rows;
    csv = c.str();
    return j;
}

json cmd_plant(const RunConfig& cfg)
{
    auto h = load(cfg.graph);
    RateProblem problem(h, rate_options(cfg));
    auto res = problem.solve(cfg.delta);
    WidthMap c = res.certificate;
    c[Rational(0)] = 1.0;
    MixedHubCollection m(h.uniformity(), problem.tuples(), c);
    auto block = plant(h, m, cfg.n, cfg.p);
    const double E = static_cast<double>(h.edge_count());
    const int r = h.uniformity();
    const double dens = density_blockwise(h, block);
    const double scale = std::pow(cfg.n, r) / std::tgamma(r + 1.0) * std::pow(cfg.p, max_degree(h)) * std::log(1.0 / cfg.p);
    json j;
    j["graph"] = cfg.graph.filename().string();
    j["n"] = cfg.n;
    j["p"] = cfg.p;
    j["delta"] = cfg.delta;
    j["certificate"] = widths(res.certificate);
    json w = json::object();
    for (const auto& [t, width] : plant_widths(h, m, cfg.n, cfg.p))
        w[to_string(t)] = width;
    j["widths"] = w;
    j["effective_widths"] = widths(effective_widths(h, m, cfg.n, cfg.p));
    j["class_sizes"] = block.class_sizes();
    j["density"] = dens;
    j["density_over_p_pE"] = dens / std::pow(cfg.p, E);
    j["target_P"] = res.p_value;
    j["relative_entropy"] = relative_entropy(block);
    j["normalized_entropy"] = relative_entropy(block) / scale;
    j["volume"] = res.volume;
    return j;
}

json cmd_varsolve(const RunConfig& cfg)
{
    auto h = load(cfg.graph);
    VariationalInstance inst;
    inst.pattern = h;
    inst.n = cfg.n;
    inst.p = cfg.p;
    inst.delta = cfg.delta;
    inst.options.seed = cfg.seed;
    if (cfg.restarts >= 0)
        inst.options.restarts = cfg.restarts;
    if (cfg.threads > 0)
        inst.options.threads = cfg.threads;
    auto sol = solve_phi(inst);
    json j;
    j["graph"] = cfg.graph.filename().string();
    j["seed"] = cfg.seed;
    j["n"] = cfg.n;
    j["p"] = cfg.p;
    j["delta"] = cfg.delta;
    j["objective"] = sol.objective;
    j["constraint_value"] = sol.constraint_value;
    j["target"] = sol.target;
    j["feasible"] = sol.feasible;
    j["normalized_rate"] = sol.normalized_rate;
    j["source"] = sol.source;
    j["best_planted_objective"] = sol.best_planted_objective;
    json starts = json::array();
    for (const auto& s : sol.starts)
        starts.push_back({{"label", s.label},
                          {"initial_objective", s.initial_objective},
                          {"initial_feasible", s.initial_feasible},
                          {"final_objective", s.final_objective},
                          {"final_feasible", s.final_feasible},
                          {"violation_trace", s.violation_trace}});
    j["starts"] = starts;
    if (!cfg.tensor_out.empty()) {
        write_tensor(sol.W, cfg.tensor_out);
        j["tensor"] = cfg.tensor_out.string();
    }
    return j;
}

json cmd_simulate(const RunConfig& cfg)
{
    auto h = load(cfg.graph);
    SimulationOptions so;
    so.importance = cfg.importance;
    if (cfg.threads > 0)
        so.threads = cfg.threads;
    auto rep = tail_estimate(h, cfg.n, cfg.p, cfg.delta, cfg.samples, cfg.seed, so);
    json j;
    j["graph"] = cfg.graph.filename().string();
    j["seed"] = cfg.seed;
    j["n"] = cfg.n;
    j["p"] = cfg.p;
    j["delta"] = cfg.delta;
    j["samples"] = rep.samples;
    j["importance"] = rep.importance;
    j["expected"] = rep.expected;
    j["threshold"] = rep.threshold;
    j["mean"] = rep.mean;
    j["variance"] = rep.variance;
    j["mean_standard_error"] = rep.mean_standard_error;
    j["tail_hits"] = rep.tail_hits;
    j["tail_estimate"] = rep.tail_estimate;
    j["standard_error"] = rep.standard_error;
    if (cfg.exact)
        j["exact_tail"] = exact_tail(h, cfg.n, cfg.p, cfg.delta);
    return j;
}

json program_json(const ReducedProgramSolution& s)
{
    json j;
    j["objective"] = s.objective;
    j["active_branch"] = s.active_branch;
    json v = json::object();
    for (const auto& [name, x] : s.variables)
        v[name] = x;
    j["variables"] = v;
    json b = json::object();
    for (const auto& [name, x] : s.branch_values)
        b[name] = x;
    j["branch_values"] = b;
    j["interior_gap"] = s.interior_gap;
    return j;
}

json cmd_analysis(const RunConfig& cfg)
{
    json j;
    j["analysis"] = cfg.analysis;
    j["seed"] = cfg.seed;
    if (cfg.analysis == "cutnorm") {
        auto f = SymmetricTensor::gaussian(cfg.n, cfg.r, cfg.seed, 0);
        const int restarts = cfg.restarts >= 0 ? cfg.restarts : 50;
        j["n"] = cfg.n;
        j["r"] = cfg.r;
        j["restarts"] = restarts;
        j["heuristic"] = cut_norm_heuristic(f, restarts, cfg.seed);
        if (cfg.exact)
            j["exact"] = cut_norm_exact(f);
    } else if (cfg.analysis == "gw") {
        auto h = load(cfg.graph);
        auto est = disc_gw_estimate(h, cfg.n, static_cast<int>(cfg.samples), cfg.seed,
                                    cfg.restarts >= 0 ? cfg.restarts : 20);
        j["graph"] = cfg.graph.filename().string();
        j["n"] = cfg.n;
        j["samples"] = est.samples;
        j["quantity"] = est.quantity;
        j["estimate"] = est.value;
        j["standard_error"] = est.standard_error;
        j["disc_lip_bound"] = disc_lip(h, cfg.n, DiscLipMode::bound);
    } else if (cfg.analysis == "programs") {
        j["delta"] = cfg.delta;
        if (cfg.k > 0)
            j["clique"] = program_json(solve_clique_program(cfg.k, cfg.r, cfg.delta));
        j["special"] = program_json(solve_special_program(cfg.delta));
    } else if (cfg.analysis == "lemmas") {
        auto rep = entropy_lemma_checks(cfg.p_grid);
        json rows = json::array();
        for (const auto& r : rep.rows)
            rows.push_back({{"p", r.p},
                            {"small_ratio", r.small_ratio},
                            {"small_ok", r.small_ok},
                            {"large_ratio", r.large_ratio},
                            {"large_ok", r.large_ok},
                            {"quadratic_ok", r.quadratic_ok},
                            {"quadratic_min_ratio", r.quadratic_min_ratio},
                            {"log_ok", r.log_ok},
                            {"log_min_ratio", r.log_min_ratio}});
        j["rows"] = rows;
        j["pass"] = rep.pass;
        j["first_violation"] = rep.first_violation.empty() ? json(nullptr) : json(rep.first_violation);
    }
    return j;
}

void emit(const RunConfig& cfg, const std::string& text)
{
    if (cfg.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(cfg.out);
    if (!out)
        throw std::ios_base::failure("cannot write output file " + cfg.out.string());
    out << text;
    if (!out)
        throw std::ios_base::failure("error writing output file " + cfg.out.string());
}

} // namespace

std::filesystem::path default_data_dir() { return HYPERRATE_DATA_DIR; }

void validate(const RunConfig& cfg)
{
    auto need = [](bool ok, const std::string& msg) {
        if (!ok)
            throw UsageError(msg);
    };
    const auto& c = cfg.command;
    if (cfg.format == Format::csv)
        need(c == "labelings" || c == "rho", "--format csv is only available for labelings and rho");
    if (c == "info" || c == "labelings" || c == "rho" || c == "plant" || c == "varsolve" || c == "simulate")
        need(!cfg.graph.empty(), "--graph is required for " + c);
    if (c == "rho" && cfg.sweep.empty())
        need(cfg.delta > 0, "--delta must be positive");
    if (c == "plant" || c == "varsolve" || c == "simulate") {
        need(cfg.n > 0, "--n must be positive");
        need(cfg.p > 0 && cfg.p < 1, "--p must lie in (0,1)");
        need(cfg.delta > 0 || (c == "simulate" && cfg.delta >= -1), "--delta must be positive");
    }
    if (c == "simulate")
        need(cfg.samples > 0, "--samples must be positive");
    if (c == "analysis") {
        const auto& a = cfg.analysis;
        need(a == "cutnorm" || a == "gw" || a == "programs" || a == "lemmas",
             "analysis needs one of cutnorm, gw, programs, lemmas");
        if (a == "cutnorm")
            need(cfg.n > 0 && cfg.r > 0, "--n and --r must be positive");
        if (a == "gw") {
            need(!cfg.graph.empty(), "--graph is required for analysis gw");
            need(cfg.n > 0, "--n must be positive");
            need(cfg.samples >= 2, "--samples must be at least 2");
        }
        if (a == "programs") {
            need(cfg.delta > 0, "--delta must be positive");
            need(cfg.k == 0 || (cfg.k > cfg.r && cfg.r >= 2), "--k and --r need k > r >= 2");
        }
        if (a == "lemmas")
            need(!cfg.p_grid.empty(), "--p-grid must not be empty");
    }
}

int dispatch(const RunConfig& cfg)
{
    try {
        validate(cfg);
        if (cfg.threads > 0)
            set_default_threads(cfg.threads);
        std::string csv;
        json report;
        int code = 0;
        const auto& c = cfg.command;
        if (c == "info")
            report = cmd_info(cfg);
        else if (c == "labelings")
            report = cmd_labelings(cfg, csv);
        else if (c == "rho")
            report = cmd_rho(cfg, csv);
        else if (c == "plant")
            report = cmd_plant(cfg);
        else if (c == "varsolve")
            report = cmd_varsolve(cfg);
        else if (c == "simulate")
            report = cmd_simulate(cfg);
        else if (c == "analysis") {
            report = cmd_analysis(cfg);
            if (report.contains("pass") && !report["pass"].get<bool>())
                code = 1;
        } else if (c == "verify") {
            auto dir = cfg.data_dir.empty() ? default_data_dir() : cfg.data_dir;
            auto rep = verify_all(cfg.quick ? VerifyMode::quick : VerifyMode::full, dir, cfg.seed);
            report = to_json(rep, cfg.timings);
            code = rep.pass ? 0 : 1;
        } else
            throw UsageError("unknown command '" + c + "'");
        emit(cfg, cfg.format == Format::csv ? csv : report.dump(2) + "\n");
        return code;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

json to_json(const VerifyReport& report, bool timings)
{
    json j;
    j["mode"] = report.mode;
    j["seed"] = report.seed;
    j["pass"] = report.pass;
    json checks = json::array();
    for (const auto& c : report.checks) {
        json row;
        row["name"] = c.name;
        row["expected"] = c.expected;
        row["observed"] = c.observed;
        row["tolerance"] = c.tolerance;
        row["pass"] = c.pass;
        if (!c.note.empty())
            row["note"] = c.note;
        if (timings)
            row["seconds"] = c.seconds;
        checks.push_back(row);
    }
    j["checks"] = checks;
    return j;
}

} // namespace hyperrate::app
