#include "app/app.hpp"

#include <CLI11.hpp>

#include <iostream>

using hyperrate::app::Format;
using hyperrate::app::RunConfig;

int main(int argc, char** argv)
{
    RunConfig cfg;
    CLI::App app{"hyperrate: upper-tail rates for hypergraph counts"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "json";
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto graph_opt = [&](CLI::App* sub) { sub->add_option("--graph", cfg.graph, "hypergraph JSON file")->required(); };

    auto* info = app.add_subcommand("info", "summarize a pattern hypergraph");
    graph_opt(info);
    info->add_option("--n", cfg.n, "host size for the expected count");
    info->add_option("--p", cfg.p, "edge probability for the expected count");

    auto* lab = app.add_subcommand("labelings", "enumerate stable labelings");
    graph_opt(lab);

    auto* rho = app.add_subcommand("rho", "mixed-hub rate rho(H, delta)");
    graph_opt(rho);
    rho->add_option("--delta", cfg.delta, "relative excess");
    rho->add_option("--restrict", cfg.restrict_values, "allowed label values, e.g. 1,1/2,1/3")->delimiter(',');
    rho->add_option("--sweep", cfg.sweep, "delta sweep a:b:step");

    auto* pl = app.add_subcommand("plant", "plant the rate certificate as a block model");
    graph_opt(pl);
    pl->add_option("--n", cfg.n)->required();
    pl->add_option("--p", cfg.p)->required();
    pl->add_option("--delta", cfg.delta)->required();

    auto* vs = app.add_subcommand("varsolve", "solve the finite variational problem");
    graph_opt(vs);
    vs->add_option("--n", cfg.n)->required();
    vs->add_option("--p", cfg.p)->required();
    vs->add_option("--delta", cfg.delta)->required();
    vs->add_option("--restarts", cfg.restarts, "perturbed restarts");
    vs->add_option("--tensor", cfg.tensor_out, "write the optimal weights here");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo upper-tail estimate");
    graph_opt(sim);
    sim->add_option("--n", cfg.n)->required();
    sim->add_option("--p", cfg.p)->required();
    sim->add_option("--delta", cfg.delta)->required();
    sim->add_option("--samples", cfg.samples)->required();
    sim->add_flag("--exact", cfg.exact, "also enumerate the exact tail");
    sim->add_flag("--importance", cfg.importance, "planted importance sampling");

    auto* an = app.add_subcommand("analysis", "appendix quantities and reduced programs");
    an->require_subcommand(1);
    auto* cut = an->add_subcommand("cutnorm", "cut norm of a Gaussian tensor");
    cut->add_option("--n", cfg.n)->required();
    cut->add_option("--r", cfg.r)->required();
    cut->add_option("--restarts", cfg.restarts);
    cut->add_flag("--exact", cfg.exact, "also run the exhaustive search");
    auto* gw = an->add_subcommand("gw", "Gaussian width bound estimate");
    graph_opt(gw);
    gw->add_option("--n", cfg.n)->required();
    gw->add_option("--samples", cfg.samples)->required();
    gw->add_option("--restarts", cfg.restarts);
    auto* prog = an->add_subcommand("programs", "reduced convex programs");
    prog->add_option("--delta", cfg.delta)->required();
    prog->add_option("--k", cfg.k, "clique size");
    prog->add_option("--r", cfg.r, "uniformity");
    auto* lem = an->add_subcommand("lemmas", "entropy lemma checks");
    cfg.p_grid = {1e-3, 1e-4, 1e-5, 1e-6};
    lem->add_option("--p-grid", cfg.p_grid)->delimiter(',');
    for (auto* s : {cut, gw, prog, lem})
        s->callback([&, s] { cfg.analysis = s->get_name(); });

    auto* ver = app.add_subcommand("verify", "run the built-in cross-checks");
    ver->add_flag("--quick", cfg.quick, "skip the slowest checks");
    ver->add_flag("--timings", cfg.timings, "include wall time per check");
    ver->add_option("--data", cfg.data_dir, "directory of bundled graphs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.format = format == "csv" ? Format::csv : Format::json;
    return hyperrate::app::dispatch(cfg);
}
