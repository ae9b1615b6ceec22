#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using subriem::cli::RunConfig;

namespace {

void surface_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--builtin", cfg.surface.builtin, "Builtin surface name");
    cmd->add_option("--graph", cfg.surface.graph, "Graph function u(x1..x2n)");
    cmd->add_option("--n", cfg.surface.n, "Heisenberg rank for graphs and ball slices")->check(CLI::NonNegativeNumber);
    cmd->add_option("--r", cfg.surface.r, "Radius for tubular and circle-cylinder")->check(CLI::PositiveNumber);
    cmd->add_option("--rule", cfg.surface.rule, "Curvature sign rule: converse or first-order");
    cmd->add_option("--algebra", cfg.surface.algebra_path, "Algebra definition (JSON)");
    cmd->add_option("--grid", cfg.grid, "Cells per parameter axis, e.g. 40,40")->delimiter(',');
    cmd->add_option("--fd-step", cfg.fd_step, "Central-difference step (0 = default)");
    cmd->add_option("--tol", cfg.tol, "Pass tolerance (0 = command default)");
    cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--json", cfg.json, "Write the JSON report here");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sub-Riemannian submanifold checks"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* validate = app.add_subcommand("validate", "Check an algebra definition");
    validate->add_option("--algebra", cfg.surface.algebra_path, "Algebra definition (JSON)")->required();
    validate->add_option("--json", cfg.json, "Write the JSON report here");

    auto* minimality = app.add_subcommand("check-minimality", "Residual |H + sigma| on a grid");
    surface_flags(minimality, cfg);

    auto* variation = app.add_subcommand("first-variation", "Numeric and analytic first variation");
    surface_flags(variation, cfg);
    variation->add_option("--variation", cfg.variation, "bump or tangential");
    variation->add_option("--quad", cfg.quad, "Gauss-Legendre order per axis")->check(CLI::PositiveNumber);
    variation->add_option("--eps", cfg.eps, "Variation step")->check(CLI::PositiveNumber);

    auto* mesh = app.add_subcommand("mesh", "CSV mesh of a surface or of the unit ball");
    surface_flags(mesh, cfg);
    mesh->add_flag("--ball", cfg.ball, "Mesh unit-ball slices instead of a surface");
    mesh->add_option("--mu0", cfg.mu0, "Single ball slice at this mu0");
    mesh->add_option("--plane", cfg.plane, "Horizontal axes i,j of the ball slice")->delimiter(',');
    mesh->add_option("--out", cfg.out, "Write the CSV here instead of stdout");

    auto* factor = app.add_subcommand("metric-factor", "Monte Carlo metric factor of a random slice");
    factor->add_option("--n", cfg.surface.n, "Heisenberg rank");
    factor->add_option("--codim", cfg.codim, "Codimension p of the slice");
    factor->add_option("--seed", cfg.seed, "Random seed");
    factor->add_option("--samples", cfg.samples, "Monte Carlo samples");
    factor->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
    factor->add_option("--json", cfg.json, "Write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    const auto res = subriem::cli::run_command(cfg);
    if (!res.csv.empty())
        std::cout << res.csv;
    else
        std::cout << res.report.dump(2) << '\n';
    if (res.report.contains("error")) std::cerr << "error: " << res.report["error"].get<std::string>() << '\n';
    return res.exit_code;
}
