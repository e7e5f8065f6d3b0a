#include <CLI11.hpp>

#include "hle/cli.hpp"

namespace {

void add_param_flags(CLI::App* cmd, hle::SystemParams& p, bool required) {
    auto* n = cmd->add_option("--n", p.n, "space dimension (>= 2)");
    auto* a = cmd->add_option("--a", p.a, "weight exponent of the u-equation");
    auto* b = cmd->add_option("--b", p.b, "weight exponent of the v-equation");
    auto* pp = cmd->add_option("--p", p.p, "exponent p (> 1)");
    auto* q = cmd->add_option("--q", p.q, "exponent q (> 1)");
    if (required) {
        n->required();
        a->required();
        b->required();
        pp->required();
        q->required();
    }
}

void add_solver_flags(CLI::App* cmd, hle::RunConfig& cfg) {
    cmd->add_option("--L", cfg.L, "grid half length");
    cmd->add_option("--h", cfg.h, "grid spacing (<= 0.1)");
    cmd->add_option("--tol", cfg.solver.tol, "relative stationarity tolerance");
    cmd->add_option("--max-iter", cfg.solver.max_iter, "iteration cap");
    cmd->add_option("--seed", cfg.solver.seed, "seed for multistart bumps");
    cmd->add_option("--multistarts", cfg.solver.multistarts, "number of starts");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial solutions of the Henon-Lane-Emden system on the critical "
                 "hyperbola, via the Emden-Fowler reduction"};
    app.require_subcommand(1);

    hle::RunConfig cfg;

    auto* classify = app.add_subcommand("classify", "derive reduction constants and regime");
    add_param_flags(classify, cfg.params, true);
    classify->add_option("--out", cfg.out, "output path (stdout if omitted)");
    classify->add_option("--format", cfg.format, "json or csv");

    auto* solve = app.add_subcommand("solve", "minimize the quotient and verify the pair");
    add_param_flags(solve, cfg.params, true);
    add_solver_flags(solve, cfg);
    solve->add_flag("--duality", cfg.with_duality, "also run the dual minimization");
    solve->add_option("--out", cfg.out,
                      "base path; writes <out>.json, <out>_trajectory.csv, <out>_radial.csv");
    solve->add_option("--format", cfg.format, "json (report format)");

    auto* verify = app.add_subcommand("verify", "re-run all verifiers on a trajectory CSV");
    add_param_flags(verify, cfg.params, true);
    verify->add_option("--in", cfg.input, "trajectory CSV written by solve")->required();
    verify->add_option("--out", cfg.out, "output base path (stdout if omitted)");
    verify->add_option("--format", cfg.format, "json");

    auto* rellich = app.add_subcommand("rellich", "weighted Rellich constants and exponents");
    rellich->add_option("--n", cfg.rellich_n, "space dimension")->required();
    rellich->add_option("--theta", cfg.rellich_theta, "integrability exponent (> 1)")
        ->required();
    rellich->add_option("--alpha", cfg.rellich_alpha, "weight exponent")->required();
    rellich->add_option("--out", cfg.out, "output path (stdout if omitted)");
    rellich->add_option("--format", cfg.format, "json or csv");

    auto* sweep = app.add_subcommand(
        "sweep", "classify a grid of tuples; b is solved from the hyperbola");
    sweep->add_option("--n", cfg.sweep_n, "dimension list")->required()->delimiter(',');
    sweep->add_option("--a", cfg.sweep_a, "weight list")->required()->delimiter(',');
    sweep->add_option("--p", cfg.sweep_p, "p list")->required()->delimiter(',');
    sweep->add_option("--q", cfg.sweep_q, "q list")->required()->delimiter(',');
    sweep->add_option("--out", cfg.out, "output path (stdout if omitted)");
    sweep->add_option("--format", cfg.format, "json or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hle::kExitInvalidParams;
    }

    if (classify->parsed()) cfg.command = hle::RunConfig::Command::Classify;
    if (solve->parsed()) cfg.command = hle::RunConfig::Command::Solve;
    if (verify->parsed()) cfg.command = hle::RunConfig::Command::Verify;
    if (rellich->parsed()) cfg.command = hle::RunConfig::Command::Rellich;
    if (sweep->parsed()) cfg.command = hle::RunConfig::Command::Sweep;

    return hle::run(cfg);
}
