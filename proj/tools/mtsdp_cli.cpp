#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mtsdp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mtsdp: primal-dual interior point solver for nonlinear SDPs"};
    app.require_subcommand(1);

    mtsdp::cli::SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand("solve", "run the path-following solver on an instance");
    solve->add_option("--instance", solve_opt.instance, "builtin instance name");
    solve->add_option("--instance-file", solve_opt.instance_file, "instance JSON file");
    solve->add_option("--scaling", solve_opt.scaling,
                      "scaling kind: identity|hkm|nt|hkm-dual|mtw")
        ->capture_default_str();
    solve->add_option("--alpha", solve_opt.alpha, "barrier exponent alpha")->capture_default_str();
    solve->add_option("--beta", solve_opt.beta, "backtracking factor beta")->capture_default_str();
    solve->add_option("--gamma", solve_opt.gamma, "initial barrier factor gamma")
        ->capture_default_str();
    solve->add_option("--xi", solve_opt.xi, "neighborhood exponent xi")->capture_default_str();
    solve->add_option("--xi-prime", solve_opt.xi_prime, "half-step neighborhood exponent")
        ->capture_default_str();
    solve->add_option("--tau", solve_opt.tau, "neighborhood radius factor tau")
        ->capture_default_str();
    solve->add_option("--tol", solve_opt.tol, "termination tolerance on ||Xi0||")
        ->capture_default_str();
    solve->add_option("--max-iters", solve_opt.max_iters, "iteration cap")->capture_default_str();
    solve->add_option("--max-backtracks", solve_opt.max_backtracks, "backtrack cap per step")
        ->capture_default_str();
    solve->add_option("--mu-floor", solve_opt.mu_floor, "secondary stop on the barrier value")
        ->capture_default_str();
    solve->add_option("--csv", solve_opt.csv_path, "write the per-iteration CSV here");
    solve->add_option("--json", solve_opt.json_path, "write the JSON summary here");
    solve->add_option("--seed", solve_opt.seed, "echoed into the summary")->capture_default_str();

    mtsdp::cli::VerifyOptions verify_opt;
    CLI::App* verify = app.add_subcommand("verify", "run the seeded property suites");
    verify->add_option("--only", verify_opt.only, "substring filter on suite names");
    verify->add_option("--trials", verify_opt.trials, "trials per suite")->capture_default_str();
    verify->add_option("--seed", verify_opt.seed, "generator seed")->capture_default_str();

    mtsdp::cli::ReportOptions report_opt;
    CLI::App* report = app.add_subcommand("report", "regularity report at the known solution");
    report->add_option("--instance", report_opt.instance, "builtin instance name");
    report->add_option("--instance-file", report_opt.instance_file, "instance JSON file");
    report->add_option("--json", report_opt.json_path, "write the report here");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return mtsdp::cli::run_solve(solve_opt, std::cout, std::cerr);
    if (verify->parsed()) return mtsdp::cli::run_verify(verify_opt, std::cout, std::cerr);
    if (report->parsed()) return mtsdp::cli::run_report(report_opt, std::cout, std::cerr);
    return 2;
}
