#pragma once

#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <json.hpp>

#include "mtsdp/errors.hpp"
#include "mtsdp/instances.hpp"
#include "mtsdp/log.hpp"
#include "mtsdp/pathfollow.hpp"
#include "mtsdp/regularity.hpp"
#include "mtsdp/report.hpp"
#include "mtsdp/verify.hpp"

// Subcommand implementations behind the command-line front end; kept as
// ordinary functions over streams so the driver behavior is testable
// in-process.

namespace mtsdp::cli {

struct SolveOptions {
    std::string instance;       // builtin name
    std::string instance_file;  // JSON path
    std::string scaling = "hkm";
    double alpha = 0.1;
    double beta = 0.5;
    double gamma = 1.0;
    double xi = 0.5;
    double xi_prime = 1.0 / 3.0;
    double tau = 10.0;
    double tol = 1e-10;
    int max_iters = 200;
    int max_backtracks = 60;
    double mu_floor = 1e-14;
    std::string csv_path;
    std::string json_path;
    unsigned seed = 0;
};

struct VerifyOptions {
    std::string only;
    int trials = 1000;
    unsigned seed = 12345;
};

struct ReportOptions {
    std::string instance;
    std::string instance_file;
    std::string json_path;
};

inline Instance resolve_instance(const std::string& name, const std::string& file) {
    if (!name.empty() && !file.empty()) {
        throw ConfigError("pass either --instance or --instance-file, not both");
    }
    if (!name.empty()) return builtin(name);
    if (!file.empty()) return load_instance(file);
    throw ConfigError("an instance is required (--instance <name> or --instance-file <path>)");
}

/// Materialize the instance's starting rule. A central-path start walks the
/// corrector down to mu0 from the interior hint and rescales gamma so the
/// driver's own mu_0 = gamma ||Xi^I_0(w0)|| reproduces mu0.
inline Iterate starting_iterate(const Instance& inst, SolverConfig& cfg) {
    switch (inst.start.kind) {
        case StartSpec::Kind::iterate:
            return inst.start.w;
        case StartSpec::Kind::central_path: {
            if (!inst.interior_hint) {
                throw ConfigError("instance requests a central-path start but has no interior hint");
            }
            log_info("generating central-path start at mu0 = " + fmt17(inst.start.mu0));
            const Iterate w0 = central_path_ladder(*inst.oracle, *inst.interior_hint, inst.start.mu0);
            cfg.gamma = inst.start.mu0 / residual_xi0(*inst.oracle, w0).norm;
            return w0;
        }
        case StartSpec::Kind::unset:
            if (inst.interior_hint) return *inst.interior_hint;
            throw ConfigError("instance provides neither a start nor an interior point");
    }
    throw ConfigError("unreachable start kind");
}

inline SolverConfig config_from(const SolveOptions& opt) {
    SolverConfig cfg;
    cfg.alpha = opt.alpha;
    cfg.beta = opt.beta;
    cfg.gamma = opt.gamma;
    cfg.xi = opt.xi;
    cfg.xi_prime = opt.xi_prime;
    cfg.tau = opt.tau;
    cfg.scaling = parse_scaling(opt.scaling);
    cfg.tol = opt.tol;
    cfg.max_iters = opt.max_iters;
    cfg.max_backtracks = opt.max_backtracks;
    cfg.mu_floor = opt.mu_floor;
    return cfg;
}

/// solve: run the path-following driver on one instance, emit the iteration
/// CSV and the JSON summary, and re-verify the reported final iterate after a
/// serialization round trip. Exit 0 only on a re-verified Converged run;
/// 1 on Failed/MaxIters; 2 on configuration errors.
inline int run_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
    SolverConfig cfg;
    Instance inst;
    try {
        cfg = config_from(opt);
        for (const std::string& w : cfg.validate()) err << "warning: " << w << "\n";
        inst = resolve_instance(opt.instance, opt.instance_file);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    RunResult res;
    try {
        const Iterate w0 = starting_iterate(inst, cfg);
        res = run(*inst.oracle, w0, cfg);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    double order = std::numeric_limits<double>::quiet_NaN();
    if (inst.known_solution && res.trace.records.size() >= 4) {
        try {
            order = estimate_order(res.trace, *inst.known_solution);
        } catch (const InsufficientData&) {
        }
    }
    std::optional<RegularityReport> reg;
    if (inst.known_solution) {
        try {
            reg = full_report(*inst.oracle, *inst.known_solution);
        } catch (const Error& e) {
            err << "warning: regularity report unavailable: " << e.what() << "\n";
        }
    }

    const std::string csv = trace_csv(res, inst.known_solution);
    nlohmann::json summary = run_summary_json(inst.name, cfg, res, order, reg);
    summary["seed"] = opt.seed;

    try {
        if (!opt.csv_path.empty()) write_text_file(opt.csv_path, csv);
        if (!opt.json_path.empty()) {
            write_text_file(opt.json_path, summary.dump(2) + "\n");
            out << inst.name << ": " << status_name(res.status) << ", final ||Xi0|| = "
                << fmt17(res.final_xi0) << ", iterations = " << res.trace.records.size() << "\n";
        } else {
            out << summary.dump(2) << "\n";
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (res.status != Status::converged) {
        err << "error: " << status_name(res.status)
            << (res.reason.empty() ? "" : ": " + res.reason) << "\n";
        return 1;
    }

    // Independent re-verification of the reported iterate: parse the emitted
    // JSON back and recompute the termination residual with a fresh oracle.
    try {
        const nlohmann::json parsed = nlohmann::json::parse(summary.dump());
        const Instance fresh = resolve_instance(opt.instance, opt.instance_file);
        const Iterate w_reported = iterate_from_json(parsed.at("w_final"), fresh.oracle->n(),
                                                     fresh.oracle->m(), fresh.oracle->s());
        const double xi0 = residual_xi0(*fresh.oracle, w_reported).norm;
        if (!(xi0 <= cfg.tol)) {
            err << "error: re-verification failed: deserialized ||Xi0|| = " << fmt17(xi0)
                << " exceeds tol = " << fmt17(cfg.tol) << "\n";
            return 1;
        }
    } catch (const std::exception& e) {
        err << "error: re-verification failed: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

/// verify: run the seeded property suites and print one line per suite.
inline int run_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<verify::SuiteResult> results;
    try {
        results = verify::run_all(opt.only, opt.trials, opt.seed);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (results.empty()) {
        err << "error: no verify suite matches '" << opt.only << "'\n";
        return 2;
    }
    bool all = true;
    for (const verify::SuiteResult& r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (trials=" << r.trials
            << ", failures=" << r.failures << ", max_violation=" << fmt17(r.max_violation)
            << "x tolerance)\n";
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

/// report: regularity certification of the instance's known solution as JSON.
inline int run_report(const ReportOptions& opt, std::ostream& out, std::ostream& err) {
    Instance inst;
    try {
        inst = resolve_instance(opt.instance, opt.instance_file);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (!inst.known_solution) {
        err << "error: instance '" << inst.name << "' carries no known_solution to certify\n";
        return 1;
    }
    try {
        const RegularityReport rep = full_report(*inst.oracle, *inst.known_solution);
        nlohmann::json j;
        j["instance"] = inst.name;
        j["kkt_residual"] = residual_xi0(*inst.oracle, *inst.known_solution).norm;
        j["regularity"] = regularity_to_json(rep);
        const std::string text = j.dump(2) + "\n";
        if (!opt.json_path.empty()) {
            write_text_file(opt.json_path, text);
            out << inst.name << ": report written\n";
        } else {
            out << text;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace mtsdp::cli
