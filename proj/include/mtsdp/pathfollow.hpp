#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mtsdp/errors.hpp"
#include "mtsdp/model.hpp"
#include "mtsdp/newton.hpp"
#include "mtsdp/scaling.hpp"

namespace mtsdp {

/// Constants of the path-following driver. alpha, xi, xi_prime must satisfy
///   (xi - alpha) / (1 + alpha) > xi_prime > xi / 2   and   0 < alpha < xi / (xi + 2);
/// validate() rejects violations and returns soft warnings (e.g. xi outside
/// the admissible range of the selected scaling member).
struct SolverConfig {
    double alpha = 0.1;
    double beta = 0.5;
    double gamma = 1.0;
    double xi = 0.5;
    double xi_prime = 1.0 / 3.0;
    double tau = 10.0;
    ScalingKind scaling = ScalingKind::hkm;
    double tol = 1e-10;
    int max_iters = 200;
    int max_backtracks = 60;
    double mu_floor = 1e-14;

    /// Optional per-iteration scaling selection; when unset the fixed
    /// `scaling` member is used for every step.
    std::function<ScalingKind(const Iterate& w, double mu, int k)> scaling_selector;

    std::vector<std::string> validate() const {
        auto fail = [](const std::string& ineq) {
            throw ConfigError("solver constants violate the step-size condition: " + ineq);
        };
        if (!(alpha > 0.0 && alpha < 1.0)) fail("0 < alpha < 1");
        if (!(beta > 0.0 && beta < 1.0)) fail("0 < beta < 1");
        if (!(gamma > 0.0)) fail("gamma > 0");
        if (!(xi > 0.0 && xi < 1.0)) fail("0 < xi < 1");
        if (!(tau > 0.0)) fail("tau > 0");
        if (!(alpha < xi / (xi + 2.0))) fail("alpha < xi/(xi + 2)");
        if (!((xi - alpha) / (1.0 + alpha) > xi_prime)) fail("(xi - alpha)/(1 + alpha) > xi_prime");
        if (!(xi_prime > 0.5 * xi)) fail("xi_prime > xi/2");
        if (!(tol > 0.0)) fail("tol > 0");
        if (max_iters < 0 || max_backtracks < 0) fail("max_iters, max_backtracks >= 0");

        std::vector<std::string> warnings;
        const bool needs_half = scaling == ScalingKind::nt || scaling == ScalingKind::hkm_dual ||
                                scaling == ScalingKind::mtw;
        if (needs_half && xi < 0.5) {
            warnings.push_back(std::string("xi = ") + std::to_string(xi) + " is outside [1/2, 1), the admissible range for the " +
                               scaling_name(scaling) + " scaling; boundedness of the Z_i diagnostics is not guaranteed");
        }
        return warnings;
    }

    ScalingKind kind_at(const Iterate& w, double mu, int k) const {
        return scaling_selector ? scaling_selector(w, mu, k) : scaling;
    }
};

/// Per-iteration record. mu is the barrier value driving iteration k, mu_next
/// the updated value; phi1_* are Phi^1 norms at w^k (w.r.t. mu), at the half
/// point and at w^{k+1} (both w.r.t. mu_next).
struct TraceRecord {
    int k = 0;
    double mu = 0.0;
    double mu_next = 0.0;
    double s_t = 0.0;
    double s_c = 0.0;
    int bt_t = 0;  // smallest feasible backtrack exponent of the tangential step
    int bt_c = 0;  // same for the centering step
    double phi1_pre = 0.0;
    double phi1_half = 0.0;
    double phi1_next = 0.0;
    double xi0_next = 0.0;
    double min_eig_g = 0.0;
    double min_eig_y = 0.0;
    double zmax = 0.0;
    double rcond_t = 0.0;
    double rcond_c = 0.0;
    double lyap_denom_min = 0.0;
    Iterate w_half;
    Iterate w_next;
};

struct Trace {
    Iterate w0;
    double mu0 = 0.0;
    std::vector<TraceRecord> records;
};

enum class Status { converged, max_iters, failed };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::converged: return "Converged";
        case Status::max_iters: return "MaxIters";
        case Status::failed: return "Failed";
    }
    return "?";
}

struct RunResult {
    Status status = Status::failed;
    std::string reason;
    Iterate w_final;
    Trace trace;
    double final_xi0 = std::numeric_limits<double>::quiet_NaN();
};

/// mu_0 = gamma * ||Xi^I_0(w0)||.
inline double initial_mu(const ProblemOracle& p, const Iterate& w0, double gamma) {
    if (!is_interior(p, w0)) throw NotInterior("initial_mu: w0 is not strictly interior");
    return gamma * residual_xi0(p, w0).norm;
}

/// Find the smallest ell >= 0 such that w + beta^ell s_init d stays strictly
/// interior, and return (beta^ell * s_init, ell). The PD test is a plain
/// Cholesky attempt with zero shift so the count matches the S^m_++
/// membership the update rule is defined with.
inline std::pair<double, int> backtrack_pd(const ProblemOracle& p, const Iterate& w,
                                           const Direction& d, double s_init, double beta,
                                           int max_bt) {
    double s = s_init;
    for (int count = 0; count <= max_bt; ++count) {
        const Iterate trial = step(w, s, d);
        if (is_pd(p.g(trial.x)) && is_pd(trial.y)) return {s, count};
        s *= beta;
    }
    throw BacktrackExhausted("backtrack_pd: no interior step within " + std::to_string(max_bt) +
                             " backtracks");
}

struct TangentialResult {
    Iterate w_half;
    double mu_next = 0.0;
    double s_t = 0.0;
    int backtracks = 0;
    double rcond = 0.0;
    double zmax = 0.0;
    double lyap_denom_min = 0.0;
};

/// Tangential step: solve at (w, mu, P), take s_t = beta^ell (1 - min(0.95, mu)^alpha),
/// and update the barrier to mu_next = (1 - s_t) mu. With no backtracking and
/// mu < 0.95 this reproduces mu_next = mu^{1+alpha} exactly.
inline TangentialResult tangential_phase(const ProblemOracle& p, const Iterate& w, double mu,
                                         const SolverConfig& cfg, int k = 0) {
    const ScalingData sc = make_scaling(cfg.kind_at(w, mu, k), p, w);
    const NewtonSystem sys = assemble(p, w, sc);
    const Direction d = solve_tangential(sys, mu);
    const double s_base = 1.0 - std::pow(std::min(0.95, mu), cfg.alpha);
    auto [s_t, count] = backtrack_pd(p, w, d, s_base, cfg.beta, cfg.max_backtracks);

    TangentialResult out;
    out.w_half = step(w, s_t, d);
    // (1 - s_t) mu equals mu^{1+alpha} when no backtracking occurred and the
    // 0.95 clamp is inactive; evaluating the power directly keeps the exact
    // barrier recursion to the last ulp.
    out.mu_next = (count == 0 && mu < 0.95) ? std::pow(mu, 1.0 + cfg.alpha) : (1.0 - s_t) * mu;
    out.s_t = s_t;
    out.backtracks = count;
    out.rcond = sys.rcond;
    out.zmax = z_max_norm(sc, mu);
    out.lyap_denom_min = lyap_denominator_min(sc.g_hat_eig);
    return out;
}

struct CenteringResult {
    Iterate w_next;
    double s_c = 0.0;
    int backtracks = 0;
    double rcond = 0.0;
};

/// Centering step at the updated barrier value: full step when it keeps the
/// iterate interior, otherwise the largest beta^m fraction that does.
inline CenteringResult centering_phase(const ProblemOracle& p, const Iterate& w_half,
                                       double mu_next, const SolverConfig& cfg, int k = 0) {
    const ScalingData sc = make_scaling(cfg.kind_at(w_half, mu_next, k), p, w_half);
    const NewtonSystem sys = assemble(p, w_half, sc);
    const Direction d = solve_centering(sys, p, w_half, mu_next);
    auto [s_c, count] = backtrack_pd(p, w_half, d, 1.0, cfg.beta, cfg.max_backtracks);

    CenteringResult out;
    out.w_next = step(w_half, s_c, d);
    out.s_c = s_c;
    out.backtracks = count;
    out.rcond = sys.rcond;
    return out;
}

/// Full driver. Every failure mode is returned in the status, never thrown
/// past this boundary and never silent.
inline RunResult run(const ProblemOracle& p, const Iterate& w0, const SolverConfig& cfg) {
    RunResult res;
    res.trace.w0 = w0;
    try {
        cfg.validate();
        double mu = initial_mu(p, w0, cfg.gamma);
        res.trace.mu0 = mu;
        Iterate w = w0;
        res.final_xi0 = residual_xi0(p, w).norm;
        if (res.final_xi0 <= cfg.tol) {
            res.status = Status::converged;
            res.w_final = w;
            return res;
        }
        for (int k = 0; k < cfg.max_iters; ++k) {
            TraceRecord rec;
            rec.k = k;
            rec.mu = mu;
            rec.phi1_pre = residual_phi1(p, w, mu).norm;

            TangentialResult t = tangential_phase(p, w, mu, cfg, k);
            rec.s_t = t.s_t;
            rec.bt_t = t.backtracks;
            rec.mu_next = t.mu_next;
            rec.rcond_t = t.rcond;
            rec.zmax = t.zmax;
            rec.lyap_denom_min = t.lyap_denom_min;
            rec.phi1_half = residual_phi1(p, t.w_half, t.mu_next).norm;
            rec.w_half = t.w_half;

            CenteringResult c = centering_phase(p, t.w_half, t.mu_next, cfg, k);
            rec.s_c = c.s_c;
            rec.bt_c = c.backtracks;
            rec.rcond_c = c.rcond;
            rec.phi1_next = residual_phi1(p, c.w_next, t.mu_next).norm;
            rec.xi0_next = residual_xi0(p, c.w_next).norm;
            rec.min_eig_g = min_eig(p.g(c.w_next.x));
            rec.min_eig_y = min_eig(c.w_next.y);
            rec.w_next = c.w_next;
            res.trace.records.push_back(std::move(rec));

            w = c.w_next;
            mu = t.mu_next;
            res.final_xi0 = res.trace.records.back().xi0_next;
            res.w_final = w;
            if (res.final_xi0 <= cfg.tol) {
                res.status = Status::converged;
                return res;
            }
            if (mu <= cfg.mu_floor) {
                res.status = Status::failed;
                res.reason = "barrier parameter reached mu_floor = " + std::to_string(cfg.mu_floor) +
                             " before the residual tolerance";
                return res;
            }
        }
        res.status = Status::max_iters;
        res.reason = "no convergence within " + std::to_string(cfg.max_iters) + " iterations";
        res.w_final = w;
    } catch (const Error& e) {
        res.status = Status::failed;
        res.reason = e.what();
    }
    return res;
}

/// Least-squares slope of log ||w^{k+1} - w*|| against log ||w^k - w*|| over
/// the trailing records whose errors sit above 100 * machine epsilon. A slope
/// of q estimates convergence order q.
inline double estimate_order(const Trace& trace, const Iterate& w_star) {
    std::vector<double> err;
    err.push_back((trace.w0 - w_star).norm());
    for (const TraceRecord& rec : trace.records) err.push_back((rec.w_next - w_star).norm());

    const double cutoff = 100.0 * std::numeric_limits<double>::epsilon();
    std::vector<std::pair<double, double>> pts;
    for (size_t k = 0; k + 1 < err.size(); ++k) {
        if (err[k] > cutoff && err[k + 1] > cutoff) {
            pts.emplace_back(std::log(err[k]), std::log(err[k + 1]));
        }
    }
    if (pts.size() < 3) {
        throw InsufficientData("estimate_order: need at least 3 usable error pairs, have " +
                               std::to_string(pts.size()));
    }
    double su = 0.0, sv = 0.0;
    for (auto& [u, v] : pts) {
        su += u;
        sv += v;
    }
    const double ubar = su / pts.size(), vbar = sv / pts.size();
    double num = 0.0, den = 0.0;
    for (auto& [u, v] : pts) {
        num += (u - ubar) * (v - vbar);
        den += (u - ubar) * (u - ubar);
    }
    if (den == 0.0) throw InsufficientData("estimate_order: degenerate error sequence");
    return num / den;
}

}  // namespace mtsdp
