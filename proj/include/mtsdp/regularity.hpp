#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mtsdp/errors.hpp"
#include "mtsdp/model.hpp"
#include "mtsdp/newton.hpp"
#include "mtsdp/symmat.hpp"

namespace mtsdp {

/// Empirical certification of the three regularity conditions at a candidate
/// solution. Margins are the raw quantities the booleans are thresholded on.
struct RegularityReport {
    int rank_g = 0;
    bool nondegenerate = false;
    double nondegeneracy_margin = 0.0;  // sigma_min / sigma_max of the test matrix
    bool strict_complementarity = false;
    double complementarity_lambda_min = 0.0;  // lambda_min(G(x*) + Y*)
    bool sosc = false;
    double sosc_lambda_min = 0.0;  // lambda_min of the projected curvature matrix
    int critical_dim = 0;
    std::string details;
};

namespace detail {

/// Split the spectrum of G(x*) at the rank cutoff 1e-8 * lambda_max.
/// RankAmbiguous when kept and cut eigenvalues are separated by less than a
/// factor 10: the rank is discrete, the numerics are not.
struct RankSplit {
    int rank = 0;
    EigenPair eig;                // descending
    Eigen::MatrixXd null_basis;   // m x (m - rank), eigenvectors of the cut part
    Eigen::MatrixXd pinv;         // Moore-Penrose inverse by eigen-truncation
    double cutoff = 0.0;
};

inline RankSplit rank_split(const SymMatrix& gstar) {
    RankSplit out;
    out.eig = sym_eig(gstar);
    const int m = gstar.dim();
    const double lam_max = out.eig.d(0);
    out.cutoff = lam_max > 0.0 ? 1e-8 * lam_max : 0.0;

    int rank = 0;
    while (rank < m && out.eig.d(rank) > out.cutoff) ++rank;
    out.rank = rank;
    if (rank > 0 && rank < m) {
        const double smallest_kept = out.eig.d(rank - 1);
        const double largest_cut = std::abs(out.eig.d(rank));
        if (largest_cut > 0.0 && smallest_kept < 10.0 * largest_cut) {
            throw RankAmbiguous("rank of G(x*) ambiguous: eigenvalue gap " +
                                std::to_string(smallest_kept) + " vs " + std::to_string(largest_cut) +
                                " is below a decade around cutoff " + std::to_string(out.cutoff));
        }
    }
    out.null_basis = out.eig.q.rightCols(m - rank);
    Eigen::VectorXd dinv = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < rank; ++k) dinv(k) = 1.0 / out.eig.d(k);
    out.pinv = out.eig.q * dinv.asDiagonal() * out.eig.q.transpose();
    return out;
}

/// Rows are v_ij^T for 1 <= i <= j <= m - r* followed by jac_h^T: the
/// constraint matrix whose kernel realizes the critical cone under strict
/// complementarity, and whose transpose is the nondegeneracy test matrix.
inline Eigen::MatrixXd active_constraint_rows(const ProblemOracle& p, const Iterate& w_star,
                                              const RankSplit& split) {
    const int n = p.n(), s = p.s();
    const int null_dim = static_cast<int>(split.null_basis.cols());
    const int pairs = null_dim * (null_dim + 1) / 2;
    Eigen::MatrixXd rows(pairs + s, n);
    std::vector<SymMatrix> gi;
    gi.reserve(n);
    for (int t = 0; t < n; ++t) gi.push_back(p.g_i(w_star.x, t));

    int r = 0;
    for (int i = 0; i < null_dim; ++i) {
        for (int j = i; j < null_dim; ++j) {
            const Eigen::VectorXd ei = split.null_basis.col(i);
            const Eigen::VectorXd ej = split.null_basis.col(j);
            for (int t = 0; t < n; ++t) rows(r, t) = ei.dot(gi[t].mat() * ej);
            ++r;
        }
    }
    if (s > 0) rows.bottomRows(s) = p.jac_h(w_star.x).transpose();
    return rows;
}

inline Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& rows, int n) {
    if (rows.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
    const double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    const double cut = std::max(1e-10 * smax, 1e-14);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k) {
        if (svd.singularValues()(k) > cut) ++rank;
    }
    return svd.matrixV().rightCols(n - rank);
}

}  // namespace detail

/// Linear independence of the vectors v_ij (built from an orthonormal null
/// basis of G(x*)) together with the gradients of h. Returns the boolean and
/// the margin sigma_min / sigma_max of the stacked test matrix.
inline std::pair<bool, double> check_nondegeneracy(const ProblemOracle& p, const Iterate& w_star,
                                                   double tol = 1e-8) {
    const detail::RankSplit split = detail::rank_split(p.g(w_star.x));
    const Eigen::MatrixXd cols = detail::active_constraint_rows(p, w_star, split).transpose();
    if (cols.cols() == 0) return {true, std::numeric_limits<double>::infinity()};
    if (cols.cols() > cols.rows()) return {false, 0.0};  // more vectors than dimensions
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smax <= 0.0) return {false, 0.0};
    const double margin = smin / smax;
    return {margin > tol, margin};
}

/// lambda_min(G(x*) + Y*) and its strict positivity.
inline std::pair<bool, double> check_strict_complementarity(const ProblemOracle& p,
                                                            const Iterate& w_star) {
    const double lam = min_eig(p.g(w_star.x) + w_star.y);
    return {lam > 0.0, lam};
}

/// Positive definiteness of hess_xx L(w*) + H(x*, Y*) on the critical cone,
/// realized as a subspace (valid under strict complementarity):
///   H_ij = 2 Y* . G_i(x*) pinv(G(x*)) G_j(x*),
///   C(x*) = { d : jac_h(x*)^T d = 0, v_ij . d = 0 }.
/// Returns lambda_min of the projected matrix and positivity at tol; a
/// zero-dimensional cone is vacuously positive definite.
inline std::pair<bool, double> check_sosc(const ProblemOracle& p, const Iterate& w_star,
                                          double tol = 1e-9) {
    const int n = p.n();
    const detail::RankSplit split = detail::rank_split(p.g(w_star.x));

    Eigen::MatrixXd hmat(n, n);
    std::vector<SymMatrix> gi;
    gi.reserve(n);
    for (int t = 0; t < n; ++t) gi.push_back(p.g_i(w_star.x, t));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            hmat(i, j) = 2.0 * (w_star.y.mat() * gi[i].mat() * split.pinv * gi[j].mat()).trace();
        }
    }
    hmat = 0.5 * (hmat + hmat.transpose());

    const Eigen::MatrixXd curvature = hess_lagrangian(p, w_star) + hmat;
    const Eigen::MatrixXd kernel =
        detail::kernel_basis(detail::active_constraint_rows(p, w_star, split), n);
    if (kernel.cols() == 0) return {true, std::numeric_limits<double>::infinity()};

    const SymMatrix projected = SymMatrix(kernel.transpose() * curvature * kernel);
    const double lam = min_eig(projected);
    const double scale = std::max(1.0, projected.frob());
    return {lam > tol * scale, lam};
}

/// Run all three checks. When strict complementarity fails the subspace
/// realization of the critical cone is invalid; sosc is then reported false
/// with an explanatory note instead of a misleading margin.
inline RegularityReport full_report(const ProblemOracle& p, const Iterate& w_star) {
    RegularityReport rep;
    std::ostringstream details;
    const detail::RankSplit split = detail::rank_split(p.g(w_star.x));
    rep.rank_g = split.rank;

    auto [nd, nd_margin] = check_nondegeneracy(p, w_star);
    rep.nondegenerate = nd;
    rep.nondegeneracy_margin = nd_margin;

    auto [sc, sc_lam] = check_strict_complementarity(p, w_star);
    rep.strict_complementarity = sc;
    rep.complementarity_lambda_min = sc_lam;

    rep.critical_dim = static_cast<int>(
        detail::kernel_basis(detail::active_constraint_rows(p, w_star, split), p.n()).cols());
    if (sc) {
        auto [ok, lam] = check_sosc(p, w_star);
        rep.sosc = ok;
        rep.sosc_lambda_min = lam;
    } else {
        rep.sosc = false;
        rep.sosc_lambda_min = std::numeric_limits<double>::quiet_NaN();
        details << "strict complementarity fails: general tangent-cone second-order check not "
                   "performed (subspace realization invalid); ";
    }
    details << "rank cutoff " << split.cutoff << ", critical subspace dimension " << rep.critical_dim;
    rep.details = details.str();
    return rep;
}

/// Newton corrector for Phi^2_mu(v) = 0 with step halving until the residual
/// decreases and the iterate stays interior. Returns the barrier point v(mu)
/// with ||Phi^2_mu(v)|| <= tol (default 1e-12 * (1 + mu)). newton_steps, when
/// given, receives the number of accepted Newton iterations.
inline Iterate central_path_point(const ProblemOracle& p, double mu, const Iterate& w_init,
                                  double tol = -1.0, int* newton_steps = nullptr) {
    if (tol < 0.0) tol = 1e-12 * (1.0 + mu);
    if (!is_interior(p, w_init)) throw NotInterior("central_path_point: w_init not interior");

    Iterate v = w_init;
    double res = residual_phi2(p, v, mu).norm;
    for (int it = 0; it < 50; ++it) {
        if (newton_steps) *newton_steps = it;
        if (res <= tol) return v;
        const NewtonSystem sys = assemble_phi2_jacobian(p, v);
        const ResidualTriple r = residual_phi2(p, v, mu);
        Eigen::VectorXd rhs(sys.order());
        rhs.head(sys.n) = -r.r_x;
        rhs.segment(sys.n, svec_len(sys.m)) = -svec(sym_part(r.r_mat));
        if (sys.s > 0) rhs.tail(sys.s) = -r.r_h;
        const Direction d = unpack_direction(sys.solve(rhs), sys.n, sys.m, sys.s);

        double t = 1.0;
        bool accepted = false;
        while (t >= 1e-12) {
            const Iterate trial = step(v, t, d);
            if (is_pd(p.g(trial.x)) && is_pd(trial.y)) {
                const double trial_res = residual_phi2(p, trial, mu).norm;
                if (trial_res < res) {
                    v = trial;
                    res = trial_res;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) {
            throw NoConvergence("central_path_point: damped step stalled at residual " +
                                std::to_string(res));
        }
    }
    if (res <= tol) return v;
    throw NoConvergence("central_path_point: residual " + std::to_string(res) +
                        " above tol after 50 Newton steps");
}

/// Continuation helper: walk the barrier parameter geometrically from a value
/// matched to the hint down to mu_target, warm-starting each corrector solve.
inline Iterate central_path_ladder(const ProblemOracle& p, const Iterate& interior_hint,
                                   double mu_target, double ratio = 0.4) {
    if (!(mu_target > 0.0)) throw ConfigError("central_path_ladder: mu_target must be positive");
    const SymMatrix g = p.g(interior_hint.x);
    double mu = inner(g, interior_hint.y) / p.m();  // duality-gap heuristic
    mu = std::max(mu, mu_target);
    Iterate v = central_path_point(p, mu, interior_hint);
    while (mu > mu_target) {
        mu = std::max(mu_target, mu * ratio);
        v = central_path_point(p, mu, v);
    }
    return v;
}

}  // namespace mtsdp
