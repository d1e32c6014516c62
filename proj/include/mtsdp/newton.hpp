#pragma once

#include <Eigen/Dense>
#include <array>
#include <limits>
#include <cmath>
#include <utility>
#include <vector>

#include "mtsdp/errors.hpp"
#include "mtsdp/model.hpp"
#include "mtsdp/scaling.hpp"
#include "mtsdp/symmat.hpp"

namespace mtsdp {

/// Search direction dw = (dx, dY, dz); dY symmetric by type.
struct Direction {
    Eigen::VectorXd dx;
    SymMatrix dy;
    Eigen::VectorXd dz;

    double norm() const {
        return std::sqrt(dx.squaredNorm() + dy.mat().squaredNorm() + dz.squaredNorm());
    }
};

inline Iterate step(const Iterate& w, double s, const Direction& d) {
    return Iterate{w.x + s * d.dx, w.y + s * d.dy, w.z + s * d.dz};
}

enum class StepMode { tangential, centering };

/// S_P^i = P^{-1} (Ghat^{1/2} Uhat_i Yhat + Ghat Yhat Uhat_i Ghat^{-1/2}) P
/// with Uhat_i the Lyapunov preimage of Ghat_i. These are the x-columns of
/// the matrix-block row of the T operator.
inline std::vector<Eigen::MatrixXd> s_matrices(const ScalingData& sc) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(sc.g_i_hat.size());
    const Eigen::MatrixXd& yh = sc.y_hat.mat();
    const Eigen::MatrixXd gy = sc.g_hat.mat() * yh;
    for (const SymMatrix& gi : sc.g_i_hat) {
        const Eigen::MatrixXd u = lyap_solve_sqrt(sc.g_hat, gi).mat();
        out.push_back(sc.p_inv * (sc.g_hat_sqrt * u * yh + gy * u * sc.g_hat_isqrt) * sc.p);
    }
    return out;
}

/// Dense realization of a Newton operator in (dx, svec(dY), dz) coordinates,
/// of order n + m(m+1)/2 + s, with its pivoted-LU factorization. Block rows:
///   [0, n)            stationarity row (hess_xx L, -JG*, jac_h)
///   [n, n + m(m+1)/2) complementarity row in svec coordinates
///   [n + ..., end)    equality row (jac_h^T)
struct NewtonSystem {
    int n = 0, m = 0, s = 0;
    Eigen::MatrixXd matrix;
    /// Tangential right side per unit mu: (0; -svec(I); 0). The RHS of the
    /// tangential equation is mu times this vector.
    Eigen::VectorXd rhs_t;
    double rcond = 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;

    int order() const { return n + svec_len(m) + s; }

    std::array<std::pair<int, const char*>, 3> row_blocks() const {
        return {{{0, "stationarity"}, {n, "complementarity"}, {n + svec_len(m), "equality"}}};
    }

    /// Solve with one step of iterative refinement.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd x = lu.solve(rhs);
        const Eigen::VectorXd r = rhs - matrix * x;
        x += lu.solve(r);
        return x;
    }
};

inline Eigen::VectorXd pack_direction(const Direction& d, int n, int m, int s) {
    Eigen::VectorXd v(n + svec_len(m) + s);
    v.head(n) = d.dx;
    v.segment(n, svec_len(m)) = svec(d.dy);
    v.tail(s) = d.dz;
    return v;
}

inline Direction unpack_direction(const Eigen::VectorXd& v, int n, int m, int s) {
    Direction d;
    d.dx = v.head(n);
    d.dy = smat(v.segment(n, svec_len(m)), m);
    d.dz = v.tail(s);
    return d;
}

namespace detail {

/// Fill the shared stationarity and equality rows plus the dY part of the
/// complementarity row (svec(Sym(G dY))). The dx-columns of the
/// complementarity row differ between the scaled operator and the plain
/// Phi^2 Jacobian and are supplied by the caller.
inline Eigen::MatrixXd operator_frame(const ProblemOracle& p, const Iterate& w,
                                      const std::vector<Eigen::MatrixXd>& comp_x_cols) {
    const int n = p.n(), m = p.m(), s = p.s();
    const int M = svec_len(m);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + M + s, n + M + s);

    a.topLeftCorner(n, n) = hess_lagrangian(p, w);
    for (int i = 0; i < n; ++i) {
        a.block(i, n, 1, M) = -svec(p.g_i(w.x, i)).transpose();
    }
    if (s > 0) {
        const Eigen::MatrixXd jh = p.jac_h(w.x);
        a.topRightCorner(n, s) = jh;
        a.bottomLeftCorner(s, n) = jh.transpose();
    }

    const SymMatrix g = p.g(w.x);
    for (int i = 0; i < n; ++i) {
        a.block(n, i, M, 1) = svec(sym_part(comp_x_cols[i]));
    }
    for (int k = 0; k < M; ++k) {
        Eigen::VectorXd ek = Eigen::VectorXd::Zero(M);
        ek(k) = 1.0;
        a.block(n, n + k, M, 1) = svec(sym_part(g.mat() * smat(ek, m).mat()));
    }
    return a;
}

inline void factorize(NewtonSystem& sys) {
    sys.lu.compute(sys.matrix);
    // rcond() misreports exactly singular inputs (a zero pivot breaks the
    // norm estimator), so the pivot ratio is checked directly as well.
    double umin = std::numeric_limits<double>::infinity(), umax = 0.0;
    for (int k = 0; k < sys.matrix.rows(); ++k) {
        const double u = std::abs(sys.lu.matrixLU()(k, k));
        umin = std::min(umin, u);
        umax = std::max(umax, u);
    }
    if (!std::isfinite(umax) || !(umin > 1e-15 * umax)) {
        throw SingularSystem("Newton system singular: pivot ratio " + std::to_string(umin) + " / " +
                             std::to_string(umax));
    }
    sys.rcond = sys.lu.rcond();
    if (!(sys.rcond > 1e-13)) {
        throw SingularSystem("Newton system near-singular: rcond = " + std::to_string(sys.rcond));
    }
}

}  // namespace detail

/// Assemble and factorize the T operator at (w, P). Throws SingularSystem
/// when the reciprocal condition estimate falls below 1e-13; near a regular
/// solution the operator stays uniformly invertible, so far-field breakdown
/// must be loud.
inline NewtonSystem assemble(const ProblemOracle& p, const Iterate& w, const ScalingData& sc) {
    NewtonSystem sys;
    sys.n = p.n();
    sys.m = p.m();
    sys.s = p.s();
    sys.matrix = detail::operator_frame(p, w, s_matrices(sc));
    sys.rhs_t = Eigen::VectorXd::Zero(sys.order());
    sys.rhs_t.segment(sys.n, svec_len(sys.m)) = -svec(SymMatrix::identity(sys.m));
    detail::factorize(sys);
    return sys;
}

/// Jacobian of Phi^2_mu with respect to w (mu-independent). At a KKT point
/// this is the limit operator of the scaled T family; it also drives the
/// central-path corrector.
inline NewtonSystem assemble_phi2_jacobian(const ProblemOracle& p, const Iterate& w) {
    NewtonSystem sys;
    sys.n = p.n();
    sys.m = p.m();
    sys.s = p.s();
    std::vector<Eigen::MatrixXd> cols;
    cols.reserve(p.n());
    for (int i = 0; i < p.n(); ++i) cols.push_back(p.g_i(w.x, i).mat() * w.y.mat());
    sys.matrix = detail::operator_frame(p, w, cols);
    sys.rhs_t = Eigen::VectorXd::Zero(sys.order());
    sys.rhs_t.segment(sys.n, svec_len(sys.m)) = -svec(SymMatrix::identity(sys.m));
    detail::factorize(sys);
    return sys;
}

/// Right side of the centering equation: (-grad_x L; svec(mu I - Sym(GY)); -h).
inline Eigen::VectorXd centering_rhs(const ProblemOracle& p, const Iterate& w, double mu) {
    const int n = p.n(), m = p.m(), s = p.s();
    Eigen::VectorXd rhs(n + svec_len(m) + s);
    rhs.head(n) = -grad_lagrangian(p, w);
    Eigen::MatrixXd block = -(p.g(w.x).mat() * w.y.mat());
    block.diagonal().array() += mu;
    rhs.segment(n, svec_len(m)) = svec(sym_part(block));
    if (s > 0) rhs.tail(s) = -p.h(w.x);
    return rhs;
}

inline Direction solve_tangential(const NewtonSystem& sys, double mu) {
    return unpack_direction(sys.solve(mu * sys.rhs_t), sys.n, sys.m, sys.s);
}

inline Direction solve_centering(const NewtonSystem& sys, const ProblemOracle& p, const Iterate& w,
                                 double mu) {
    return unpack_direction(sys.solve(centering_rhs(p, w, mu)), sys.n, sys.m, sys.s);
}

/// Tangential direction: T_{w,P}(dw) = (0; -mu svec(I); 0).
inline Direction solve_tangential(const ProblemOracle& p, const Iterate& w, double mu,
                                  const ScalingData& sc) {
    return solve_tangential(assemble(p, w, sc), mu);
}

/// Centering direction: T_{w,P}(dw) = (-grad_x L; svec(mu I - Sym(GY)); -h).
inline Direction solve_centering(const ProblemOracle& p, const Iterate& w, double mu,
                                 const ScalingData& sc) {
    return solve_centering(assemble(p, w, sc), p, w, mu);
}

/// Residual of the original scaled matrix equation
///   Ghat^{1/2} (P^{-T} dY P^{-1}) Ghat^{1/2} + U Yhat Ghat^{1/2} + Ghat^{1/2} Yhat U = RHS,
/// with U the Lyapunov preimage of sum_i dx_i Ghat_i and RHS = -mu I
/// (tangential) or mu I - Ghat^{1/2} Yhat Ghat^{1/2} (centering). A T-form
/// solution must satisfy this equation too; the acceptance threshold is
/// 1e-8 * (1 + mu sqrt(m)).
inline double cross_check_scaled(double mu, const ScalingData& sc, const Direction& d,
                                 StepMode mode) {
    const int m = sc.g_hat.dim();
    Eigen::MatrixXd dg_hat = Eigen::MatrixXd::Zero(m, m);
    for (size_t i = 0; i < sc.g_i_hat.size(); ++i) dg_hat += d.dx(static_cast<int>(i)) * sc.g_i_hat[i].mat();
    const Eigen::MatrixXd u = lyap_solve_sqrt(sc.g_hat, SymMatrix(dg_hat)).mat();
    const Eigen::MatrixXd dy_hat = sc.p_inv.transpose() * d.dy.mat() * sc.p_inv;
    const Eigen::MatrixXd& yh = sc.y_hat.mat();

    Eigen::MatrixXd lhs = sc.g_hat_sqrt * dy_hat * sc.g_hat_sqrt + u * yh * sc.g_hat_sqrt +
                          sc.g_hat_sqrt * yh * u;
    Eigen::MatrixXd rhs;
    if (mode == StepMode::tangential) {
        rhs = -mu * Eigen::MatrixXd::Identity(m, m);
    } else {
        rhs = -(sc.g_hat_sqrt * yh * sc.g_hat_sqrt);
        rhs.diagonal().array() += mu;
    }
    return (lhs - rhs).norm();
}

}  // namespace mtsdp
