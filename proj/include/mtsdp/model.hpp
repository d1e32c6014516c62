#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "mtsdp/errors.hpp"
#include "mtsdp/symmat.hpp"

namespace mtsdp {

/// Evaluation interface for the problem
///   minimize f(x)  subject to  G(x) in S^m_+,  h(x) = 0,
/// together with first and second derivatives. Evaluators must be pure
/// functions of their arguments (safe for concurrent read-only use).
///
/// second_contraction and hess_h have central finite-difference defaults
/// (step 1e-6 * (1 + ||x||)); instances with exact second derivatives
/// override them.
class ProblemOracle {
public:
    virtual ~ProblemOracle() = default;

    virtual int n() const = 0;  // primal dimension
    virtual int m() const = 0;  // matrix-constraint dimension
    virtual int s() const = 0;  // equality count

    virtual double f(const Eigen::VectorXd& x) const = 0;
    virtual Eigen::VectorXd grad_f(const Eigen::VectorXd& x) const = 0;
    virtual Eigen::MatrixXd hess_f(const Eigen::VectorXd& x) const = 0;

    virtual SymMatrix g(const Eigen::VectorXd& x) const = 0;
    /// dG/dx_i, i in [0, n).
    virtual SymMatrix g_i(const Eigen::VectorXd& x, int i) const = 0;

    /// n-by-n symmetric matrix with entries Y . d^2 G / dx_i dx_j.
    virtual Eigen::MatrixXd second_contraction(const Eigen::VectorXd& x, const SymMatrix& y) const {
        const int nn = n();
        const double step = fd_step(x);
        Eigen::MatrixXd out(nn, nn);
        for (int j = 0; j < nn; ++j) {
            Eigen::VectorXd xp = x, xm = x;
            xp(j) += step;
            xm(j) -= step;
            for (int i = 0; i < nn; ++i) {
                const SymMatrix d = g_i(xp, i) - g_i(xm, i);
                out(i, j) = inner(d, y) / (2.0 * step);
            }
        }
        return 0.5 * (out + out.transpose());
    }

    virtual Eigen::VectorXd h(const Eigen::VectorXd& x) const = 0;
    /// n-by-s matrix whose columns are the gradients of the h_k.
    virtual Eigen::MatrixXd jac_h(const Eigen::VectorXd& x) const = 0;

    /// sum_k z_k * hessian(h_k), n-by-n symmetric.
    virtual Eigen::MatrixXd hess_h(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const {
        const int nn = n();
        if (s() == 0) return Eigen::MatrixXd::Zero(nn, nn);
        const double step = fd_step(x);
        Eigen::MatrixXd out(nn, nn);
        for (int j = 0; j < nn; ++j) {
            Eigen::VectorXd xp = x, xm = x;
            xp(j) += step;
            xm(j) -= step;
            out.col(j) = (jac_h(xp) * z - jac_h(xm) * z) / (2.0 * step);
        }
        return 0.5 * (out + out.transpose());
    }

protected:
    static double fd_step(const Eigen::VectorXd& x) { return 1e-6 * (1.0 + x.norm()); }
};

/// Primal-dual triple w = (x, Y, z).
struct Iterate {
    Eigen::VectorXd x;
    SymMatrix y;
    Eigen::VectorXd z;

    /// sqrt(||x||^2 + ||Y||_F^2 + ||z||^2), the composite norm on W.
    double norm() const { return std::sqrt(x.squaredNorm() + y.mat().squaredNorm() + z.squaredNorm()); }
};

inline Iterate operator+(const Iterate& w, const Iterate& d) {
    return Iterate{w.x + d.x, w.y + d.y, w.z + d.z};
}

inline Iterate operator-(const Iterate& a, const Iterate& b) {
    return Iterate{a.x - b.x, a.y - b.y, a.z - b.z};
}

/// Membership in W_++: G(x) and Y both strictly positive definite.
inline bool is_interior(const ProblemOracle& p, const Iterate& w) {
    return is_pd(p.g(w.x)) && is_pd(w.y);
}

/// Residual value split into its three blocks. The matrix block is stored
/// as a general m-by-m matrix: the G(x)Y - mu I block is not symmetric.
struct ResidualTriple {
    Eigen::VectorXd r_x;
    Eigen::MatrixXd r_mat;
    Eigen::VectorXd r_h;
    double norm = 0.0;

    static ResidualTriple make(Eigen::VectorXd rx, Eigen::MatrixXd rmat, Eigen::VectorXd rh) {
        ResidualTriple t;
        t.norm = std::sqrt(rx.squaredNorm() + rmat.squaredNorm() + rh.squaredNorm());
        t.r_x = std::move(rx);
        t.r_mat = std::move(rmat);
        t.r_h = std::move(rh);
        return t;
    }
};

/// JG(x)* Y = (G_1(x) . Y, ..., G_n(x) . Y)^T.
inline Eigen::VectorXd adjoint_jg(const ProblemOracle& p, const Eigen::VectorXd& x, const SymMatrix& y) {
    Eigen::VectorXd out(p.n());
    for (int i = 0; i < p.n(); ++i) out(i) = inner(p.g_i(x, i), y);
    return out;
}

/// JG(x) d = sum_i d_i G_i(x).
inline SymMatrix apply_jg(const ProblemOracle& p, const Eigen::VectorXd& x, const Eigen::VectorXd& d) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p.m(), p.m());
    for (int i = 0; i < p.n(); ++i) acc += d(i) * p.g_i(x, i).mat();
    return SymMatrix(acc);
}

/// grad_x L(w) = grad f(x) - JG(x)* Y + jac_h(x) z.
inline Eigen::VectorXd grad_lagrangian(const ProblemOracle& p, const Iterate& w) {
    Eigen::VectorXd out = p.grad_f(w.x) - adjoint_jg(p, w.x, w.y);
    if (p.s() > 0) out += p.jac_h(w.x) * w.z;
    return out;
}

/// hess_xx L(w) = hess f(x) - second_contraction(x, Y) + hess_h(x, z).
inline Eigen::MatrixXd hess_lagrangian(const ProblemOracle& p, const Iterate& w) {
    Eigen::MatrixXd out = p.hess_f(w.x) - p.second_contraction(w.x, w.y);
    if (p.s() > 0) out += p.hess_h(w.x, w.z);
    return 0.5 * (out + out.transpose());
}

/// Xi residual under a given scaling: (grad_x L; Ghat^{1/2} Yhat Ghat^{1/2} - mu I; h).
/// `Scaling` must carry members g_hat_eig, g_hat_sqrt, and y_hat (see ScalingData).
template <class Scaling>
ResidualTriple residual_xi(const ProblemOracle& p, const Iterate& w, double mu, const Scaling& sc) {
    const EigenPair& ep = sc.g_hat_eig;
    if (!(ep.d(ep.d.size() - 1) > 0.0)) {
        throw NotInterior("residual_xi: scaled constraint matrix not positive definite");
    }
    Eigen::MatrixXd block = sc.g_hat_sqrt * sc.y_hat.mat() * sc.g_hat_sqrt;
    block.diagonal().array() -= mu;
    return ResidualTriple::make(grad_lagrangian(p, w), std::move(block), p.h(w.x));
}

/// Xi residual with identity scaling and mu = 0; this is the quantity the
/// termination test drives to zero. Requires G(x) in S^m_+ (clamped sqrt).
inline ResidualTriple residual_xi0(const ProblemOracle& p, const Iterate& w) {
    const Eigen::MatrixXd ghalf = sqrt_psd(p.g(w.x)).mat();
    const Eigen::MatrixXd block = ghalf * w.y.mat() * ghalf;
    return ResidualTriple::make(grad_lagrangian(p, w), block, p.h(w.x));
}

/// Phi^1_mu(w) = (grad_x L; G(x) Y - mu I; h); the matrix block is general.
inline ResidualTriple residual_phi1(const ProblemOracle& p, const Iterate& w, double mu) {
    Eigen::MatrixXd block = p.g(w.x).mat() * w.y.mat();
    block.diagonal().array() -= mu;
    return ResidualTriple::make(grad_lagrangian(p, w), std::move(block), p.h(w.x));
}

/// Phi^2_mu(w) = (grad_x L; Sym(G(x) Y) - mu I; h).
inline ResidualTriple residual_phi2(const ProblemOracle& p, const Iterate& w, double mu) {
    const Eigen::MatrixXd gy = p.g(w.x).mat() * w.y.mat();
    Eigen::MatrixXd block = 0.5 * (gy + gy.transpose());
    block.diagonal().array() -= mu;
    return ResidualTriple::make(grad_lagrangian(p, w), std::move(block), p.h(w.x));
}

/// Neighborhood N^r_mu: w in W_++ and ||Phi^1_mu(w)|| <= r.
inline bool in_neighborhood(const ProblemOracle& p, const Iterate& w, double mu, double r) {
    if (!is_interior(p, w)) return false;
    return residual_phi1(p, w, mu).norm <= r;
}

}  // namespace mtsdp
