#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "mtsdp/errors.hpp"

namespace mtsdp {

/// Dense real symmetric matrix with exact entrywise symmetry.
///
/// Construction symmetrizes the input through (A + A^T)/2, so
/// (*this)(i,j) == (*this)(j,i) holds bitwise. All solver-facing matrices
/// (G(x), Y, scaled variants, Newton blocks) are carried as SymMatrix;
/// general m-by-m products stay as Eigen::MatrixXd.
class SymMatrix {
public:
    SymMatrix() : mat_(Eigen::MatrixXd::Zero(1, 1)) {}

    explicit SymMatrix(const Eigen::MatrixXd& a) {
        if (a.rows() != a.cols() || a.rows() < 1) {
            throw DimensionMismatch("SymMatrix: input must be square with dim >= 1, got " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
        }
        const int m = static_cast<int>(a.rows());
        mat_.resize(m, m);
        for (int j = 0; j < m; ++j) {
            mat_(j, j) = a(j, j);
            for (int i = j + 1; i < m; ++i) {
                const double v = 0.5 * (a(i, j) + a(j, i));
                mat_(i, j) = v;
                mat_(j, i) = v;
            }
        }
    }

    static SymMatrix zero(int m) { return SymMatrix(Eigen::MatrixXd::Zero(m, m)); }
    static SymMatrix identity(int m) { return SymMatrix(Eigen::MatrixXd::Identity(m, m)); }
    static SymMatrix diagonal(const Eigen::VectorXd& d) {
        return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
    }

    int dim() const { return static_cast<int>(mat_.rows()); }
    double operator()(int i, int j) const { return mat_(i, j); }
    const Eigen::MatrixXd& mat() const { return mat_; }

    double frob() const { return mat_.norm(); }
    double trace() const { return mat_.trace(); }

    SymMatrix operator+(const SymMatrix& o) const { return wrap(mat_ + o.mat_); }
    SymMatrix operator-(const SymMatrix& o) const { return wrap(mat_ - o.mat_); }
    SymMatrix operator-() const { return wrap(-mat_); }
    SymMatrix scaled(double c) const { return wrap(c * mat_); }

private:
    // Entrywise combinations of symmetric operands are symmetric bitwise;
    // skip the symmetrizing pass.
    static SymMatrix wrap(Eigen::MatrixXd a) {
        SymMatrix s;
        s.mat_ = std::move(a);
        return s;
    }

    Eigen::MatrixXd mat_;
};

inline SymMatrix operator*(double c, const SymMatrix& a) { return a.scaled(c); }

/// Sym(A) := (A + A^T)/2 for a general square matrix.
inline SymMatrix sym_part(const Eigen::MatrixXd& a) { return SymMatrix(a); }

/// Trace inner product A . B = trace(AB) for symmetric A, B.
inline double inner(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("inner: dims differ");
    return a.mat().cwiseProduct(b.mat()).sum();
}

/// Orthogonal eigendecomposition a = q diag(d) q^T, eigenvalues descending.
struct EigenPair {
    Eigen::MatrixXd q;
    Eigen::VectorXd d;
};

inline EigenPair sym_eig(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
    if (es.info() != Eigen::Success) {
        throw Error("sym_eig: eigendecomposition iteration failed");
    }
    const int m = a.dim();
    EigenPair out;
    out.q.resize(m, m);
    out.d.resize(m);
    // Eigen returns ascending order; regression tests want descending.
    for (int k = 0; k < m; ++k) {
        out.d(k) = es.eigenvalues()(m - 1 - k);
        out.q.col(k) = es.eigenvectors().col(m - 1 - k);
    }
    return out;
}

/// q f(d) q^T for an elementwise eigenvalue map f.
template <class F>
Eigen::MatrixXd eig_apply(const EigenPair& ep, F&& f) {
    Eigen::VectorXd fd(ep.d.size());
    for (int k = 0; k < ep.d.size(); ++k) fd(k) = f(ep.d(k));
    return ep.q * fd.asDiagonal() * ep.q.transpose();
}

/// PSD square root. Eigenvalues in [-tol*scale, 0) are clamped to 0 with
/// scale = max(1, ||a||_F); anything below the clamp band signals the
/// iterate left the cone.
inline SymMatrix sqrt_psd(const SymMatrix& a, double tol = 1e-12) {
    const double scale = std::max(1.0, a.frob());
    EigenPair ep = sym_eig(a);
    const double lam_min = ep.d(ep.d.size() - 1);
    if (lam_min < -tol * scale) {
        throw NotPositiveSemidefinite("sqrt_psd: lambda_min = " + std::to_string(lam_min) +
                                      " below clamp band " + std::to_string(-tol * scale));
    }
    return SymMatrix(eig_apply(ep, [](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; }));
}

/// Smallest eigenvalue of a symmetric matrix.
inline double min_eig(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw Error("min_eig: eigendecomposition iteration failed");
    }
    return es.eigenvalues()(0);
}

/// Strict positive-definiteness test by attempted Cholesky factorization.
/// No shift, no fudge margin: matches membership in S^m_++ up to rounding.
inline bool is_pd(const SymMatrix& a) {
    Eigen::LLT<Eigen::MatrixXd> llt(a.mat());
    return llt.info() == Eigen::Success;
}

/// Solves U g^{1/2} + g^{1/2} U = b for the Gateaux differential U of the
/// matrix square root. Componentwise in the eigenbasis of g:
///   U = Q M Q^T,  M_pq = (Q^T b Q)_pq / (d_p^{1/2} + d_q^{1/2}).
/// Requires lambda_min(g) > pd_tol; the operator is not invertible at the
/// cone boundary. pd_tol < 0 selects the default 1e-13 * trace(g).
inline SymMatrix lyap_solve_sqrt(const SymMatrix& g, const SymMatrix& b, double pd_tol = -1.0) {
    if (g.dim() != b.dim()) throw DimensionMismatch("lyap_solve_sqrt: dims differ");
    if (pd_tol < 0.0) pd_tol = 1e-13 * g.trace();
    EigenPair ep = sym_eig(g);
    const int m = g.dim();
    const double lam_min = ep.d(m - 1);
    if (!(lam_min > pd_tol)) {
        throw NotPositiveDefinite("lyap_solve_sqrt: lambda_min(g) = " + std::to_string(lam_min) +
                                  " <= pd_tol = " + std::to_string(pd_tol));
    }
    Eigen::VectorXd sd(m);
    for (int k = 0; k < m; ++k) sd(k) = std::sqrt(ep.d(k));
    Eigen::MatrixXd bq = ep.q.transpose() * b.mat() * ep.q;
    Eigen::MatrixXd u(m, m);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) u(p, q) = bq(p, q) / (sd(p) + sd(q));
    return SymMatrix(ep.q * u * ep.q.transpose());
}

/// Smallest denominator d_p^{1/2} + d_q^{1/2} the solve above would divide
/// by; surfaced as a conditioning diagnostic along the central path.
inline double lyap_denominator_min(const EigenPair& ep) {
    const double d_min = ep.d(ep.d.size() - 1);
    return d_min > 0.0 ? 2.0 * std::sqrt(d_min) : 0.0;
}

inline int svec_len(int m) { return m * (m + 1) / 2; }

/// Packed lower-triangle position of entry (i, j), i >= j, column-major.
inline int svec_index(int i, int j, int m) { return j * m - j * (j - 1) / 2 + (i - j); }

/// Symmetric vectorization with sqrt(2)-scaled off-diagonals, so that
/// svec(A) . svec(B) = A . B.
inline Eigen::VectorXd svec(const SymMatrix& a) {
    const int m = a.dim();
    const double rt2 = std::sqrt(2.0);
    Eigen::VectorXd v(svec_len(m));
    int k = 0;
    for (int j = 0; j < m; ++j) {
        v(k++) = a(j, j);
        for (int i = j + 1; i < m; ++i) v(k++) = rt2 * a(i, j);
    }
    return v;
}

/// Inverse of svec. Off-diagonals divide by sqrt(2); the roundtrip
/// smat(svec(A)) reproduces A up to one ulp per off-diagonal entry (the
/// sqrt(2) scaling is not losslessly invertible in binary floating point).
inline SymMatrix smat(const Eigen::VectorXd& v, int m) {
    if (v.size() != svec_len(m)) {
        throw DimensionMismatch("smat: vector length " + std::to_string(v.size()) +
                                " != m(m+1)/2 = " + std::to_string(svec_len(m)));
    }
    const double rt2 = std::sqrt(2.0);
    Eigen::MatrixXd a(m, m);
    int k = 0;
    for (int j = 0; j < m; ++j) {
        a(j, j) = v(k++);
        for (int i = j + 1; i < m; ++i) {
            const double x = v(k++) / rt2;
            a(i, j) = x;
            a(j, i) = x;
        }
    }
    return SymMatrix(a);
}

/// Both sides of the Frobenius identity
///   ||ABA - mu I||_F^2 + ||A^2 B - B A^2||_F^2 / 2 = ||A^2 B - mu I||_F^2
/// for symmetric A, B. Returned as (lhs, rhs) so callers can assert the gap.
inline std::pair<double, double> lemma_dx_gap(const SymMatrix& a, const SymMatrix& b, double mu) {
    if (a.dim() != b.dim()) throw DimensionMismatch("lemma_dx_gap: dims differ");
    const int m = a.dim();
    const Eigen::MatrixXd& A = a.mat();
    const Eigen::MatrixXd& B = b.mat();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd aba = A * B * A - mu * I;
    const Eigen::MatrixXd a2b = A * A * B;
    const Eigen::MatrixXd comm = a2b - a2b.transpose();  // A^2 B - B A^2
    const double lhs = aba.squaredNorm() + 0.5 * comm.squaredNorm();
    const double rhs = (a2b - mu * I).squaredNorm();
    return {lhs, rhs};
}

}  // namespace mtsdp
