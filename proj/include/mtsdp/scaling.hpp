#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mtsdp/errors.hpp"
#include "mtsdp/model.hpp"
#include "mtsdp/symmat.hpp"

namespace mtsdp {

/// Members of the scaling family. Identity is the pure (unscaled) choice;
/// the other four make the scaled matrices Ghat and Yhat commute.
enum class ScalingKind { identity, hkm, nt, hkm_dual, mtw };

inline const char* scaling_name(ScalingKind k) {
    switch (k) {
        case ScalingKind::identity: return "identity";
        case ScalingKind::hkm: return "hkm";
        case ScalingKind::nt: return "nt";
        case ScalingKind::hkm_dual: return "hkm-dual";
        case ScalingKind::mtw: return "mtw";
    }
    return "?";
}

inline ScalingKind parse_scaling(const std::string& name) {
    if (name == "identity") return ScalingKind::identity;
    if (name == "hkm") return ScalingKind::hkm;
    if (name == "nt") return ScalingKind::nt;
    if (name == "hkm-dual") return ScalingKind::hkm_dual;
    if (name == "mtw") return ScalingKind::mtw;
    throw ConfigError("unknown scaling kind '" + name +
                      "' (expected identity|hkm|nt|hkm-dual|mtw)");
}

/// Scaled quantities cached at one iterate:
///   Ghat = P G(x) P^T,  Yhat = P^{-T} Y P^{-1},  Ghat_i = P G_i(x) P^T,
/// plus the eigendecomposition of Ghat and its +-1/2 powers.
struct ScalingData {
    ScalingKind kind = ScalingKind::identity;
    Eigen::MatrixXd p;
    Eigen::MatrixXd p_inv;
    SymMatrix g_hat;
    SymMatrix y_hat;
    EigenPair g_hat_eig;
    Eigen::MatrixXd g_hat_sqrt;
    Eigen::MatrixXd g_hat_isqrt;
    std::vector<SymMatrix> g_i_hat;
};

namespace detail {

/// K^power for symmetric positive definite K via eigendecomposition.
inline Eigen::MatrixXd spd_power(const SymMatrix& k, double power, const char* who) {
    EigenPair ep = sym_eig(k);
    if (!(ep.d(ep.d.size() - 1) > 0.0)) {
        throw NotInterior(std::string(who) + ": matrix not strictly positive definite");
    }
    return eig_apply(ep, [power](double v) { return std::pow(v, power); });
}

}  // namespace detail

/// Construct the scaling matrix P for the requested family member at an
/// interior iterate, and cache all scaled quantities. P and its inverse are
/// both formed from one eigendecomposition per matrix power.
inline ScalingData make_scaling(ScalingKind kind, const ProblemOracle& p_oracle, const Iterate& w) {
    const SymMatrix g = p_oracle.g(w.x);
    if (!is_pd(g)) throw NotInterior("make_scaling: G(x) fails the strict PD test");
    if (!is_pd(w.y)) throw NotInterior("make_scaling: Y fails the strict PD test");
    const int m = p_oracle.m();

    ScalingData sc;
    sc.kind = kind;
    switch (kind) {
        case ScalingKind::identity: {
            sc.p = Eigen::MatrixXd::Identity(m, m);
            sc.p_inv = sc.p;
            break;
        }
        case ScalingKind::hkm: {
            // P = G(x)^{-1/2}
            EigenPair ep = sym_eig(g);
            if (!(ep.d(m - 1) > 0.0)) throw NotInterior("make_scaling: G(x) not PD");
            sc.p = eig_apply(ep, [](double v) { return 1.0 / std::sqrt(v); });
            sc.p_inv = eig_apply(ep, [](double v) { return std::sqrt(v); });
            break;
        }
        case ScalingKind::nt: {
            // P = Y^{1/2}
            EigenPair ep = sym_eig(w.y);
            if (!(ep.d(m - 1) > 0.0)) throw NotInterior("make_scaling: Y not PD");
            sc.p = eig_apply(ep, [](double v) { return std::sqrt(v); });
            sc.p_inv = eig_apply(ep, [](double v) { return 1.0 / std::sqrt(v); });
            break;
        }
        case ScalingKind::hkm_dual: {
            // P = (Y G(x) Y)^{1/2}
            const SymMatrix k = SymMatrix(w.y.mat() * g.mat() * w.y.mat());
            EigenPair ep = sym_eig(k);
            if (!(ep.d(m - 1) > 0.0)) throw NotInterior("make_scaling: Y G Y not PD");
            sc.p = eig_apply(ep, [](double v) { return std::sqrt(v); });
            sc.p_inv = eig_apply(ep, [](double v) { return 1.0 / std::sqrt(v); });
            break;
        }
        case ScalingKind::mtw: {
            // P = W^{-1/2}, W = G^{1/2} (G^{1/2} Y G^{1/2})^{-1/2} G^{1/2}
            const Eigen::MatrixXd ghalf = detail::spd_power(g, 0.5, "make_scaling(mtw)");
            const Eigen::MatrixXd inner_isqrt =
                detail::spd_power(SymMatrix(ghalf * w.y.mat() * ghalf), -0.5, "make_scaling(mtw)");
            const SymMatrix wmat = SymMatrix(ghalf * inner_isqrt * ghalf);
            EigenPair ep = sym_eig(wmat);
            if (!(ep.d(m - 1) > 0.0)) throw NotInterior("make_scaling: W not PD");
            sc.p = eig_apply(ep, [](double v) { return 1.0 / std::sqrt(v); });
            sc.p_inv = eig_apply(ep, [](double v) { return std::sqrt(v); });
            break;
        }
    }

    sc.g_hat = SymMatrix(sc.p * g.mat() * sc.p.transpose());
    sc.y_hat = SymMatrix(sc.p_inv.transpose() * w.y.mat() * sc.p_inv);
    sc.g_hat_eig = sym_eig(sc.g_hat);
    if (!(sc.g_hat_eig.d(m - 1) > 0.0)) {
        throw NotInterior("make_scaling: scaled Ghat lost positive definiteness");
    }
    sc.g_hat_sqrt = eig_apply(sc.g_hat_eig, [](double v) { return std::sqrt(v); });
    sc.g_hat_isqrt = eig_apply(sc.g_hat_eig, [](double v) { return 1.0 / std::sqrt(v); });
    sc.g_i_hat.reserve(p_oracle.n());
    for (int i = 0; i < p_oracle.n(); ++i) {
        sc.g_i_hat.emplace_back(sc.p * p_oracle.g_i(w.x, i).mat() * sc.p.transpose());
    }
    return sc;
}

/// ||Ghat Yhat - Yhat Ghat||_F. Zero (to rounding) for the four commuting
/// members; identity scaling commutes only on the central path.
inline double commutation_check(const ScalingData& sc) {
    const Eigen::MatrixXd gy = sc.g_hat.mat() * sc.y_hat.mat();
    return (gy - gy.transpose()).norm();
}

/// Boundedness diagnostics Z_i = mu P^{-1} L^{-1}_{Ghat^{1/2}}(Ghat_i) Ghat^{-1/2} P.
/// Monitored along a run; the theory requires sup_i ||Z_i|| bounded as mu -> 0.
inline std::vector<Eigen::MatrixXd> z_matrices(const ScalingData& sc, double mu) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(sc.g_i_hat.size());
    for (const SymMatrix& gi : sc.g_i_hat) {
        const SymMatrix u = lyap_solve_sqrt(sc.g_hat, gi);
        out.push_back(mu * sc.p_inv * u.mat() * sc.g_hat_isqrt * sc.p);
    }
    return out;
}

inline double z_max_norm(const ScalingData& sc, double mu) {
    double zmax = 0.0;
    for (const Eigen::MatrixXd& z : z_matrices(sc, mu)) zmax = std::max(zmax, z.norm());
    return zmax;
}

}  // namespace mtsdp
