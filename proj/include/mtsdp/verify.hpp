#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mtsdp/instances.hpp"
#include "mtsdp/model.hpp"
#include "mtsdp/scaling.hpp"
#include "mtsdp/symmat.hpp"

namespace mtsdp::verify {

/// Outcome of one property suite. violation is normalized by the suite's
/// tolerance, so passed == (max_violation <= 1).
struct SuiteResult {
    std::string name;
    int trials = 0;
    int failures = 0;
    double max_violation = 0.0;
    bool passed = true;
};

namespace detail {

inline Eigen::MatrixXd rand_mat(std::mt19937& gen, int r, int c, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::MatrixXd a(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) a(i, j) = dist(gen);
    return a;
}

inline SymMatrix rand_sym(std::mt19937& gen, int m, double lo = -1.0, double hi = 1.0) {
    return SymMatrix(rand_mat(gen, m, m, lo, hi));
}

inline Eigen::MatrixXd rand_orth(std::mt19937& gen, int m) {
    return Eigen::HouseholderQR<Eigen::MatrixXd>(rand_mat(gen, m, m)).householderQ();
}

inline SymMatrix rand_spd(std::mt19937& gen, int m, double lam_lo = 0.1, double lam_hi = 10.0) {
    std::uniform_real_distribution<double> dist(std::log(lam_lo), std::log(lam_hi));
    Eigen::VectorXd d(m);
    for (int k = 0; k < m; ++k) d(k) = std::exp(dist(gen));
    const Eigen::MatrixXd q = rand_orth(gen, m);
    return SymMatrix(q * d.asDiagonal() * q.transpose());
}

inline SymMatrix rand_psd(std::mt19937& gen, int m) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd d(m);
    for (int k = 0; k < m; ++k) {
        const double u = unif(gen);
        d(k) = u < 1.0 / 3.0 ? 0.0 : 3.0 * u;
    }
    const Eigen::MatrixXd q = rand_orth(gen, m);
    return SymMatrix(q * d.asDiagonal() * q.transpose());
}

/// Random interior pair (G, Y) wrapped in a linear-constraint oracle.
struct InteriorDraw {
    std::shared_ptr<ProblemOracle> oracle;
    Iterate w;
};

inline InteriorDraw rand_interior(std::mt19937& gen, int m, int n) {
    std::vector<SymMatrix> a;
    a.reserve(n);
    for (int i = 0; i < n; ++i) a.push_back(rand_sym(gen, m));
    InteriorDraw out;
    out.oracle = std::make_shared<QuadraticSdpOracle>(
        QuadraticSdpOracle::linear(Eigen::VectorXd::Zero(n), rand_spd(gen, m), std::move(a),
                                   Eigen::MatrixXd(0, n), Eigen::VectorXd(0)));
    out.w = Iterate{Eigen::VectorXd::Zero(n), rand_spd(gen, m), Eigen::VectorXd(0)};
    return out;
}

/// Stable per-suite seed so --only filters do not change sampled data.
inline std::uint32_t suite_seed(std::uint32_t seed, const std::string& name) {
    std::uint32_t h = 2166136261u;
    for (char c : name) h = (h ^ static_cast<std::uint32_t>(c)) * 16777619u;
    return seed ^ h;
}

template <class Body>
SuiteResult run_suite(const std::string& name, std::uint32_t seed, int trials, Body&& body) {
    SuiteResult res;
    res.name = name;
    res.trials = trials;
    std::mt19937 gen(suite_seed(seed, name));
    for (int t = 0; t < trials; ++t) {
        const double v = body(gen);  // violation normalized by the tolerance
        res.max_violation = std::max(res.max_violation, v);
        if (v > 1.0) ++res.failures;
    }
    res.passed = res.failures == 0;
    return res;
}

}  // namespace detail

constexpr const char* kSuiteNames[] = {
    "lemma-dx",       "prop-xyx",       "prop-aa",           "eig-reconstruction",
    "sqrt-residual",  "lyap-residual",  "svec-isometry",     "adjoint-identity",
    "phi-order",      "scaling-invariance", "family-identities", "commutation",
};

inline SuiteResult run_one(const std::string& name, int trials, std::uint32_t seed) {
    using namespace detail;
    std::uniform_real_distribution<double> mu_signed(-2.0, 2.0);
    std::uniform_real_distribution<double> mu_pos(1e-3, 1.0);

    if (name == "lemma-dx") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 1 + static_cast<int>(gen() % 8);
            const SymMatrix a = rand_sym(gen, m, -3.0, 3.0);
            const SymMatrix b = rand_sym(gen, m, -3.0, 3.0);
            auto [lhs, rhs] = lemma_dx_gap(a, b, mu_signed(gen));
            return std::abs(lhs - rhs) / (1e-10 * (1.0 + rhs));
        });
    }
    if (name == "prop-xyx") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 1 + static_cast<int>(gen() % 8);
            const SymMatrix x = rand_psd(gen, m);
            const SymMatrix y = rand_sym(gen, m, -2.0, 2.0);
            const double mu = mu_signed(gen);
            const Eigen::MatrixXd xh = sqrt_psd(x).mat();
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
            const double lhs = (xh * y.mat() * xh - mu * I).norm();
            const double rhs = (x.mat() * y.mat() - mu * I).norm();
            return (lhs - rhs) / (1e-12 * (1.0 + rhs));
        });
    }
    if (name == "prop-aa") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 1 + static_cast<int>(gen() % 8);
            const SymMatrix x = rand_spd(gen, m, 0.05, 10.0);
            const SymMatrix dx = rand_sym(gen, m, -2.0, 2.0);
            const SymMatrix u = lyap_solve_sqrt(x, dx);
            const EigenPair ep = sym_eig(x);
            const Eigen::MatrixXd x_isqrt =
                eig_apply(ep, [](double v) { return 1.0 / std::sqrt(v); });
            const Eigen::MatrixXd x_inv = eig_apply(ep, [](double v) { return 1.0 / v; });
            const double lhs = (u.mat() * x_isqrt).norm();
            const double rhs = std::sqrt(m / 2.0) * dx.frob() * x_inv.norm();
            return (lhs - rhs) / (1e-12 * (1.0 + rhs));
        });
    }
    if (name == "eig-reconstruction") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 1 + static_cast<int>(gen() % 8);
            const SymMatrix a = rand_sym(gen, m, -5.0, 5.0);
            const EigenPair ep = sym_eig(a);
            const double gap = (ep.q * ep.d.asDiagonal() * ep.q.transpose() - a.mat()).norm();
            return gap / (1e-12 * (1.0 + a.frob()));
        });
    }
    if (name == "sqrt-residual") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 1 + static_cast<int>(gen() % 8);
            const SymMatrix a = rand_psd(gen, m);
            const SymMatrix s = sqrt_psd(a);
            return (s.mat() * s.mat() - a.mat()).norm() / (1e-10 * (1.0 + a.frob()));
        });
    }
    if (name == "lyap-residual") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 1 + static_cast<int>(gen() % 8);
            const SymMatrix g = rand_spd(gen, m, 0.05, 20.0);
            const SymMatrix b = rand_sym(gen, m, -3.0, 3.0);
            const SymMatrix u = lyap_solve_sqrt(g, b);
            const Eigen::MatrixXd gh = sqrt_psd(g).mat();
            return (u.mat() * gh + gh * u.mat() - b.mat()).norm() / (1e-10 * (1.0 + b.frob()));
        });
    }
    if (name == "svec-isometry") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 1 + static_cast<int>(gen() % 8);
            const SymMatrix a = rand_sym(gen, m, -4.0, 4.0);
            const SymMatrix b = rand_sym(gen, m, -4.0, 4.0);
            const double rhs = inner(a, b);
            return std::abs(svec(a).dot(svec(b)) - rhs) / (1e-14 * (1.0 + std::abs(rhs)));
        });
    }
    if (name == "adjoint-identity") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 2 + static_cast<int>(gen() % 4);
            const int n = 1 + static_cast<int>(gen() % 3);
            const InteriorDraw draw = rand_interior(gen, m, n);
            const Eigen::VectorXd x = rand_mat(gen, n, 1);
            const Eigen::VectorXd dir = rand_mat(gen, n, 1);
            const SymMatrix y = rand_sym(gen, m);
            const double lhs = inner(apply_jg(*draw.oracle, x, dir), y);
            const double rhs = dir.dot(adjoint_jg(*draw.oracle, x, y));
            return std::abs(lhs - rhs) / (1e-12 * (1.0 + std::abs(rhs)));
        });
    }
    if (name == "phi-order") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 2 + static_cast<int>(gen() % 4);
            const InteriorDraw draw = rand_interior(gen, m, 2);
            const double mu = mu_pos(gen);
            const double n1 = residual_phi1(*draw.oracle, draw.w, mu).norm;
            const double n2 = residual_phi2(*draw.oracle, draw.w, mu).norm;
            return (n2 - n1) / (1e-12 * (1.0 + n2));
        });
    }
    if (name == "scaling-invariance") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 2 + static_cast<int>(gen() % 4);
            const InteriorDraw draw = rand_interior(gen, m, 2);
            const double mu = mu_pos(gen);
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (ScalingKind k : {ScalingKind::identity, ScalingKind::hkm, ScalingKind::nt,
                                  ScalingKind::hkm_dual, ScalingKind::mtw}) {
                const ScalingData sc = make_scaling(k, *draw.oracle, draw.w);
                const double norm =
                    (sc.g_hat_sqrt * sc.y_hat.mat() * sc.g_hat_sqrt - mu * I).norm();
                lo = std::min(lo, norm);
                hi = std::max(hi, norm);
            }
            return (hi - lo) / (1e-9 * (1.0 + hi));
        });
    }
    if (name == "family-identities") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 2 + static_cast<int>(gen() % 4);
            const InteriorDraw draw = rand_interior(gen, m, 2);
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
            double worst = 0.0;
            for (ScalingKind k : {ScalingKind::hkm, ScalingKind::nt, ScalingKind::hkm_dual,
                                  ScalingKind::mtw}) {
                const ScalingData sc = make_scaling(k, *draw.oracle, draw.w);
                const double scale = 1.0 + sc.g_hat.frob() + sc.y_hat.frob();
                double gap = 0.0;
                switch (k) {
                    case ScalingKind::hkm: gap = (sc.g_hat.mat() - I).norm(); break;
                    case ScalingKind::nt: gap = (sc.y_hat.mat() - I).norm(); break;
                    case ScalingKind::hkm_dual:
                        gap = (sc.y_hat.mat() * sc.g_hat.mat() * sc.y_hat.mat() - I).norm();
                        break;
                    case ScalingKind::mtw: gap = (sc.g_hat.mat() - sc.y_hat.mat()).norm(); break;
                    default: break;
                }
                worst = std::max(worst, gap / (1e-9 * scale));
            }
            return worst;
        });
    }
    if (name == "commutation") {
        return run_suite(name, seed, trials, [&](std::mt19937& gen) {
            const int m = 2 + static_cast<int>(gen() % 4);
            const InteriorDraw draw = rand_interior(gen, m, 2);
            double worst = 0.0;
            for (ScalingKind k : {ScalingKind::hkm, ScalingKind::nt, ScalingKind::hkm_dual,
                                  ScalingKind::mtw}) {
                const ScalingData sc = make_scaling(k, *draw.oracle, draw.w);
                const double scale = 1.0 + sc.g_hat.frob() * sc.y_hat.frob();
                worst = std::max(worst, commutation_check(sc) / (1e-9 * scale));
            }
            return worst;
        });
    }
    throw UnknownInstance("unknown verify suite '" + name + "'");
}

/// Run the suites whose names contain `filter` (all when empty).
inline std::vector<SuiteResult> run_all(const std::string& filter, int trials,
                                        std::uint32_t seed) {
    std::vector<SuiteResult> out;
    for (const char* name : kSuiteNames) {
        if (!filter.empty() && std::string(name).find(filter) == std::string::npos) continue;
        out.push_back(run_one(name, trials, seed));
    }
    return out;
}

}  // namespace mtsdp::verify
