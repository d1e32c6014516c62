#pragma once

#include <Eigen/Dense>
#include <random>

#include "mtsdp/model.hpp"
#include "mtsdp/symmat.hpp"

// Independent central-difference oracles for derivative consistency checks.

namespace mtsdp::testutil {

inline double fd_step_for(const Eigen::VectorXd& x) { return 1e-6 * (1.0 + x.norm()); }

/// Relative deviation between an analytic directional derivative and its
/// central-difference estimate: |a - fd| / (1 + |fd|).
inline double rel_dev(double analytic, double fd) {
    return std::abs(analytic - fd) / (1.0 + std::abs(fd));
}

inline double max_rel_dev(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& fd) {
    return ((analytic - fd).cwiseAbs().array() / (1.0 + fd.cwiseAbs().array())).maxCoeff();
}

/// max over i of the deviation between grad_f and central differences of f.
inline double check_grad_f(const ProblemOracle& p, const Eigen::VectorXd& x) {
    const double step = fd_step_for(x);
    const Eigen::VectorXd g = p.grad_f(x);
    double worst = 0.0;
    for (int i = 0; i < p.n(); ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += step;
        xm(i) -= step;
        worst = std::max(worst, rel_dev(g(i), (p.f(xp) - p.f(xm)) / (2.0 * step)));
    }
    return worst;
}

inline double check_g_i(const ProblemOracle& p, const Eigen::VectorXd& x) {
    const double step = fd_step_for(x);
    double worst = 0.0;
    for (int i = 0; i < p.n(); ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += step;
        xm(i) -= step;
        const Eigen::MatrixXd fd = (p.g(xp).mat() - p.g(xm).mat()) / (2.0 * step);
        worst = std::max(worst, max_rel_dev(p.g_i(x, i).mat(), fd));
    }
    return worst;
}

inline double check_jac_h(const ProblemOracle& p, const Eigen::VectorXd& x) {
    if (p.s() == 0) return 0.0;
    const double step = fd_step_for(x);
    const Eigen::MatrixXd jh = p.jac_h(x);
    double worst = 0.0;
    for (int i = 0; i < p.n(); ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += step;
        xm(i) -= step;
        const Eigen::VectorXd fd = (p.h(xp) - p.h(xm)) / (2.0 * step);
        for (int k = 0; k < p.s(); ++k) worst = std::max(worst, rel_dev(jh(i, k), fd(k)));
    }
    return worst;
}

inline double check_hess_f(const ProblemOracle& p, const Eigen::VectorXd& x) {
    const double step = fd_step_for(x);
    const Eigen::MatrixXd hf = p.hess_f(x);
    double worst = 0.0;
    for (int j = 0; j < p.n(); ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp(j) += step;
        xm(j) -= step;
        const Eigen::VectorXd fd = (p.grad_f(xp) - p.grad_f(xm)) / (2.0 * step);
        for (int i = 0; i < p.n(); ++i) worst = std::max(worst, rel_dev(hf(i, j), fd(i)));
    }
    return worst;
}

/// second_contraction against central differences of x -> (G_i(x) . Y).
inline double check_second_contraction(const ProblemOracle& p, const Eigen::VectorXd& x,
                                       const SymMatrix& y) {
    const double step = fd_step_for(x);
    const Eigen::MatrixXd sc = p.second_contraction(x, y);
    double worst = 0.0;
    for (int j = 0; j < p.n(); ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp(j) += step;
        xm(j) -= step;
        for (int i = 0; i < p.n(); ++i) {
            const double fd = (inner(p.g_i(xp, i), y) - inner(p.g_i(xm, i), y)) / (2.0 * step);
            worst = std::max(worst, rel_dev(sc(i, j), fd));
        }
    }
    return worst;
}

inline double check_hess_h(const ProblemOracle& p, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& z) {
    if (p.s() == 0) return 0.0;
    const double step = fd_step_for(x);
    const Eigen::MatrixXd hh = p.hess_h(x, z);
    double worst = 0.0;
    for (int j = 0; j < p.n(); ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp(j) += step;
        xm(j) -= step;
        const Eigen::VectorXd fd = (p.jac_h(xp) * z - p.jac_h(xm) * z) / (2.0 * step);
        for (int i = 0; i < p.n(); ++i) worst = std::max(worst, rel_dev(hh(i, j), fd(i)));
    }
    return worst;
}

/// Directional check of hess_xx L against central differences of grad_x L.
inline double check_hess_lagrangian(const ProblemOracle& p, const Iterate& w,
                                    const Eigen::VectorXd& dir) {
    const double step = fd_step_for(w.x);
    const Eigen::MatrixXd hl = hess_lagrangian(p, w);
    Iterate wp = w, wm = w;
    wp.x = w.x + step * dir;
    wm.x = w.x - step * dir;
    const Eigen::VectorXd fd = (grad_lagrangian(p, wp) - grad_lagrangian(p, wm)) / (2.0 * step);
    const Eigen::VectorXd an = hl * dir;
    double worst = 0.0;
    for (int i = 0; i < p.n(); ++i) worst = std::max(worst, rel_dev(an(i), fd(i)));
    return worst;
}

}  // namespace mtsdp::testutil
