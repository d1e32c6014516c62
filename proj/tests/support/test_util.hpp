#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "mtsdp/symmat.hpp"

namespace mtsdp::testutil {

inline Eigen::MatrixXd random_general(std::mt19937& gen, int rows, int cols, double lo = -1.0,
                                      double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::MatrixXd a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = dist(gen);
    return a;
}

inline SymMatrix random_sym(std::mt19937& gen, int m, double lo = -1.0, double hi = 1.0) {
    return SymMatrix(random_general(gen, m, m, lo, hi));
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937& gen, int m) {
    const Eigen::MatrixXd a = random_general(gen, m, m);
    return Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
}

/// Random symmetric PD matrix with eigenvalues log-uniform in [lam_lo, lam_hi].
inline SymMatrix random_spd(std::mt19937& gen, int m, double lam_lo = 0.1, double lam_hi = 10.0) {
    std::uniform_real_distribution<double> dist(std::log(lam_lo), std::log(lam_hi));
    Eigen::VectorXd d(m);
    for (int k = 0; k < m; ++k) d(k) = std::exp(dist(gen));
    const Eigen::MatrixXd q = random_orthogonal(gen, m);
    return SymMatrix(q * d.asDiagonal() * q.transpose());
}

/// Random symmetric PSD matrix; roughly one eigenvalue in three is exactly 0.
inline SymMatrix random_psd(std::mt19937& gen, int m) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd d(m);
    for (int k = 0; k < m; ++k) {
        const double u = unif(gen);
        d(k) = u < 1.0 / 3.0 ? 0.0 : 3.0 * u;
    }
    const Eigen::MatrixXd q = random_orthogonal(gen, m);
    return SymMatrix(q * d.asDiagonal() * q.transpose());
}

inline bool within_one_ulp(double a, double b) {
    return a == b || std::nextafter(a, b) == b;
}

}  // namespace mtsdp::testutil
