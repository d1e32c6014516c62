#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <memory>
#include <random>

#include "mtsdp/instances.hpp"
#include "mtsdp/model.hpp"
#include "mtsdp/regularity.hpp"
#include "mtsdp/scaling.hpp"
#include "support/fd_check.hpp"
#include "support/test_oracles.hpp"
#include "support/test_util.hpp"

using namespace mtsdp;
namespace tu = mtsdp::testutil;

namespace {

Iterate central_start(const Instance& inst, double mu) {
    return central_path_ladder(*inst.oracle, *inst.interior_hint, mu);
}

}  // namespace

TEST(GradLagrangian, VanishingMultipliersReduceToGradF) {
    tu::PolyNsdpOracle p;
    std::mt19937 gen(601);
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd x = tu::random_general(gen, 2, 1);
        Iterate w{x, SymMatrix::zero(2), Eigen::VectorXd::Zero(1)};
        EXPECT_EQ((grad_lagrangian(p, w) - p.grad_f(x)).norm(), 0.0);
    }
}

TEST(GradLagrangian, UnconstrainedStationaryToy) {
    // f strictly quadratic with minimizer at x = -Q^{-1} c; with Y = 0, z = 0
    // the Lagrangian gradient vanishes there.
    const Instance inst = tu::scalar_instance(2.0, -4.0);
    Iterate w{Eigen::VectorXd::Constant(1, 2.0), SymMatrix::zero(1), Eigen::VectorXd(0)};
    EXPECT_LE(grad_lagrangian(*inst.oracle, w).norm(), 1e-14);
}

TEST(GradLagrangian, VanishesAtKnownKktPoint) {
    for (const char* name : {"lsdp-small", "quad-nsdp", "near-corr-4"}) {
        const Instance inst = builtin(name);
        ASSERT_TRUE(inst.known_solution.has_value());
        EXPECT_LE(grad_lagrangian(*inst.oracle, *inst.known_solution).norm(), 1e-9) << name;
    }
}

TEST(AdjointJg, ZeroDirectionAndTraceCase) {
    const Instance inst = builtin("lsdp-small");
    const ProblemOracle& p = *inst.oracle;
    const Eigen::VectorXd x = Eigen::Vector3d(0.3, -0.1, 0.2);
    EXPECT_EQ(apply_jg(p, x, Eigen::VectorXd::Zero(3)).frob(), 0.0);

    // with Y = I the adjoint components are the traces of the A_i
    const Eigen::VectorXd a = adjoint_jg(p, x, SymMatrix::identity(3));
    for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(a(i), p.g_i(x, i).trace());
}

TEST(AdjointJg, AdjointIdentityProperty) {
    tu::PolyNsdpOracle p;
    std::mt19937 gen(602);
    for (int t = 0; t < 200; ++t) {
        const Eigen::VectorXd x = tu::random_general(gen, 2, 1);
        const Eigen::VectorXd d = tu::random_general(gen, 2, 1);
        const SymMatrix y = tu::random_sym(gen, 2);
        const double lhs = inner(apply_jg(p, x, d), y);
        const double rhs = d.dot(adjoint_jg(p, x, y));
        EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST(HessLagrangian, ConstantForLinearConstraintsQuadraticObjective) {
    const Instance inst = builtin("quad-nsdp");
    std::mt19937 gen(603);
    const Eigen::MatrixXd q = inst.oracle->hess_f(Eigen::VectorXd::Zero(3));
    for (int t = 0; t < 10; ++t) {
        Iterate w{tu::random_general(gen, 3, 1), tu::random_sym(gen, 2),
                  tu::random_general(gen, 1, 1)};
        EXPECT_LE((hess_lagrangian(*inst.oracle, w) - q).norm(), 1e-14);
    }
}

TEST(HessLagrangian, MatchesFiniteDifferencesOfGradient) {
    tu::PolyNsdpOracle p;
    std::mt19937 gen(604);
    for (int t = 0; t < 20; ++t) {
        Iterate w{tu::random_general(gen, 2, 1), tu::random_sym(gen, 2),
                  tu::random_general(gen, 1, 1)};
        Eigen::VectorXd dir = tu::random_general(gen, 2, 1);
        dir.normalize();
        EXPECT_LE(tu::check_hess_lagrangian(p, w, dir), 1e-5);
    }
}

TEST(HessLagrangian, ReducesToHessFWithoutMultipliers) {
    tu::PolyNsdpOracle p;
    const Eigen::VectorXd x = Eigen::Vector2d(0.2, -0.4);
    Iterate w{x, SymMatrix::zero(2), Eigen::VectorXd::Zero(1)};
    EXPECT_LE((hess_lagrangian(p, w) - p.hess_f(x)).norm(), 1e-14);
}

TEST(DerivativeConsistency, AllOraclesMatchCentralDifferences) {
    std::mt19937 gen(605);
    std::vector<std::shared_ptr<ProblemOracle>> oracles;
    oracles.push_back(builtin("lsdp-small").oracle);
    oracles.push_back(builtin("quad-nsdp").oracle);
    oracles.push_back(builtin("near-corr-4").oracle);
    oracles.push_back(std::make_shared<tu::PolyNsdpOracle>());
    for (const auto& p : oracles) {
        for (int t = 0; t < 20; ++t) {
            const Eigen::VectorXd x = tu::random_general(gen, p->n(), 1);
            const SymMatrix y = tu::random_sym(gen, p->m());
            const Eigen::VectorXd z = tu::random_general(gen, p->s(), 1);
            EXPECT_LE(tu::check_grad_f(*p, x), 1e-5);
            EXPECT_LE(tu::check_g_i(*p, x), 1e-5);
            EXPECT_LE(tu::check_jac_h(*p, x), 1e-5);
            EXPECT_LE(tu::check_hess_f(*p, x), 1e-5);
            EXPECT_LE(tu::check_second_contraction(*p, x, y), 1e-5);
            if (p->s() > 0) EXPECT_LE(tu::check_hess_h(*p, x, z), 1e-5);
        }
    }
}

TEST(DerivativeConsistency, FiniteDifferenceDefaultsMatchAnalytic) {
    tu::PolyNsdpOracle analytic;
    tu::PolyNsdpOracleFd fd;
    std::mt19937 gen(606);
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd x = tu::random_general(gen, 2, 1);
        const SymMatrix y = tu::random_sym(gen, 2);
        const Eigen::VectorXd z = tu::random_general(gen, 1, 1);
        EXPECT_LE(tu::max_rel_dev(fd.second_contraction(x, y), analytic.second_contraction(x, y)),
                  1e-5);
        EXPECT_LE(tu::max_rel_dev(fd.hess_h(x, z), analytic.hess_h(x, z)), 1e-5);
    }
}

TEST(ResidualTriple, NormIsCompositeOfBlocks) {
    std::mt19937 gen(607);
    const Instance inst = builtin("lsdp-small");
    Iterate w{tu::random_general(gen, 3, 1), tu::random_spd(gen, 3), tu::random_general(gen, 1, 1)};
    const ResidualTriple r = residual_phi1(*inst.oracle, w, 0.3);
    const double expected =
        std::sqrt(r.r_x.squaredNorm() + r.r_mat.squaredNorm() + r.r_h.squaredNorm());
    EXPECT_LE(std::abs(r.norm - expected), 1e-14 * (1.0 + expected));
}

TEST(ResidualXi, SmallOnCentralPathAndAtSolution) {
    const Instance inst = builtin("lsdp-small");
    const ProblemOracle& p = *inst.oracle;
    const double mu = 1e-2;
    const Iterate v = central_start(inst, mu);

    const ScalingData sc = make_scaling(ScalingKind::hkm, p, v);
    EXPECT_LE(residual_xi(p, v, mu, sc).norm, 1e-9);

    // exact KKT point, mu = 0, identity scaling
    EXPECT_LE(residual_xi0(p, *inst.known_solution).norm, 1e-9);
}

TEST(ResidualXi, MatrixBlockNormIsScalingInvariant) {
    const Instance inst = builtin("lsdp-small");
    const ProblemOracle& p = *inst.oracle;
    const Iterate v = central_start(inst, 5e-2);
    Iterate w = v;
    w.x(0) += 0.01;  // step off the path so the residual is nontrivial
    w.y = w.y + 0.02 * SymMatrix::identity(3);

    const double mu = 3e-2;
    const ScalingData sc_id = make_scaling(ScalingKind::identity, p, w);
    const ScalingData sc_hkm = make_scaling(ScalingKind::hkm, p, w);
    const double n_id = residual_xi(p, w, mu, sc_id).r_mat.norm();
    const double n_hkm = residual_xi(p, w, mu, sc_hkm).r_mat.norm();
    EXPECT_LE(std::abs(n_id - n_hkm), 1e-10 * (1.0 + n_id));
}

TEST(ResidualXi, IdentityScalingAtMuZeroEqualsTerminationResidual) {
    const Instance inst = builtin("lsdp-small");
    const ProblemOracle& p = *inst.oracle;
    const Iterate v = central_start(inst, 1e-2);
    const ScalingData sc = make_scaling(ScalingKind::identity, p, v);
    EXPECT_DOUBLE_EQ(residual_xi(p, v, 0.0, sc).norm, residual_xi0(p, v).norm);
}

TEST(ResidualPhi, CommutingCaseMakesBothBlocksEqual) {
    const Instance inst = tu::scalar_instance(1.0, 0.0);
    Iterate w{Eigen::VectorXd::Constant(1, 2.0),
              SymMatrix::diagonal(Eigen::VectorXd::Constant(1, 0.5)), Eigen::VectorXd(0)};
    const ResidualTriple p1 = residual_phi1(*inst.oracle, w, 0.3);
    const ResidualTriple p2 = residual_phi2(*inst.oracle, w, 0.3);
    EXPECT_DOUBLE_EQ(p1.norm, p2.norm);
}

TEST(ResidualPhi, BothSmallOnCentralPath) {
    const Instance inst = builtin("quad-nsdp");
    const double mu = 1e-2;
    const Iterate v = central_start(inst, mu);
    EXPECT_LE(residual_phi1(*inst.oracle, v, mu).norm, 1e-9);
    EXPECT_LE(residual_phi2(*inst.oracle, v, mu).norm, 1e-9);
}

TEST(ResidualPhi, Phi1DominatesPhi2) {
    const Instance inst = builtin("lsdp-small");
    std::mt19937 gen(608);
    for (int t = 0; t < 200; ++t) {
        Iterate w{tu::random_general(gen, 3, 1), tu::random_spd(gen, 3),
                  tu::random_general(gen, 1, 1)};
        const double mu = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
        const double n1 = residual_phi1(*inst.oracle, w, mu).norm;
        const double n2 = residual_phi2(*inst.oracle, w, mu).norm;
        EXPECT_GE(n1, n2 - 1e-12 * (1.0 + n2));
    }
}

TEST(InNeighborhood, BkktPointAndBoundaryCases) {
    const Instance inst = builtin("lsdp-small");
    const ProblemOracle& p = *inst.oracle;
    const double mu = 1e-2;
    const Iterate v = central_start(inst, mu);

    const double residual = residual_phi1(p, v, mu).norm;
    EXPECT_TRUE(in_neighborhood(p, v, mu, residual + 1e-12));

    // tau mu^{1+xi} with (tau, xi) = (10, 1/2)
    EXPECT_TRUE(in_neighborhood(p, v, mu, 10.0 * std::pow(mu, 1.5)));

    Iterate singular = v;
    singular.y = SymMatrix::diagonal(Eigen::Vector3d(1.0, 1.0, 0.0));
    EXPECT_FALSE(in_neighborhood(p, singular, mu, 1e6));
}
