#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <memory>
#include <random>

#include "mtsdp/instances.hpp"
#include "mtsdp/regularity.hpp"
#include "mtsdp/scaling.hpp"
#include "support/test_oracles.hpp"
#include "support/test_util.hpp"

using namespace mtsdp;
namespace tu = mtsdp::testutil;

namespace {

constexpr ScalingKind kAllKinds[] = {ScalingKind::identity, ScalingKind::hkm, ScalingKind::nt,
                                     ScalingKind::hkm_dual, ScalingKind::mtw};

// Random interior configuration: a linear matrix constraint with PD value at
// x = 0 and a random PD dual matrix.
struct InteriorSetup {
    std::shared_ptr<ProblemOracle> oracle;
    Iterate w;
};

InteriorSetup random_interior(std::mt19937& gen, int m, int n) {
    std::vector<SymMatrix> a;
    a.reserve(n);
    for (int i = 0; i < n; ++i) a.push_back(tu::random_sym(gen, m));
    InteriorSetup out;
    out.oracle = std::make_shared<QuadraticSdpOracle>(QuadraticSdpOracle::linear(
        Eigen::VectorXd::Zero(n), tu::random_spd(gen, m), std::move(a), Eigen::MatrixXd(0, n),
        Eigen::VectorXd(0)));
    out.w = Iterate{Eigen::VectorXd::Zero(n), tu::random_spd(gen, m), Eigen::VectorXd(0)};
    return out;
}

double family_identity_gap(const ScalingData& sc, int m) {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    switch (sc.kind) {
        case ScalingKind::hkm:
            return (sc.g_hat.mat() - I).norm();
        case ScalingKind::nt:
            return (sc.y_hat.mat() - I).norm();
        case ScalingKind::hkm_dual:
            return (sc.y_hat.mat() * sc.g_hat.mat() * sc.y_hat.mat() - I).norm();
        case ScalingKind::mtw:
            return (sc.g_hat.mat() - sc.y_hat.mat()).norm();
        case ScalingKind::identity:
            return 0.0;
    }
    return 0.0;
}

}  // namespace

TEST(ScalingKindParse, RoundTripAndError) {
    for (ScalingKind k : kAllKinds) EXPECT_EQ(parse_scaling(scaling_name(k)), k);
    EXPECT_THROW(parse_scaling("aho"), ConfigError);
}

TEST(MakeScaling, FamilyIdentitiesAtRandomInteriorPoints) {
    std::mt19937 gen(701);
    for (int t = 0; t < 100; ++t) {
        const int m = 2 + static_cast<int>(gen() % 4);
        auto [oracle, w] = random_interior(gen, m, 2);
        for (ScalingKind k : kAllKinds) {
            const ScalingData sc = make_scaling(k, *oracle, w);
            const double scale = 1.0 + sc.g_hat.frob() + sc.y_hat.frob();
            EXPECT_LE(family_identity_gap(sc, m), 1e-9 * scale) << scaling_name(k);
        }
    }
}

TEST(MakeScaling, InverseAndCacheConsistency) {
    std::mt19937 gen(702);
    for (int t = 0; t < 50; ++t) {
        const int m = 2 + static_cast<int>(gen() % 4);
        auto [oracle, w] = random_interior(gen, m, 3);
        const SymMatrix g = oracle->g(w.x);
        for (ScalingKind k : kAllKinds) {
            const ScalingData sc = make_scaling(k, *oracle, w);
            EXPECT_LE((sc.p * sc.p_inv - Eigen::MatrixXd::Identity(m, m)).norm(), 1e-10 * m);
            EXPECT_LE((sc.g_hat.mat() - sc.p * g.mat() * sc.p.transpose()).norm(),
                      1e-12 * (1.0 + g.frob()));
            EXPECT_LE((sc.y_hat.mat() - sc.p_inv.transpose() * w.y.mat() * sc.p_inv).norm(),
                      1e-10 * (1.0 + w.y.frob()));
            for (int i = 0; i < oracle->n(); ++i) {
                const SymMatrix gi = oracle->g_i(w.x, i);
                EXPECT_LE((sc.g_i_hat[i].mat() - sc.p * gi.mat() * sc.p.transpose()).norm(),
                          1e-12 * (1.0 + gi.frob()));
            }
            EXPECT_GT(min_eig(sc.g_hat), 0.0);
            EXPECT_LE((sc.g_hat_sqrt * sc.g_hat_sqrt - sc.g_hat.mat()).norm(),
                      1e-10 * (1.0 + sc.g_hat.frob()));
        }
    }
}

TEST(MakeScaling, RejectsBoundaryIterates) {
    const Instance inst = builtin("lsdp-small");
    // G(x*) is singular, Y* is singular: both violate W_++.
    EXPECT_THROW(make_scaling(ScalingKind::hkm, *inst.oracle, *inst.known_solution), NotInterior);

    Iterate w = *inst.interior_hint;
    w.y = SymMatrix::diagonal(Eigen::Vector3d(1.0, 1.0, 0.0));
    EXPECT_THROW(make_scaling(ScalingKind::nt, *inst.oracle, w), NotInterior);
}

TEST(CommutationCheck, CommutingMembersCommute) {
    std::mt19937 gen(703);
    for (int t = 0; t < 100; ++t) {
        const int m = 2 + static_cast<int>(gen() % 4);
        auto [oracle, w] = random_interior(gen, m, 2);
        for (ScalingKind k :
             {ScalingKind::hkm, ScalingKind::nt, ScalingKind::hkm_dual, ScalingKind::mtw}) {
            const ScalingData sc = make_scaling(k, *oracle, w);
            EXPECT_LE(commutation_check(sc), 1e-9 * (1.0 + sc.g_hat.frob() * sc.y_hat.frob()))
                << scaling_name(k);
        }
    }
}

TEST(CommutationCheck, IdentityScalingGenerallyDoesNot) {
    std::mt19937 gen(704);
    auto [oracle, w] = random_interior(gen, 3, 2);
    const ScalingData sc = make_scaling(ScalingKind::identity, *oracle, w);
    EXPECT_GT(commutation_check(sc), 1e-6);  // generic G, Y do not commute
}

TEST(MakeScaling, MatrixResidualNormIsScalingInvariant) {
    std::mt19937 gen(705);
    std::uniform_real_distribution<double> mu_dist(1e-3, 1.0);
    for (int t = 0; t < 50; ++t) {
        const int m = 2 + static_cast<int>(gen() % 4);
        auto [oracle, w] = random_interior(gen, m, 2);
        const double mu = mu_dist(gen);
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
        double ref = -1.0;
        for (ScalingKind k : kAllKinds) {
            const ScalingData sc = make_scaling(k, *oracle, w);
            const double norm = (sc.g_hat_sqrt * sc.y_hat.mat() * sc.g_hat_sqrt - mu * I).norm();
            if (ref < 0.0) {
                ref = norm;
            } else {
                EXPECT_LE(std::abs(norm - ref), 1e-9 * (1.0 + ref)) << scaling_name(k);
            }
        }
    }
}

TEST(MakeScaling, MtwPrimalFormulaMatchesDualFootnoteForm) {
    // The construction uses W = G^{1/2}(G^{1/2} Y G^{1/2})^{-1/2} G^{1/2};
    // the equivalent dual form W = Y^{-1/2}(Y^{1/2} G Y^{1/2})^{1/2} Y^{-1/2}
    // serves as the independent oracle. W is recovered from P as P^{-2}.
    std::mt19937 gen(706);
    for (int t = 0; t < 25; ++t) {
        const int m = 2 + static_cast<int>(gen() % 3);
        auto [oracle, w] = random_interior(gen, m, 2);
        const ScalingData sc = make_scaling(ScalingKind::mtw, *oracle, w);
        const Eigen::MatrixXd w_primal = sc.p_inv * sc.p_inv;

        const EigenPair ey = sym_eig(w.y);
        const Eigen::MatrixXd yh = eig_apply(ey, [](double v) { return std::sqrt(v); });
        const Eigen::MatrixXd yih = eig_apply(ey, [](double v) { return 1.0 / std::sqrt(v); });
        const Eigen::MatrixXd inner_half = sqrt_psd(SymMatrix(yh * oracle->g(w.x).mat() * yh)).mat();
        const Eigen::MatrixXd w_dual = yih * inner_half * yih;
        EXPECT_LE((w_primal - w_dual).norm(), 1e-9 * (1.0 + w_dual.norm()));
    }
}

TEST(ZMatrices, IdentityScalingOnIdentityData) {
    // G = I, G_i = I: the Lyapunov preimage halves, so Z_i = (mu/2) I.
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
    auto oracle = std::make_shared<QuadraticSdpOracle>(QuadraticSdpOracle::linear(
        Eigen::VectorXd::Zero(1), SymMatrix(id), {SymMatrix(id)}, Eigen::MatrixXd(0, 1),
        Eigen::VectorXd(0)));
    Iterate w{Eigen::VectorXd::Zero(1), SymMatrix::identity(2), Eigen::VectorXd(0)};
    const ScalingData sc = make_scaling(ScalingKind::identity, *oracle, w);
    const auto z = z_matrices(sc, 1.0);
    ASSERT_EQ(z.size(), 1u);
    EXPECT_LE((z[0] - 0.5 * id).norm(), 1e-12);
}

TEST(ZMatrices, HkmClosedForm) {
    // Ghat = I makes the preimage Ghat_i / 2, giving Z_i = (mu/2) G_i G^{-1}.
    std::mt19937 gen(707);
    auto [oracle, w] = random_interior(gen, 3, 2);
    const double mu = 0.37;
    const ScalingData sc = make_scaling(ScalingKind::hkm, *oracle, w);
    const auto z = z_matrices(sc, mu);
    const Eigen::MatrixXd ginv = oracle->g(w.x).mat().inverse();
    for (int i = 0; i < 2; ++i) {
        const Eigen::MatrixXd expected = 0.5 * mu * oracle->g_i(w.x, i).mat() * ginv;
        EXPECT_LE((z[i] - expected).norm(), 1e-9 * (1.0 + expected.norm()));
    }
}

TEST(ZMatrices, BoundedAlongCentralPathForHkm) {
    const Instance inst = builtin("lsdp-small");
    const ProblemOracle& p = *inst.oracle;
    Iterate v = *inst.interior_hint;
    double z_ref = -1.0;
    for (double mu : {1e-2, 1e-3, 1e-4}) {
        v = central_path_ladder(p, v, mu);
        const ScalingData sc = make_scaling(ScalingKind::hkm, p, v);
        const double zmax = z_max_norm(sc, mu);
        if (z_ref < 0.0) z_ref = zmax;
        EXPECT_LE(zmax, 10.0 * z_ref);
    }
}
