#include <gtest/gtest.h>

#include <random>

#include "plate/analytic.hpp"
#include "plate/assemble.hpp"
#include "plate/modal.hpp"

using namespace plate;

// Matrix-free application and the assembled matrix agree on the PDE rows for
// random fields with boundary-consistent ghosts.
TEST(Assemble, MatchesMatrixFreeOnRandomFields) {
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    struct Case {
        std::shared_ptr<const Mesh> mesh;
        BcKind kind;
    };
    std::vector<Case> cases = {
        {build_rectangle(0, 1, 0, 0.5, 11, 9), BcKind::Clamped},
        {build_rectangle(0, 1, 0, 0.5, 11, 9), BcKind::SimplySupported},
        {build_rectangle(0, 1, 0, 0.5, 11, 9), BcKind::Free},
        {build_annulus(0.5, 1.0, 9, 16), BcKind::SimplySupported},
        {build_annulus(0.5, 1.0, 9, 16), BcKind::Free},
    };
    PlateParams p;
    p.rho_h = 2.0;
    p.K0 = 2;
    p.T = 1;
    p.D = 0.01;
    p.K1 = 5;
    p.T1 = 0.1;
    p.nu = 0.1;
    const double c0 = 1.3, cK = 0.7, cB = 0.2;
    for (const auto& cs : cases) {
        BoundarySpec b = uniform_bc(*cs.mesh, cs.kind, p.nu);
        Assembly as = assemble(p, cs.mesh, b, c0, cK, cB);
        const Mesh& m = *cs.mesh;
        for (int trial = 0; trial < 20; ++trial) {
            Field f(cs.mesh);
            f.sample_real([&](double, double) { return uni(rng); });
            fill_ghosts(f, b, 0.0);
            Field kf = apply_K(p, m, f), bf = apply_B(p, m, f);
            Vec x = Eigen::Map<const Vec>(f.v.data(), f.v.size());
            Vec y = as.A * x;
            double scale = 0.0, err = 0.0;
            for (long k : as.nodes.pde_nodes) {
                const double expect = c0 * f.v[k] + cK * kf.v[k] + cB * bf.v[k];
                err = std::max(err, std::abs(y[k] - expect));
                scale = std::max(scale, std::abs(expect));
            }
            EXPECT_LE(err, 1e-12 * std::max(scale, 1.0)) << bc_name(cs.kind);
            // ghost rows vanish on boundary-consistent fields
            for (long g : as.nodes.ghost_nodes)
                EXPECT_NEAR(y[g], 0.0, 1e-10 * std::max(scale, 1.0));
        }
    }
}

TEST(Assemble, IdentityWhenOnlyMassTerm) {
    auto mesh = build_rectangle(0, 1, 0, 1, 9, 9);
    PlateParams p;
    BoundarySpec b = uniform_bc(*mesh, BcKind::Clamped);
    Assembly as = assemble(p, mesh, b, 1.0, 0.0, 0.0);
    for (long k : as.nodes.pde_nodes) {
        Vec e = Vec::Zero(mesh->size());
        e[k] = 1.0;
        Vec y = as.A * e;
        EXPECT_DOUBLE_EQ(y[k], 1.0);
    }
}

// The tension-only operator annihilates constants away from the boundary
// closure rows.
TEST(Assemble, TensionRowSumsVanish) {
    auto mesh = build_rectangle(0, 1, 0, 1, 11, 11);
    PlateParams p;
    p.T = 2.0;
    BoundarySpec b = uniform_bc(*mesh, BcKind::Clamped);
    Assembly as = assemble(p, mesh, b, 0.0, 1.0, 0.0);
    Vec ones = Vec::Ones(mesh->size());
    Vec y = as.A * ones;
    const Mesh& m = *mesh;
    for (int i = 1; i < m.n1 - 1; ++i)
        for (int j = 1; j < m.n2 - 1; ++j) EXPECT_NEAR(y[m.at(i, j)], 0.0, 1e-10);
}

// Supported square: the interior-eliminated stiffness operator is symmetric.
TEST(Assemble, SupportedEliminationIsSymmetric) {
    auto mesh = build_rectangle(0, 1, 0, 1, 13, 13);
    PlateParams p;
    p.D = 1.0;
    p.nu = 0.3;
    BoundarySpec b = uniform_bc(*mesh, BcKind::SimplySupported, p.nu);
    auto red = plate::detail::reduce_stiffness(p, mesh, b);
    Eigen::MatrixXd A = Eigen::MatrixXd(red.A);
    const double scale = A.cwiseAbs().maxCoeff();
    EXPECT_LE((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-12 * scale);
}

TEST(Assemble, BcRhsCarriesBoundaryData) {
    auto mesh = build_annulus(0.1, 0.5, 17, 16);
    PlateParams p;
    p.D = 0.01;
    p.nu = 0.3;
    const double xi = 3.0;
    BoundarySpec b = moving_clamp_bc(1.0, xi, p.nu);
    Assembly as = assemble(p, mesh, b, 1.0, 0.5, 0.0);
    Vec rhs = Vec::Zero(mesh->size());
    bc_rhs(*mesh, b, as.nodes, 0.25, 0, rhs);
    const Mesh& m = *mesh;
    for (int j = 0; j < m.n2; ++j)
        EXPECT_NEAR(rhs[m.at(0, j)], std::cos(xi * 0.25), 1e-14);
    // acceleration data: second time derivative of the clamp motion
    bc_rhs(*mesh, b, as.nodes, 0.25, 2, rhs);
    for (int j = 0; j < m.n2; ++j)
        EXPECT_NEAR(rhs[m.at(0, j)], -xi * xi * std::cos(xi * 0.25), 1e-12);
}
