#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <complex>
#include <random>

#include "plate/mesh.hpp"
#include "plate/stability.hpp"

using namespace plate;
using cplx = std::complex<double>;

TEST(Pc22Amplification, KnownValues) {
    EXPECT_NEAR(pc22_amplification({0, 0}), 1.0, 1e-14);
    EXPECT_GT(pc22_amplification({0.1, 0}), 1.0);
    EXPECT_LE(pc22_amplification({-1.75, 0}), 1.0 + 1e-12);
}

// Both closed-form roots satisfy the characteristic polynomial
// zeta^2 - (1 + z + 3z^2/4) zeta + z^2/4 = 0 of the scalar PC22 recurrence.
TEST(Pc22Amplification, RootsSatisfyCharacteristicPolynomial) {
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const cplx z(uni(rng), uni(rng));
        const cplx q = cplx(1, 0) + z + 0.75 * z * z;
        const cplx s = std::sqrt(q * q - z * z);
        double maxmod = 0.0;
        for (const cplx zeta : {0.5 * (q + s), 0.5 * (q - s)}) {
            const cplx res = zeta * zeta - q * zeta + 0.25 * z * z;
            EXPECT_LE(std::abs(res), 1e-12 * std::max(1.0, std::abs(zeta) * std::abs(zeta)));
            maxmod = std::max(maxmod, std::abs(zeta));
        }
        EXPECT_NEAR(pc22_amplification(z), maxmod, 1e-12);
    }
}

TEST(SuperEllipse, Membership) {
    EXPECT_TRUE(in_region({0, 0}));
    EXPECT_TRUE(in_region({0, 1.2}));
    EXPECT_FALSE(in_region({-2.0, 0}));
    EXPECT_FALSE(in_region({0.01, 0}));
}

TEST(FourierSymbol, PureBendingUnitSpacing) {
    PlateParams p;
    p.rho_h = 1;
    p.D = 1;
    SymbolBounds b = fourier_symbol_max(p, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(b.K_hat_max, 64.0);
    EXPECT_DOUBLE_EQ(b.B_hat_max, 0.0);
    EXPECT_EQ(b.regime, DampingRegime::UnderDamped);
    EXPECT_NEAR(std::abs(b.lambda_max - cplx(0, 8)), 0.0, 1e-12);
}

TEST(FourierSymbol, OverDampedDominatedByK1) {
    PlateParams p;
    p.rho_h = 2.0;
    p.K1 = 1000.0;
    SymbolBounds b = fourier_symbol_max(p, 0.1, 0.1);
    EXPECT_EQ(b.regime, DampingRegime::OverDamped);
    EXPECT_NEAR(b.lambda_max.real(), -500.0, 1e-10);
    EXPECT_DOUBLE_EQ(b.lambda_max.imag(), 0.0);
}

// Cross-check the closed-form maxima against dense eigenvalues of the
// periodic difference operators on a small grid.
TEST(FourierSymbol, MatchesPeriodicOperatorSpectrum) {
    PlateParams p;
    p.rho_h = 1;
    p.K0 = 2;
    p.T = 1;
    p.D = 0.01;
    p.K1 = 5;
    p.T1 = 0.1;
    const int n = 8;
    const double h = 1.0 / n;
    const int nn = n * n;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(nn, nn);
    auto id = [&](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            L(id(i, j), id(i - 1, j)) += 1.0 / (h * h);
            L(id(i, j), id(i + 1, j)) += 1.0 / (h * h);
            L(id(i, j), id(i, j - 1)) += 1.0 / (h * h);
            L(id(i, j), id(i, j + 1)) += 1.0 / (h * h);
            L(id(i, j), id(i, j)) -= 4.0 / (h * h);
        }
    Eigen::MatrixXd K = p.K0 * Eigen::MatrixXd::Identity(nn, nn) - p.T * L + p.D * L * L;
    Eigen::MatrixXd B = p.K1 * Eigen::MatrixXd::Identity(nn, nn) - p.T1 * L;
    const double kmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues().maxCoeff();
    const double bmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(B).eigenvalues().maxCoeff();
    SymbolBounds sb = fourier_symbol_max(p, h, h);
    EXPECT_NEAR(sb.K_hat_max, kmax / p.rho_h, 1e-8 * sb.K_hat_max);
    EXPECT_NEAR(sb.B_hat_max, bmax / p.rho_h, 1e-10 * sb.B_hat_max);
}

TEST(StableDt, PureBendingAndPureDamping) {
    const SuperEllipse e;
    {
        PlateParams p;
        p.D = 1.0;
        auto m = build_rectangle(0, 1, 0, 1, 11, 11);
        const SymbolBounds b = fourier_symbol_max(p, *m);
        EXPECT_NEAR(stable_dt(p, *m, 0.9), 0.9 * e.b / std::sqrt(b.K_hat_max), 1e-12);
    }
    {
        PlateParams p;
        p.K1 = 7.0;
        auto m = build_rectangle(0, 1, 0, 1, 11, 11);
        EXPECT_NEAR(stable_dt(p, *m, 0.9), 0.9 * e.a / 7.0, 1e-12);
    }
    {
        PlateParams p; // no dynamics at all
        auto m = build_rectangle(0, 1, 0, 1, 11, 11);
        EXPECT_THROW(stable_dt(p, *m, 0.9), ConfigError);
    }
}

// Enclosure: the super-ellipse boundary lies inside the PC22 stability region.
TEST(StableDt, SuperEllipseEnclosedInStabilityRegion) {
    const SuperEllipse e;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double u = -1.0 + 2.0 * k / 999.0; // y/b along the curved arc
        const double y = e.b * u;
        const double x = -e.a * std::pow(1.0 - std::pow(std::abs(u), e.n), 1.0 / e.n);
        worst = std::max(worst, pc22_amplification({x, y}));
    }
    EXPECT_LE(worst, 1.0 + 1e-9);
}

// Imaginary-axis stability extent: bisection on |zeta(iy)| = 1 gives y* >= b.
TEST(StableDt, ImaginaryAxisExtentCoversB) {
    auto amp = [](double y) { return pc22_amplification({0.0, y}); };
    double lo = 1.0, hi = 2.0;
    ASSERT_LE(amp(lo), 1.0 + 1e-12);
    ASSERT_GT(amp(hi), 1.0);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (amp(mid) <= 1.0 ? lo : hi) = mid;
    }
    EXPECT_GE(lo, 1.2);
}

// Frozen regression value: the standing-wave setup (rho_h=2.7, D=6.4527) on
// the 161x161 unit square at C_sf=0.9.
TEST(StableDt, StandingWaveG160Regression) {
    PlateParams p;
    p.rho_h = 2.7;
    p.D = 6.4527;
    p.nu = 0.33;
    auto m = build_rectangle(0, 1, 0, 1, 161, 161);
    EXPECT_NEAR(stable_dt(p, *m, 0.9), 3.411182445923e-06, 1e-15);
}

TEST(StableDt, BendingRefinementQuartersTimeStep) {
    PlateParams p;
    p.D = 2.0;
    auto coarse = build_rectangle(0, 1, 0, 1, 11, 11);
    auto fine = build_rectangle(0, 1, 0, 1, 21, 21);
    const double r = stable_dt(p, *coarse, 0.9) / stable_dt(p, *fine, 0.9);
    EXPECT_NEAR(r, 4.0, 0.1);
}
