#include <gtest/gtest.h>

#include <random>

#include "plate/analytic.hpp"

using namespace plate;

TEST(Mms, PointValues) {
    EXPECT_NEAR(mms_w(0.5, 0.5, 0.0), 1.0, 1e-14);
    EXPECT_NEAR(mms_w(0.25, 0.25, 0.5), -0.0625, 1e-14);
    // vanishes on the boundary of [-1,1]^2
    for (double s : {-1.0, 1.0}) {
        EXPECT_NEAR(mms_w(s, 0.3, 0.7), 0.0, 1e-14);
        EXPECT_NEAR(mms_w(0.3, s, 0.7), 0.0, 1e-14);
    }
}

// Closed-form partials against central finite differences at random points.
TEST(Mms, DerivativesMatchFiniteDifferences) {
    std::mt19937 rng(3u);
    std::uniform_real_distribution<double> uni(-0.9, 0.9);
    const double h = 1e-4;
    auto w = [](double x, double y) { return mms_spatial(x, y).w; };
    for (int trial = 0; trial < 20; ++trial) {
        const double x = uni(rng), y = uni(rng);
        const MmsSpatial m = mms_spatial(x, y);
        const double fd_x = (w(x + h, y) - w(x - h, y)) / (2 * h);
        const double fd_xx = (w(x + h, y) - 2 * w(x, y) + w(x - h, y)) / (h * h);
        const double fd_xy =
            (w(x + h, y + h) - w(x + h, y - h) - w(x - h, y + h) + w(x - h, y - h)) / (4 * h * h);
        const double fd_xxx =
            (w(x + 2 * h, y) - 2 * w(x + h, y) + 2 * w(x - h, y) - w(x - 2 * h, y)) / (2 * h * h * h);
        EXPECT_NEAR(m.wx, fd_x, 1e-6 * std::max(1.0, std::abs(m.wx)));
        EXPECT_NEAR(m.wxx, fd_xx, 1e-4 * std::max(1.0, std::abs(m.wxx)));
        EXPECT_NEAR(m.wxy, fd_xy, 1e-4 * std::max(1.0, std::abs(m.wxy)));
        EXPECT_NEAR(m.wxxx, fd_xxx, 2e-3 * std::max(1.0, std::abs(m.wxxx)));
        // Laplacian and biharmonic through FD of the closed-form pieces
        const double fd_lap = fd_xx + (w(x, y + h) - 2 * w(x, y) + w(x, y - h)) / (h * h);
        EXPECT_NEAR(m.lap, fd_lap, 1e-4 * std::max(1.0, std::abs(m.lap)));
        auto lap_of = [&](double xx, double yy) { return mms_spatial(xx, yy).lap; };
        const double fd_bih = (lap_of(x + h, y) + lap_of(x - h, y) + lap_of(x, y + h) +
                               lap_of(x, y - h) - 4 * lap_of(x, y)) /
                              (h * h);
        EXPECT_NEAR(m.bilap, fd_bih, 1e-3 * std::max(1.0, std::abs(m.bilap)));
    }
}

TEST(Mms, TimeFactorDerivatives) {
    const double t = 0.37, h = 1e-6;
    for (int k = 0; k < 3; ++k) {
        const double fd = (mms_time_factor(t + h, k) - mms_time_factor(t - h, k)) / (2 * h);
        EXPECT_NEAR(mms_time_factor(t, k + 1), fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST(MmsForcing, TrivialPlateIsSecondTimeDerivative) {
    PlateParams p;
    p.rho_h = 1.0;
    const double x = 0.3, y = -0.2, t = 0.45;
    EXPECT_NEAR(mms_forcing(p, x, y, t), -4 * pi * pi * mms_w(x, y, t), 1e-10);
}

TEST(MmsForcing, VanishesAtDomainCorner) {
    PlateParams p;
    p.rho_h = 1;
    p.K0 = 2;
    p.T = 1;
    p.D = 0.01;
    p.K1 = 5;
    p.T1 = 0.1;
    EXPECT_NEAR(mms_forcing(p, -1.0, -1.0, 0.3), 0.0, 1e-12);
}

// Independent route: assemble the forcing from finite differences of the
// exact solution in space and time.
TEST(MmsForcing, MatchesFiniteDifferenceComposition) {
    PlateParams p;
    p.rho_h = 1;
    p.K0 = 2;
    p.T = 1;
    p.D = 0.01;
    p.K1 = 5;
    p.T1 = 0.1;
    const double x = 0.5, y = 0.5, t = 0.0, h = 1e-3;
    auto lap_of = [&](double xx, double yy, double tt) { return mms_spatial(xx, yy).lap * mms_time_factor(tt); };
    const double w_tt = (mms_w(x, y, t + h) - 2 * mms_w(x, y, t) + mms_w(x, y, t - h)) / (h * h);
    const double w_t = (mms_w(x, y, t + h) - mms_w(x, y, t - h)) / (2 * h);
    const double lap = lap_of(x, y, t);
    const double lap_t = (lap_of(x, y, t + h) - lap_of(x, y, t - h)) / (2 * h);
    const double bih = mms_spatial(x, y).bilap * mms_time_factor(t);
    const double expect = p.rho_h * w_tt + p.K0 * mms_w(x, y, t) - p.T * lap + p.D * bih +
                          p.K1 * w_t - p.T1 * lap_t;
    EXPECT_NEAR(mms_forcing(p, x, y, t), expect, 1e-5 * std::max(1.0, std::abs(expect)));
}

TEST(SupportedOmega, SimpleAndTable1) {
    PlateParams unit;
    unit.rho_h = 1;
    unit.D = 1;
    EXPECT_NEAR(supported_omega(1, 1, 1, 1, unit), 2 * pi * pi, 1e-12);

    PlateParams p;
    p.rho_h = 2.7;
    p.D = 6.4527;
    struct Row {
        int m, n;
        double f;
    };
    const Row table[] = {{1, 1, 4.8567}, {1, 2, 12.1417}, {2, 2, 19.4267},
                         {1, 3, 24.2834}, {2, 3, 31.5684}, {1, 4, 41.2817},
                         {3, 3, 43.7100}, {2, 4, 48.5667}, {3, 4, 60.7084}};
    for (const Row& r : table)
        EXPECT_NEAR(supported_omega(r.m, r.n, 1, 1, p) / (2 * pi), r.f, 5e-5) << r.m << r.n;
}

TEST(StandingWave, InitialConditionAndPeriod) {
    PlateParams p;
    p.rho_h = 2.7;
    p.D = 6.4527;
    const double x = 0.23, y = 0.71;
    const double ic = std::sin(pi * x) * std::sin(2 * pi * y);
    EXPECT_NEAR(standing_wave(1, 2, x, y, 0.0, 1, 1, p), ic, 1e-14);
    const double T = 2 * pi / supported_omega(1, 2, 1, 1, p);
    EXPECT_NEAR(standing_wave(1, 2, x, y, T, 1, 1, p), ic, 1e-12);
    // nodal set of the (1,2) mode is y = 1/2
    EXPECT_NEAR(standing_wave(1, 2, 0.37, 0.5, 0.13, 1, 1, p), 0.0, 1e-14);
}

TEST(ForcedResponse, StructureAndTruncation) {
    PlateParams p;
    p.rho_h = 1;
    p.D = 0.1;
    p.nu = 0.3;
    const double L = 0.4, H = 0.2, F0 = 1000, xi = 40;
    // at rest initially
    EXPECT_NEAR(forced_response(0.17, 0.07, 0.0, F0, xi, {7, 7}, L, H, p), 0.0, 1e-12);
    // even modes contribute nothing
    const double t = 0.31;
    const double s1 = forced_response(0.2, 0.1, t, F0, xi, {1, 1}, L, H, p);
    const double s2 = forced_response(0.2, 0.1, t, F0, xi, {2, 2}, L, H, p);
    EXPECT_NEAR(s1, s2, 1e-15);
    // truncation convergence: doubling 7x7 moves the probe value by ~5e-5
    // (the (9,1) tail term), doubling 28x28 by under 1e-6
    double d7 = 0.0, d28 = 0.0;
    for (double tt : {0.1, 0.25, 0.5, 0.75, 1.0}) {
        d7 = std::max(d7, std::abs(forced_response(0.2, 0.1, tt, F0, xi, {7, 7}, L, H, p) -
                                   forced_response(0.2, 0.1, tt, F0, xi, {14, 14}, L, H, p)));
        d28 = std::max(d28, std::abs(forced_response(0.2, 0.1, tt, F0, xi, {28, 28}, L, H, p) -
                                     forced_response(0.2, 0.1, tt, F0, xi, {56, 56}, L, H, p)));
    }
    EXPECT_LE(d7, 2e-4);
    EXPECT_GT(d7, 1e-6); // the 49-mode truncation tail is genuinely ~5e-5
    EXPECT_LE(d28, 1e-6);
}

TEST(ForcedResponse, ResonantDriveRejected) {
    PlateParams p;
    p.rho_h = 1;
    p.D = 0.1;
    const double L = 0.4, H = 0.2;
    const double omega11 = supported_omega(1, 1, L, H, p);
    EXPECT_THROW(forced_response(0.2, 0.1, 0.5, 1.0, omega11, {3, 3}, L, H, p), ConfigError);
}

TEST(ErrorNorms, ExactAndOffsetFields) {
    auto mesh = build_rectangle(0, 1, 0, 1, 11, 11);
    Field f(mesh);
    auto exact = [](double x, double y, double) { return x + 2 * y; };
    f.sample_real([&](double x, double y) { return exact(x, y, 0.0); });
    ErrorReport r = error_norms(f, exact, 0.0);
    EXPECT_DOUBLE_EQ(r.max_norm, 0.0);
    for (auto& v : f.v) v += 1e-3;
    r = error_norms(f, exact, 0.0);
    EXPECT_NEAR(r.max_norm, 1e-3, 1e-15);
    EXPECT_NEAR(r.l2_norm, 1e-3, 1e-15);
}
