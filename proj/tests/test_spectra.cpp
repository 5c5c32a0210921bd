#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "plate/spectra.hpp"

using namespace plate;

namespace {
constexpr double tau = 2.0 * std::numbers::pi;
}

TEST(PowerSpectrum, PureToneDominantPeak) {
    const double dt = 0.01, T = 30.0;
    std::vector<double> x;
    for (double t = 0; t < T; t += dt) x.push_back(std::cos(tau * 1.0 * t));
    Spectrum s = power_spectrum(x, dt);
    auto peaks = find_peaks(s, 0.5);
    ASSERT_EQ(peaks.size(), 1u);
    EXPECT_NEAR(peaks[0].frequency, 1.0, 0.5 * s.bin_width());
}

TEST(PowerSpectrum, ConstantSeriesIsSilent) {
    std::vector<double> x(256, 3.7);
    Spectrum s = power_spectrum(x, 0.01);
    for (double p : s.power) EXPECT_NEAR(p, 0.0, 1e-20);
}

TEST(PowerSpectrum, RejectsShortSeries) {
    std::vector<double> x(4, 1.0);
    EXPECT_THROW(power_spectrum(x, 0.01), ConfigError);
}

TEST(FindPeaks, TwoTonesSeparated) {
    const double dt = 0.005, T = 40.0;
    std::vector<double> x;
    for (double t = 0; t < T; t += dt)
        x.push_back(std::cos(tau * 1.3 * t) + 0.8 * std::cos(tau * 4.7 * t));
    Spectrum s = power_spectrum(x, dt);
    auto peaks = find_peaks(s, 0.2);
    ASSERT_EQ(peaks.size(), 2u);
    EXPECT_NEAR(peaks[0].frequency, 1.3, s.bin_width());
    EXPECT_NEAR(peaks[1].frequency, 4.7, s.bin_width());
}

// Off-bin tone: parabolic interpolation lands within half a bin.
TEST(FindPeaks, ParabolicInterpolationAccuracy) {
    const double dt = 0.01;
    const int n = 3000;
    const double f0 = 2.3456;
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k) x[k] = std::cos(tau * f0 * k * dt);
    Spectrum s = power_spectrum(x, dt);
    auto peaks = find_peaks(s, 0.5);
    ASSERT_EQ(peaks.size(), 1u);
    EXPECT_LE(std::abs(peaks[0].frequency - f0), 0.5 * s.bin_width());
    // log-parabola on a Hann mainlobe does much better than half a bin
    EXPECT_LE(std::abs(peaks[0].frequency - f0), 0.1 * s.bin_width());
}

// Parseval for the raw transform on awkward (non power of two) lengths:
// sum |X_k|^2 / N = sum |x - mean|^2.
TEST(Dft, ParsevalAnyLength) {
    std::mt19937 rng(5u);
    std::normal_distribution<double> gauss;
    for (int n : {1000, 1023, 729}) {
        std::vector<std::complex<double>> x(n);
        double mean = 0.0;
        std::vector<double> raw(n);
        for (int k = 0; k < n; ++k) {
            raw[k] = gauss(rng);
            mean += raw[k];
        }
        mean /= n;
        double ss = 0.0;
        for (int k = 0; k < n; ++k) {
            x[k] = raw[k] - mean;
            ss += (raw[k] - mean) * (raw[k] - mean);
        }
        auto X = dft(x);
        double px = 0.0;
        for (const auto& c : X) px += std::norm(c);
        EXPECT_NEAR(px / n, ss, 1e-10 * ss);
    }
}

TEST(EstimateOrder, ExactPowers) {
    std::vector<double> h{0.2, 0.1, 0.05, 0.025};
    std::vector<double> e2, e1;
    for (double hh : h) {
        e2.push_back(3.7 * hh * hh);
        e1.push_back(0.9 * hh);
    }
    EXPECT_NEAR(estimate_order(e2, h), 2.0, 1e-12);
    EXPECT_NEAR(estimate_order(e1, h), 1.0, 1e-12);
}

TEST(EstimateOrder, RejectsBadInput) {
    EXPECT_THROW(estimate_order({1.0, 0.5}, {0.1, 0.05}), ConfigError);
    EXPECT_THROW(estimate_order({1.0, -0.5, 0.2}, {0.1, 0.05, 0.025}), ConfigError);
}
