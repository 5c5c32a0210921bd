#ifndef PLATE_SPECTRA_HPP
#define PLATE_SPECTRA_HPP

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "plate/errors.hpp"

namespace plate {

namespace detail {

// FFTW planning is not thread-safe.
inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

} // namespace detail

// Unnormalized forward DFT, any length.
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
    const int n = static_cast<int>(x.size());
    if (n == 0) return {};
    std::vector<std::complex<double>> out(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_mutex());
        plan = fftw_plan_dft_1d(
            n, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(x.data())),
            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
            FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(detail::fftw_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

struct Spectrum {
    std::vector<double> freqs; // Hz, 0 .. Nyquist
    std::vector<double> power; // |X_k|^2 of the windowed, mean-removed series
    double dt = 0.0;
    size_t n = 0;

    double bin_width() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
};

// One-sided power spectrum of a uniformly sampled series: mean removal, Hann
// window, DFT.  Works for any length >= 8.
inline Spectrum power_spectrum(std::span<const double> series, double dt) {
    const size_t n = series.size();
    if (n < 8) throw ConfigError("power_spectrum needs at least 8 samples");
    if (!(dt > 0)) throw ConfigError("power_spectrum needs dt > 0");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    std::vector<std::complex<double>> x(n);
    for (size_t k = 0; k < n; ++k) {
        const double hann = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / (n - 1)));
        x[k] = {(series[k] - mean) * hann, 0.0};
    }
    auto X = dft(x);
    Spectrum s;
    s.dt = dt;
    s.n = n;
    const size_t bins = n / 2 + 1;
    s.freqs.resize(bins);
    s.power.resize(bins);
    for (size_t k = 0; k < bins; ++k) {
        s.freqs[k] = k / (n * dt);
        s.power[k] = std::norm(X[k]);
    }
    return s;
}

struct Peak {
    double frequency = 0.0; // Hz, parabolically interpolated
    double power = 0.0;
    size_t bin = 0;
};

// Local maxima above rel_threshold * max power, refined with a three-bin
// parabola on log power, sorted by frequency.
inline std::vector<Peak> find_peaks(const Spectrum& s, double rel_threshold) {
    if (!(rel_threshold > 0.0 && rel_threshold < 1.0))
        throw ConfigError("peak threshold must lie in (0,1)");
    double pmax = 0.0;
    for (double p : s.power) pmax = std::max(pmax, p);
    std::vector<Peak> peaks;
    if (pmax <= 0.0) return peaks;
    for (size_t k = 1; k + 1 < s.power.size(); ++k) {
        const double p = s.power[k];
        if (!(p > s.power[k - 1] && p > s.power[k + 1])) continue;
        if (p < rel_threshold * pmax) continue;
        double delta = 0.0;
        if (s.power[k - 1] > 0.0 && s.power[k + 1] > 0.0) {
            const double la = std::log(s.power[k - 1]), lb = std::log(p),
                         lc = std::log(s.power[k + 1]);
            const double denom = la - 2.0 * lb + lc;
            if (denom != 0.0) delta = 0.5 * (la - lc) / denom;
        }
        delta = std::clamp(delta, -0.5, 0.5);
        Peak pk;
        pk.bin = k;
        pk.power = p;
        pk.frequency = (k + delta) * s.bin_width();
        peaks.push_back(pk);
    }
    return peaks;
}

// Least-squares slope of log(error) against log(spacing).
inline double estimate_order(const std::vector<double>& errors,
                             const std::vector<double>& spacings) {
    if (errors.size() != spacings.size() || errors.size() < 3)
        throw ConfigError("order estimate needs at least 3 (error, spacing) pairs");
    const size_t n = errors.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!(errors[i] > 0) || !(spacings[i] > 0))
            throw ConfigError("order estimate needs positive errors and spacings");
        const double x = std::log(spacings[i]), y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace plate

#endif
