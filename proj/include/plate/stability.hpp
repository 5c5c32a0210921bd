#ifndef PLATE_STABILITY_HPP
#define PLATE_STABILITY_HPP

#include <complex>

#include "plate/errors.hpp"
#include "plate/mesh.hpp"
#include "plate/params.hpp"

namespace plate {

// Half super-ellipse |Re z/a|^n + |Im z/b|^n <= 1, Re z <= 0, approximating
// the PC22 stability region from inside.
struct SuperEllipse {
    double a = 1.75;
    double b = 1.2;
    double n = 1.5;
};

// Largest root magnitude of the PC22 characteristic polynomial
//   zeta^2 - (1 + z + 3z^2/4) zeta + z^2/4 = 0.
inline double pc22_amplification(std::complex<double> z) {
    const std::complex<double> one(1.0, 0.0);
    const std::complex<double> q = one + z + 0.75 * z * z;
    const std::complex<double> s = std::sqrt(q * q - z * z);
    return std::max(std::abs(0.5 * (q + s)), std::abs(0.5 * (q - s)));
}

inline bool in_region(std::complex<double> z, const SuperEllipse& e = {}) {
    if (z.real() > 0.0) return false;
    return std::pow(std::abs(z.real() / e.a), e.n) + std::pow(std::abs(z.imag() / e.b), e.n) <=
           1.0;
}

enum class DampingRegime { UnderDamped, OverDamped };

inline const char* regime_name(DampingRegime r) {
    return r == DampingRegime::UnderDamped ? "under-damped" : "over-damped";
}

// Worst-case Fourier symbols of K_h/rho_h and B_h/rho_h, attained at the grid
// Nyquist mode, and the matching worst-case time-stepping eigenvalue.
struct SymbolBounds {
    double K_hat_max = 0.0;              // 1/s^2
    double B_hat_max = 0.0;              // 1/s
    std::complex<double> lambda_max{0, 0}; // 1/s
    DampingRegime regime = DampingRegime::UnderDamped;
};

inline SymbolBounds fourier_symbol_max(const PlateParams& p, double h1, double h2) {
    if (!(h1 > 0) || !(h2 > 0)) throw ConfigError("grid spacings must be positive");
    const double s = 1.0 / (h1 * h1) + 1.0 / (h2 * h2);
    SymbolBounds b;
    b.K_hat_max = (p.K0 + 4.0 * p.T * s + 16.0 * p.D * s * s) / p.rho_h;
    b.B_hat_max = (p.K1 + 4.0 * p.T1 * s) / p.rho_h;
    const double half = 0.5 * b.B_hat_max;
    if (half * half < b.K_hat_max) {
        b.regime = DampingRegime::UnderDamped;
        b.lambda_max = {half == 0.0 ? 0.0 : -half, std::sqrt(b.K_hat_max - half * half)};
    } else {
        b.regime = DampingRegime::OverDamped;
        b.lambda_max = {-b.B_hat_max, 0.0};
    }
    return b;
}

inline SymbolBounds fourier_symbol_max(const PlateParams& p, const Mesh& m) {
    if (m.kind == MeshKind::Rectangle) return fourier_symbol_max(p, m.h1, m.h2);
    const double h = min_physical_spacing(m); // conservative on curvilinear grids
    return fourier_symbol_max(p, h, h);
}

// Time step placing lambda_max * dt on the super-ellipse boundary, scaled by
// the stability factor (0.9 for PC22; NB2 is unconditionally stable and uses
// 90 for accuracy).
inline double stable_dt(const PlateParams& p, const Mesh& m, double C_sf,
                        const SuperEllipse& e = {}) {
    if (!(C_sf > 0)) throw ConfigError("stability factor must be positive");
    const SymbolBounds b = fourier_symbol_max(p, m);
    const double re = std::abs(b.lambda_max.real()), im = std::abs(b.lambda_max.imag());
    if (re == 0.0 && im == 0.0)
        throw ConfigError("plate has no dynamics (all symbols vanish); no stable dt");
    const double norm = std::pow(std::pow(re / e.a, e.n) + std::pow(im / e.b, e.n), 1.0 / e.n);
    return C_sf / norm;
}

inline double default_csf_pc22() { return 0.9; }
inline double default_csf_nb2() { return 90.0; }

} // namespace plate

#endif
