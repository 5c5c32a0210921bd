#ifndef PLATE_ANALYTIC_HPP
#define PLATE_ANALYTIC_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "plate/errors.hpp"
#include "plate/field.hpp"
#include "plate/params.hpp"

namespace plate {

inline constexpr double pi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Manufactured solution  w(x,y,t) = sin^4(pi(x+1)) sin^4(pi(y+1)) cos(2 pi t)
// with every spatial partial through fourth order in closed form.
// ---------------------------------------------------------------------------

namespace detail {

// Derivatives of u -> sin^4(u).
struct Quartic {
    double f, d1, d2, d3, d4;
};

inline Quartic quartic_sine(double u) {
    const double s = std::sin(u), c = std::cos(u);
    Quartic q;
    q.f = s * s * s * s;
    q.d1 = 4.0 * s * s * s * c;
    q.d2 = 12.0 * s * s * c * c - 4.0 * s * s * s * s;
    q.d3 = 24.0 * s * c * c * c - 40.0 * s * s * s * c;
    q.d4 = 24.0 * c * c * c * c - 192.0 * s * s * c * c + 40.0 * s * s * s * s;
    return q;
}

} // namespace detail

// Spatial factor of the manufactured solution and its partials (time factor
// excluded; the solution is separable).
struct MmsSpatial {
    double w;
    double wx, wy;
    double wxx, wxy, wyy;
    double wxxx, wxxy, wxyy, wyyy;
    double lap;          // wxx + wyy
    double glap_x, glap_y; // gradient of the Laplacian
    double bilap;        // wxxxx + 2 wxxyy + wyyyy
};

inline MmsSpatial mms_spatial(double x, double y) {
    const auto X = detail::quartic_sine(pi * (x + 1.0));
    const auto Y = detail::quartic_sine(pi * (y + 1.0));
    const double p1 = pi, p2 = pi * pi, p3 = p2 * pi, p4 = p2 * p2;
    MmsSpatial m;
    m.w = X.f * Y.f;
    m.wx = p1 * X.d1 * Y.f;
    m.wy = p1 * X.f * Y.d1;
    m.wxx = p2 * X.d2 * Y.f;
    m.wxy = p2 * X.d1 * Y.d1;
    m.wyy = p2 * X.f * Y.d2;
    m.wxxx = p3 * X.d3 * Y.f;
    m.wxxy = p3 * X.d2 * Y.d1;
    m.wxyy = p3 * X.d1 * Y.d2;
    m.wyyy = p3 * X.f * Y.d3;
    m.lap = m.wxx + m.wyy;
    m.glap_x = m.wxxx + m.wxyy;
    m.glap_y = m.wxxy + m.wyyy;
    m.bilap = p4 * (X.d4 * Y.f + 2.0 * X.d2 * Y.d2 + X.f * Y.d4);
    return m;
}

// k-th time derivative of cos(2 pi t).
inline double mms_time_factor(double t, int k = 0) {
    const double w = 2.0 * pi;
    const double a = std::pow(w, k);
    switch (k & 3) {
        case 0: return a * std::cos(w * t);
        case 1: return -a * std::sin(w * t);
        case 2: return -a * std::cos(w * t);
        default: return a * std::sin(w * t);
    }
}

inline double mms_w(double x, double y, double t) { return mms_spatial(x, y).w * mms_time_factor(t); }
inline double mms_wt(double x, double y, double t) { return mms_spatial(x, y).w * mms_time_factor(t, 1); }

// Forcing that turns the manufactured field into an exact solution:
// F = rho_h w_tt + K0 w - T lap w + D bilap w + K1 w_t - T1 lap w_t.
inline double mms_forcing(const PlateParams& p, double x, double y, double t) {
    const MmsSpatial m = mms_spatial(x, y);
    const double tau = mms_time_factor(t, 0);
    const double tau1 = mms_time_factor(t, 1);
    const double tau2 = mms_time_factor(t, 2);
    return p.rho_h * m.w * tau2 + p.K0 * m.w * tau - p.T * m.lap * tau + p.D * m.bilap * tau +
           p.K1 * m.w * tau1 - p.T1 * m.lap * tau1;
}

// Boundary traces of the manufactured solution for a unit outward normal n.
// The tangential second derivative is taken as lap - w_nn, matching the
// discrete boundary operators on both mesh kinds.
inline double mms_trace_value(double x, double y, double t, int tderiv) {
    return mms_spatial(x, y).w * mms_time_factor(t, tderiv);
}

inline double mms_trace_normal_deriv(double x, double y, double t, int tderiv, double nx, double ny) {
    const MmsSpatial m = mms_spatial(x, y);
    return (nx * m.wx + ny * m.wy) * mms_time_factor(t, tderiv);
}

inline double mms_trace_moment(double x, double y, double t, int tderiv, double nx, double ny,
                               double nu) {
    const MmsSpatial m = mms_spatial(x, y);
    const double wnn = nx * nx * m.wxx + 2.0 * nx * ny * m.wxy + ny * ny * m.wyy;
    return (wnn + nu * (m.lap - wnn)) * mms_time_factor(t, tderiv);
}

// Effective shear trace d/dn [ w_nn + (2-nu)(lap - w_nn) ], i.e.
// (nu-1) D3w[n,n,n] + (2-nu) n.grad(lap w).
inline double mms_trace_shear(double x, double y, double t, int tderiv, double nx, double ny,
                              double nu) {
    const MmsSpatial m = mms_spatial(x, y);
    const double d3 = nx * nx * nx * m.wxxx + 3.0 * nx * nx * ny * m.wxxy +
                      3.0 * nx * ny * ny * m.wxyy + ny * ny * ny * m.wyyy;
    const double nglap = nx * m.glap_x + ny * m.glap_y;
    return ((nu - 1.0) * d3 + (2.0 - nu) * nglap) * mms_time_factor(t, tderiv);
}

inline double mms_trace_cross(double x, double y, double t, int tderiv) {
    return mms_spatial(x, y).wxy * mms_time_factor(t, tderiv);
}

// ---------------------------------------------------------------------------
// Simply supported rectangle, pure bending: standing waves and forced series.
// ---------------------------------------------------------------------------

// Natural angular frequency omega_mn = pi^2 (m^2/L^2 + n^2/H^2) sqrt(D/rho_h).
inline double supported_omega(int m, int n, double L, double H, const PlateParams& p) {
    return pi * pi * (m * m / (L * L) + n * n / (H * H)) * std::sqrt(p.D / p.rho_h);
}

// Standing wave sin(m pi x/L) sin(n pi y/H) cos(omega_mn t).
inline double standing_wave(int m, int n, double x, double y, double t, double L, double H,
                            const PlateParams& p) {
    return std::sin(m * pi * x / L) * std::sin(n * pi * y / H) *
           std::cos(supported_omega(m, n, L, H, p) * t);
}

struct SeriesTruncation {
    int M = 7, N = 7;
};

// Response of the plate at rest driven by the uniform force F0 sin(xi t),
// truncated eigenfunction expansion.  Only odd-odd modes contribute.
inline double forced_response(double x, double y, double t, double F0, double xi,
                              SeriesTruncation trunc, double L, double H, const PlateParams& p) {
    if (trunc.M < 1 || trunc.N < 1) throw ConfigError("series truncation must be >= 1");
    double sum = 0.0;
    for (int m = 1; m <= trunc.M; ++m) {
        for (int n = 1; n <= trunc.N; ++n) {
            const double fm = 1.0 - std::cos(m * pi);
            const double fn = 1.0 - std::cos(n * pi);
            if (fm == 0.0 || fn == 0.0) continue;
            const double omega = supported_omega(m, n, L, H, p);
            if (std::abs(xi - omega) < 1e-9 * std::max(1.0, omega))
                throw ConfigError("driving frequency hits resonance of mode (" +
                                  std::to_string(m) + "," + std::to_string(n) + ")");
            const double pre = 2.0 * F0 * fm * fn / (p.rho_h * m * n * pi * pi * omega);
            const double tmn = pre * ((std::sin(xi * t) + std::sin(omega * t)) / (xi + omega) -
                                      (std::sin(xi * t) - std::sin(omega * t)) / (xi - omega));
            sum += std::sin(m * pi * x / L) * std::sin(n * pi * y / H) * tmn;
        }
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Error norms against a reference function.
// ---------------------------------------------------------------------------

struct ErrorReport {
    double max_norm = 0.0;
    double l2_norm = 0.0;
    std::string grid_label;
    double time = 0.0;
};

inline ErrorReport error_norms(const Field& numeric,
                               const std::function<double(double, double, double)>& exact,
                               double t) {
    const Mesh& m = *numeric.mesh;
    ErrorReport r;
    r.time = t;
    double sq = 0.0;
    long count = 0;
    for (int i = 0; i < m.n1; ++i) {
        for (int j = 0; j < m.n2; ++j) {
            const double e = numeric(i, j) - exact(m.coord_x(i, j), m.coord_y(i, j), t);
            r.max_norm = std::max(r.max_norm, std::abs(e));
            sq += e * e;
            ++count;
        }
    }
    r.l2_norm = std::sqrt(sq / count);
    return r;
}

} // namespace plate

#endif
