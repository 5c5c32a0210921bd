#ifndef PLATE_BOUNDARY_HPP
#define PLATE_BOUNDARY_HPP

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>

#include "plate/analytic.hpp"
#include "plate/mesh.hpp"
#include "plate/params.hpp"

namespace plate {

enum class BcKind { Clamped, SimplySupported, Free };

inline const char* bc_name(BcKind k) {
    switch (k) {
        case BcKind::Clamped: return "clamped";
        case BcKind::SimplySupported: return "supported";
        case BcKind::Free: return "free";
    }
    return "?";
}

// Right-hand-side data g(x, y, t, tderiv) of one boundary equation; tderiv
// selects the analytic time derivative (0 for w, 1 for v, 2 for a).
using BcData = std::function<double(double, double, double, int)>;

inline BcData zero_data() {
    return [](double, double, double, int) { return 0.0; };
}

// Wraps plain g(x,y,t) with second-order central time differences for the
// derivative orders, for callers without analytic derivatives.
inline BcData fd_time_data(std::function<double(double, double, double)> g, double dt_fd = 1e-5) {
    return [g = std::move(g), dt_fd](double x, double y, double t, int k) {
        switch (k) {
            case 0: return g(x, y, t);
            case 1: return (g(x, y, t + dt_fd) - g(x, y, t - dt_fd)) / (2.0 * dt_fd);
            default:
                return (g(x, y, t + dt_fd) - 2.0 * g(x, y, t) + g(x, y, t - dt_fd)) /
                       (dt_fd * dt_fd);
        }
    };
}

// Per-side boundary condition: kind plus the data of its two equations.
//   clamped:   w = g0,                      dw/dn = g1
//   supported: w = g0,                      w_nn + nu w_tt = g1
//   free:      w_nn + nu w_tt = g0,         d/dn[w_nn + (nu-2) w_tt] = g1
struct SideCondition {
    BcKind kind = BcKind::Clamped;
    BcData g0;
    BcData g1;
};

struct BoundarySpec {
    std::map<SideId, SideCondition> side;
    BcData corner_data;                           // w_xy at free-free rectangle corners
    std::optional<std::array<double, 2>> pin;     // interior point held at w = 0
    double nu = 0.0;                              // Poisson ratio of the moment/shear conditions

    const SideCondition& on(SideId s) const {
        auto it = side.find(s);
        if (it == side.end())
            throw ConfigError(std::string("no boundary condition for side '") + side_name(s) + "'");
        return it->second;
    }
    BcKind kind_of(SideId s) const { return on(s).kind; }
};

// All sides the same kind with homogeneous data.
inline BoundarySpec uniform_bc(const Mesh& m, BcKind kind, double nu = 0.0) {
    BoundarySpec b;
    for (const auto& s : m.sides) b.side[s.id] = {kind, zero_data(), zero_data()};
    b.corner_data = zero_data();
    b.nu = nu;
    return b;
}

namespace detail {

// Outward unit normal of a side at a boundary point.
inline std::array<double, 2> outward_normal(const Mesh& m, const BoundarySide& s, double x,
                                            double y) {
    if (m.kind == MeshKind::Rectangle) {
        if (s.normal_axis == 0) return {static_cast<double>(s.normal_sign), 0.0};
        return {0.0, static_cast<double>(s.normal_sign)};
    }
    const double r = std::hypot(x, y);
    return {s.normal_sign * x / r, s.normal_sign * y / r};
}

} // namespace detail

// Boundary data that makes the manufactured solution exact for the given kind
// on one side.
inline SideCondition mms_side(const std::shared_ptr<const Mesh>& mesh, const BoundarySide& s,
                              BcKind kind, double nu) {
    auto normal = [mesh, s](double x, double y) { return detail::outward_normal(*mesh, s, x, y); };
    SideCondition c;
    c.kind = kind;
    switch (kind) {
        case BcKind::Clamped:
            c.g0 = [](double x, double y, double t, int k) { return mms_trace_value(x, y, t, k); };
            c.g1 = [normal](double x, double y, double t, int k) {
                auto n = normal(x, y);
                return mms_trace_normal_deriv(x, y, t, k, n[0], n[1]);
            };
            break;
        case BcKind::SimplySupported:
            c.g0 = [](double x, double y, double t, int k) { return mms_trace_value(x, y, t, k); };
            c.g1 = [normal, nu](double x, double y, double t, int k) {
                auto n = normal(x, y);
                return mms_trace_moment(x, y, t, k, n[0], n[1], nu);
            };
            break;
        case BcKind::Free:
            c.g0 = [normal, nu](double x, double y, double t, int k) {
                auto n = normal(x, y);
                return mms_trace_moment(x, y, t, k, n[0], n[1], nu);
            };
            c.g1 = [normal, nu](double x, double y, double t, int k) {
                auto n = normal(x, y);
                return mms_trace_shear(x, y, t, k, n[0], n[1], nu);
            };
            break;
    }
    return c;
}

inline BoundarySpec mms_bc(const std::shared_ptr<const Mesh>& mesh, BcKind kind, double nu) {
    BoundarySpec b;
    for (const auto& s : mesh->sides) b.side[s.id] = mms_side(mesh, s, kind, nu);
    b.corner_data = [](double x, double y, double t, int k) { return mms_trace_cross(x, y, t, k); };
    b.nu = nu;
    return b;
}

// Moving clamp of the annulus experiments: inner edge w = W_in cos(xi t),
// dw/dn = 0; outer edge free.
inline BoundarySpec moving_clamp_bc(double W_in, double xi, double nu) {
    BoundarySpec b;
    b.nu = nu;
    SideCondition inner;
    inner.kind = BcKind::Clamped;
    inner.g0 = [W_in, xi](double, double, double t, int k) {
        const double a = W_in * std::pow(xi, k);
        switch (k & 3) {
            case 0: return a * std::cos(xi * t);
            case 1: return -a * std::sin(xi * t);
            case 2: return -a * std::cos(xi * t);
            default: return a * std::sin(xi * t);
        }
    };
    inner.g1 = zero_data();
    b.side[SideId::Inner] = std::move(inner);
    b.side[SideId::Outer] = {BcKind::Free, zero_data(), zero_data()};
    b.corner_data = zero_data();
    return b;
}

} // namespace plate

#endif
