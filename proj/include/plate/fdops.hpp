#ifndef PLATE_FDOPS_HPP
#define PLATE_FDOPS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "plate/boundary.hpp"
#include "plate/field.hpp"
#include "plate/mesh.hpp"
#include "plate/params.hpp"

namespace plate {

// ---------------------------------------------------------------------------
// Centered second-order operators.  The Laplacian is evaluated on real points
// plus the first ghost ring of each side, so that the composed biharmonic
// lap(lap(w)) is available on interior and boundary points alike.
// ---------------------------------------------------------------------------

namespace detail {

inline void laplacian_rectangle(const Mesh& m, const std::vector<double>& f,
                                std::vector<double>& out, bool strips) {
    const double c1 = 1.0 / (m.h1 * m.h1), c2 = 1.0 / (m.h2 * m.h2);
    const int lo1 = strips ? -1 : 0, hi1 = strips ? m.n1 + 1 : m.n1;
    const int lo2 = strips ? -1 : 0, hi2 = strips ? m.n2 + 1 : m.n2;
    for (int i = lo1; i < hi1; ++i) {
        const bool gi = (i < 0 || i >= m.n1);
        for (int j = lo2; j < hi2; ++j) {
            if (gi && (j < 0 || j >= m.n2)) continue; // no stencil in ghost corners
            const long c = m.at(i, j);
            out[c] = c1 * (f[m.at(i - 1, j)] - 2.0 * f[c] + f[m.at(i + 1, j)]) +
                     c2 * (f[m.at(i, j - 1)] - 2.0 * f[c] + f[m.at(i, j + 1)]);
        }
    }
}

// Polar form w_rr + w_r/r + w_tt/r^2; theta ghosts are periodic copies.
inline void laplacian_annulus(const Mesh& m, const std::vector<double>& f,
                              std::vector<double>& out, bool strips) {
    const double c1 = 1.0 / (m.h1 * m.h1), c2 = 1.0 / (m.h2 * m.h2);
    const int lo1 = strips ? -1 : 0, hi1 = strips ? m.n1 + 1 : m.n1;
    for (int i = lo1; i < hi1; ++i) {
        const double r = m.radius(i);
        const double cr = 1.0 / (2.0 * m.h1 * r), ct = c2 / (r * r);
        for (int j = 0; j < m.n2; ++j) {
            const long c = m.at(i, j);
            out[c] = (c1 + cr) * f[m.at(i + 1, j)] + (c1 - cr) * f[m.at(i - 1, j)] -
                     2.0 * (c1 + ct) * f[c] + ct * (f[m.at(i, j - 1)] + f[m.at(i, j + 1)]);
        }
    }
    for (int i = lo1; i < hi1; ++i) {
        out[m.at(i, -1)] = out[m.at(i, m.n2 - 1)];
        out[m.at(i, -2)] = out[m.at(i, m.n2 - 2)];
        out[m.at(i, m.n2)] = out[m.at(i, 0)];
        out[m.at(i, m.n2 + 1)] = out[m.at(i, 1)];
    }
}

} // namespace detail

inline void laplacian_into(const Mesh& m, const std::vector<double>& f, std::vector<double>& out,
                           bool strips = true) {
    if (m.kind == MeshKind::Rectangle)
        detail::laplacian_rectangle(m, f, out, strips);
    else
        detail::laplacian_annulus(m, f, out, strips);
}

inline Field laplacian(const Mesh&, const Field& f) {
    Field out(f.mesh, 0.0);
    out.time = f.time;
    laplacian_into(*f.mesh, f.v, out.v, true);
    return out;
}

inline void biharmonic_into(const Mesh& m, const std::vector<double>& f, std::vector<double>& out,
                            std::vector<double>& tmp) {
    laplacian_into(m, f, tmp, true);
    laplacian_into(m, tmp, out, false);
}

inline Field biharmonic(const Mesh&, const Field& f) {
    Field out(f.mesh, 0.0), tmp(f.mesh, 0.0);
    out.time = f.time;
    biharmonic_into(*f.mesh, f.v, out.v, tmp.v);
    return out;
}

// K_h w = K0 w - T lap w + D bilap w on real points; both ghost layers of w
// must be filled beforehand.
inline void apply_K_into(const PlateParams& p, const Mesh& m, const std::vector<double>& w,
                         std::vector<double>& out, std::vector<double>& t1,
                         std::vector<double>& t2) {
    const bool need_lap = (p.T != 0.0 || p.D != 0.0);
    if (need_lap) laplacian_into(m, w, t1, true);
    if (p.D != 0.0) laplacian_into(m, t1, t2, false);
    for (int i = 0; i < m.n1; ++i) {
        for (int j = 0; j < m.n2; ++j) {
            const long c = m.at(i, j);
            double r = p.K0 * w[c];
            if (p.T != 0.0) r -= p.T * t1[c];
            if (p.D != 0.0) r += p.D * t2[c];
            out[c] = r;
        }
    }
}

inline Field apply_K(const PlateParams& p, const Mesh& m, const Field& w) {
    Field out(w.mesh, 0.0), t1(w.mesh, 0.0), t2(w.mesh, 0.0);
    out.time = w.time;
    apply_K_into(p, m, w.v, out.v, t1.v, t2.v);
    return out;
}

// B_h v = K1 v - T1 lap v on real points.
inline void apply_B_into(const PlateParams& p, const Mesh& m, const std::vector<double>& v,
                         std::vector<double>& out, std::vector<double>& t1) {
    if (p.T1 != 0.0) laplacian_into(m, v, t1, true);
    for (int i = 0; i < m.n1; ++i) {
        for (int j = 0; j < m.n2; ++j) {
            const long c = m.at(i, j);
            out[c] = p.K1 * v[c] - (p.T1 != 0.0 ? p.T1 * t1[c] : 0.0);
        }
    }
}

inline Field apply_B(const PlateParams& p, const Mesh& m, const Field& v) {
    Field out(v.mesh, 0.0), t1(v.mesh, 0.0);
    out.time = v.time;
    apply_B_into(p, m, v.v, out.v, t1.v);
    return out;
}

// ---------------------------------------------------------------------------
// Ghost fill.  Writes Dirichlet boundary values and both ghost layers so that
// the discrete boundary conditions hold; tderiv selects the time derivative
// of the data (0 for w, 1 for v, 2 for a).  The map is affine in the real
// values and idempotent.  Ghost closures that are linear in one unknown are
// solved by probing the residual, which keeps the code identical to the
// written-out discrete conditions.
// ---------------------------------------------------------------------------

namespace detail {

struct SideFrame {
    const Mesh* m;
    int axis, sign, base;
    double hn, ht;

    // (layer l, tangential tau) -> (i, j); l > 0 lies outside the domain.
    std::pair<int, int> node(int l, int tau) const {
        const int a = base + sign * l;
        return axis == 0 ? std::make_pair(a, tau) : std::make_pair(tau, a);
    }
    int extent() const { return axis == 0 ? m->n2 : m->n1; }
};

inline SideFrame frame(const Mesh& m, const BoundarySide& s) {
    return {&m, s.normal_axis, s.normal_sign, s.layer_index,
            s.normal_axis == 0 ? m.h1 : m.h2, s.normal_axis == 0 ? m.h2 : m.h1};
}

class GhostWriter {
public:
    GhostWriter(const Mesh& m, std::vector<double>& v, std::vector<uint8_t>* written)
        : m_(m), v_(v), written_(written) {}
    double get(int i, int j) const { return v_[m_.at(i, m_.wrap2(j))]; }
    double get(std::pair<int, int> p) const { return get(p.first, p.second); }
    void set(int i, int j, double val) {
        const long k = m_.at(i, m_.wrap2(j));
        v_[k] = val;
        if (written_) (*written_)[k] = 1;
    }
    void set(std::pair<int, int> p, double val) { set(p.first, p.second, val); }

private:
    const Mesh& m_;
    std::vector<double>& v_;
    std::vector<uint8_t>* written_;
};

template <typename F>
double solve_linear(F&& residual) {
    const double r0 = residual(0.0);
    const double r1 = residual(1.0);
    return -r0 / (r1 - r0);
}

inline double tangential_dd(const GhostWriter& w, const SideFrame& f, int l, int tau) {
    return (w.get(f.node(l, tau - 1)) - 2.0 * w.get(f.node(l, tau)) + w.get(f.node(l, tau + 1))) /
           (f.ht * f.ht);
}

inline double normal_dd(const GhostWriter& w, const SideFrame& f, int l, int tau) {
    return (w.get(f.node(l - 1, tau)) - 2.0 * w.get(f.node(l, tau)) + w.get(f.node(l + 1, tau))) /
           (f.hn * f.hn);
}

inline void fill_rectangle(const Mesh& m, const BoundarySpec& b, std::vector<double>& vec,
                           double t, int td, std::vector<uint8_t>* written) {
    GhostWriter w(m, vec, written);
    const double nu = b.nu;
    auto data = [&](const BcData& g, int i, int j) {
        return g(m.coord_x(i, j), m.coord_y(i, j), t, td);
    };
    // Data of the condition that closes the first ghost ring.
    auto ring1_data = [&](const SideCondition& c) -> const BcData& {
        return c.kind == BcKind::Free ? c.g0 : c.g1;
    };
    // Residual of that condition at boundary point tau (moment or slope form).
    auto ring1_residual = [&](const SideCondition& c, const SideFrame& f, int tau, int ci,
                              int cj) {
        if (c.kind == BcKind::Clamped)
            return (w.get(f.node(1, tau)) - w.get(f.node(-1, tau))) / (2.0 * f.hn) -
                   data(c.g1, ci, cj);
        return normal_dd(w, f, 0, tau) + nu * tangential_dd(w, f, 0, tau) -
               data(ring1_data(c), ci, cj);
    };

    // Dirichlet boundary values; the pin overrides one real point.
    for (const auto& s : m.sides) {
        const auto& c = b.on(s.id);
        if (c.kind == BcKind::Free) continue;
        const SideFrame f = frame(m, s);
        for (int tau = 0; tau < f.extent(); ++tau) {
            auto [i, j] = f.node(0, tau);
            w.set(i, j, data(c.g0, i, j));
        }
    }
    if (b.pin) {
        const int pi = std::clamp(static_cast<int>(std::lround(((*b.pin)[0] - m.x0) / m.h1)), 0,
                                  m.n1 - 1);
        const int pj = std::clamp(static_cast<int>(std::lround(((*b.pin)[1] - m.y0) / m.h2)), 0,
                                  m.n2 - 1);
        w.set(pi, pj, 0.0);
    }

    // First ghost ring away from corners.
    for (const auto& s : m.sides) {
        const auto& c = b.on(s.id);
        const SideFrame f = frame(m, s);
        for (int tau = 1; tau < f.extent() - 1; ++tau) {
            auto [bi, bj] = f.node(0, tau);
            auto g = f.node(1, tau);
            if (c.kind == BcKind::Clamped) {
                w.set(g, w.get(f.node(-1, tau)) + 2.0 * f.hn * data(c.g1, bi, bj));
            } else {
                w.set(g, solve_linear([&](double u) {
                          w.set(g, u);
                          return ring1_residual(c, f, tau, bi, bj);
                      }));
            }
        }
    }

    // Corners: the two ring-1 conditions meeting at a corner couple through
    // the tangential differences, giving a 2x2 system per corner.
    struct Corner {
        SideId a, bside;
        int ci, cj; // real corner indices
    };
    const std::array<Corner, 4> corners{{{SideId::Left, SideId::Bottom, 0, 0},
                                         {SideId::Left, SideId::Top, 0, m.n2 - 1},
                                         {SideId::Right, SideId::Bottom, m.n1 - 1, 0},
                                         {SideId::Right, SideId::Top, m.n1 - 1, m.n2 - 1}}};
    for (const auto& cn : corners) {
        const auto& ca = b.on(cn.a);
        const auto& cb = b.on(cn.bside);
        const SideFrame fa = frame(m, m.side(cn.a));
        const SideFrame fb = frame(m, m.side(cn.bside));
        const int tau_a = cn.cj; // side a is Left/Right, tangential index is j
        const int tau_b = cn.ci;
        auto ga = fa.node(1, tau_a);
        auto gb = fb.node(1, tau_b);
        auto res = [&](int which) {
            return which == 0 ? ring1_residual(ca, fa, tau_a, cn.ci, cn.cj)
                              : ring1_residual(cb, fb, tau_b, cn.ci, cn.cj);
        };
        // Probe the linear 2x2 system in (w[ga], w[gb]).
        w.set(ga, 0.0);
        w.set(gb, 0.0);
        const double r0a = res(0), r0b = res(1);
        w.set(ga, 1.0);
        const double maa = res(0) - r0a, mba = res(1) - r0b;
        w.set(ga, 0.0);
        w.set(gb, 1.0);
        const double mab = res(0) - r0a, mbb = res(1) - r0b;
        const double det = maa * mbb - mab * mba;
        w.set(ga, (-r0a * mbb + r0b * mab) / det);
        w.set(gb, (-r0b * maa + r0a * mba) / det);
    }

    // Corner-diagonal ghosts.  Only free-free corners feed the interior
    // dynamics (through the boundary biharmonic); there the discrete cross
    // derivative w_xy matches the corner data.  Other combinations get a
    // second-order extension that keeps the Laplacian strips defined.
    for (const auto& cn : corners) {
        const auto& ca = b.on(cn.a);
        const auto& cb = b.on(cn.bside);
        const int si = cn.ci == 0 ? -1 : +1; // outward along x
        const int sj = cn.cj == 0 ? -1 : +1; // outward along y
        const int di = cn.ci + si, dj = cn.cj + sj;
        if (ca.kind == BcKind::Free && cb.kind == BcKind::Free) {
            const double cd = b.corner_data(m.coord_x(cn.ci, cn.cj), m.coord_y(cn.ci, cn.cj), t, td);
            const double val = solve_linear([&](double u) {
                w.set(di, dj, u);
                const double cross = (w.get(cn.ci + 1, cn.cj + 1) - w.get(cn.ci + 1, cn.cj - 1) -
                                      w.get(cn.ci - 1, cn.cj + 1) + w.get(cn.ci - 1, cn.cj - 1)) /
                                     (4.0 * m.h1 * m.h2);
                return cross - cd;
            });
            w.set(di, dj, val);
        } else if (ca.kind == BcKind::Clamped || cb.kind == BcKind::Clamped) {
            // Extend the clamped reflection along the tangential ghost row.
            const bool use_a = ca.kind == BcKind::Clamped;
            const SideFrame f = frame(m, m.side(use_a ? cn.a : cn.bside));
            const int tau = use_a ? dj : di;
            auto mirror = f.node(-1, tau);
            const auto& g1 = use_a ? ca.g1 : cb.g1;
            auto [xi, xj] = f.node(0, tau);
            w.set(di, dj, w.get(mirror) + 2.0 * f.hn * data(g1, xi, xj));
        } else {
            w.set(di, dj, w.get(di - si, dj) + w.get(di, dj - sj) - w.get(di - si, dj - sj));
        }
    }

    // Second ghost ring over the full side extent.
    for (const auto& s : m.sides) {
        const auto& c = b.on(s.id);
        const SideFrame f = frame(m, s);
        for (int tau = 0; tau < f.extent(); ++tau) {
            auto g2 = f.node(2, tau);
            switch (c.kind) {
                case BcKind::Clamped:
                    w.set(g2, w.get(f.node(-2, tau)));
                    break;
                case BcKind::SimplySupported: {
                    auto [bi, bj] = f.node(0, tau);
                    w.set(g2, 2.0 * data(c.g0, bi, bj) - w.get(f.node(-2, tau)));
                    break;
                }
                case BcKind::Free: {
                    auto [bi, bj] = f.node(0, tau);
                    const double rhs = data(c.g1, bi, bj);
                    auto bracket = [&](int l) {
                        return normal_dd(w, f, l, tau) + (2.0 - nu) * tangential_dd(w, f, l, tau);
                    };
                    w.set(g2, solve_linear([&](double u) {
                              w.set(g2, u);
                              return (bracket(1) - bracket(-1)) / (2.0 * f.hn) - rhs;
                          }));
                    break;
                }
            }
        }
    }
}

inline void fill_annulus(const Mesh& m, const BoundarySpec& b, std::vector<double>& vec, double t,
                         int td, std::vector<uint8_t>* written) {
    GhostWriter w(m, vec, written);
    const double nu = b.nu;
    auto data = [&](const BcData& g, int i, int j) {
        return g(m.coord_x(i, j), m.coord_y(i, j), t, td);
    };
    const double h1 = m.h1, h2 = m.h2;

    auto radial_dd = [&](int i, int j) {
        return (w.get(i - 1, j) - 2.0 * w.get(i, j) + w.get(i + 1, j)) / (h1 * h1);
    };
    // Polar Laplacian at (i, j); tangential second derivative on the circle
    // is lap - w_rr, which carries the curvature term automatically.
    auto lap_at = [&](int i, int j) {
        const double r = m.radius(i);
        return radial_dd(i, j) + (w.get(i + 1, j) - w.get(i - 1, j)) / (2.0 * h1 * r) +
               (w.get(i, j - 1) - 2.0 * w.get(i, j) + w.get(i, j + 1)) / (h2 * h2 * r * r);
    };

    for (const auto& s : m.sides) {
        const auto& c = b.on(s.id);
        const int ib = s.layer_index, sg = s.normal_sign;
        const int g1i = ib + sg, g2i = ib + 2 * sg, in1 = ib - sg, in2 = ib - 2 * sg;

        if (c.kind != BcKind::Free)
            for (int j = 0; j < m.n2; ++j) w.set(ib, j, data(c.g0, ib, j));

        for (int j = 0; j < m.n2; ++j) {
            if (c.kind == BcKind::Clamped) {
                w.set(g1i, j, w.get(in1, j) + 2.0 * h1 * data(c.g1, ib, j));
            } else {
                const BcData& g = c.kind == BcKind::SimplySupported ? c.g1 : c.g0;
                const double rhs = data(g, ib, j);
                w.set(g1i, j, solve_linear([&](double u) {
                          w.set(g1i, j, u);
                          const double wrr = radial_dd(ib, j);
                          return wrr + nu * (lap_at(ib, j) - wrr) - rhs;
                      }));
            }
        }
        for (int j = 0; j < m.n2; ++j) {
            switch (c.kind) {
                case BcKind::Clamped:
                    w.set(g2i, j, w.get(in2, j));
                    break;
                case BcKind::SimplySupported:
                    w.set(g2i, j, 2.0 * data(c.g0, ib, j) - w.get(in2, j));
                    break;
                case BcKind::Free: {
                    const double rhs = data(c.g1, ib, j);
                    auto bracket = [&](int i) {
                        const double wrr = radial_dd(i, j);
                        return wrr + (2.0 - nu) * (lap_at(i, j) - wrr);
                    };
                    w.set(g2i, j, solve_linear([&](double u) {
                              w.set(g2i, j, u);
                              return sg * (bracket(ib + 1) - bracket(ib - 1)) / (2.0 * h1) - rhs;
                          }));
                    break;
                }
            }
        }
    }

    if (b.pin) {
        const double pr = std::hypot((*b.pin)[0], (*b.pin)[1]);
        double pth = std::atan2((*b.pin)[1], (*b.pin)[0]);
        if (pth < 0) pth += 2.0 * std::numbers::pi;
        const int pi = std::clamp(static_cast<int>(std::lround((pr - m.r_in) / h1)), 0, m.n1 - 1);
        const int pj = m.wrap2(static_cast<int>(std::lround(pth / h2)));
        w.set(pi, pj, 0.0);
    }

    // Periodic wrap of the theta ghost columns, radial ghosts included.
    for (int i = -Mesh::ghost; i < m.n1 + Mesh::ghost; ++i) {
        for (int j : {-2, -1, m.n2, m.n2 + 1}) {
            const long k = m.at(i, j);
            vec[k] = vec[m.at(i, m.wrap2(j))];
            if (written) (*written)[k] = 1;
        }
    }
}

} // namespace detail

inline void fill_ghosts(const Mesh& m, const BoundarySpec& b, std::vector<double>& vec, double t,
                        int tderiv = 0, std::vector<uint8_t>* written = nullptr) {
    if (m.kind == MeshKind::Rectangle)
        detail::fill_rectangle(m, b, vec, t, tderiv, written);
    else
        detail::fill_annulus(m, b, vec, t, tderiv, written);
}

inline void fill_ghosts(Field& f, const BoundarySpec& b, double t, int tderiv = 0) {
    fill_ghosts(*f.mesh, b, f.v, t, tderiv);
}

// ---------------------------------------------------------------------------
// Node classification.  PDE rows live on interior points and on free-side
// boundary points; clamped/supported boundary points (and the pin) carry
// Dirichlet rows; ghosts written by the fill carry its closure relations.
// ---------------------------------------------------------------------------

enum class NodeClass : uint8_t { Interior, FreeBoundary, Dirichlet, GhostFilled, GhostUnused };

struct NodeMap {
    std::shared_ptr<const Mesh> mesh;
    std::vector<NodeClass> cls;
    std::vector<long> pde_nodes;   // raw indices, deterministic order
    std::vector<long> ghost_nodes; // filled ghosts

    bool is_pde(long k) const {
        return cls[k] == NodeClass::Interior || cls[k] == NodeClass::FreeBoundary;
    }
};

inline NodeMap classify(std::shared_ptr<const Mesh> mesh, const BoundarySpec& b) {
    const Mesh& m = *mesh;
    NodeMap nm;
    nm.mesh = mesh;
    nm.cls.assign(m.size(), NodeClass::GhostUnused);

    std::vector<double> probe(m.size(), 0.0);
    std::vector<uint8_t> written(m.size(), 0);
    fill_ghosts(m, b, probe, 0.0, 0, &written);

    for (int i = 0; i < m.n1; ++i) {
        for (int j = 0; j < m.n2; ++j) {
            const long k = m.at(i, j);
            if (!m.is_boundary(i, j)) {
                nm.cls[k] = NodeClass::Interior;
                continue;
            }
            bool dirichlet = false;
            if (m.kind == MeshKind::Annulus) {
                const SideId s = (i == 0) ? SideId::Inner : SideId::Outer;
                dirichlet = b.kind_of(s) != BcKind::Free;
            } else {
                if (i == 0 && b.kind_of(SideId::Left) != BcKind::Free) dirichlet = true;
                if (i == m.n1 - 1 && b.kind_of(SideId::Right) != BcKind::Free) dirichlet = true;
                if (j == 0 && b.kind_of(SideId::Bottom) != BcKind::Free) dirichlet = true;
                if (j == m.n2 - 1 && b.kind_of(SideId::Top) != BcKind::Free) dirichlet = true;
            }
            nm.cls[k] = dirichlet ? NodeClass::Dirichlet : NodeClass::FreeBoundary;
        }
    }
    // Pin: the fill writes exactly one real non-boundary node.
    for (int i = 0; i < m.n1; ++i)
        for (int j = 0; j < m.n2; ++j)
            if (written[m.at(i, j)] && nm.cls[m.at(i, j)] == NodeClass::Interior && b.pin)
                nm.cls[m.at(i, j)] = NodeClass::Dirichlet;

    for (long k = 0; k < m.size(); ++k) {
        if (nm.cls[k] == NodeClass::GhostUnused && written[k]) nm.cls[k] = NodeClass::GhostFilled;
        if (nm.is_pde(k)) nm.pde_nodes.push_back(k);
        if (nm.cls[k] == NodeClass::GhostFilled) nm.ghost_nodes.push_back(k);
    }
    return nm;
}

} // namespace plate

#endif
