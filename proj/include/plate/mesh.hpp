#ifndef PLATE_MESH_HPP
#define PLATE_MESH_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "plate/errors.hpp"

namespace plate {

enum class MeshKind { Rectangle, Annulus };

// Rectangle sides are numbered so that the owner of a shared corner is the
// side with the smaller id (Left/Right own the four corners).
enum class SideId : int { Left = 0, Right = 1, Bottom = 2, Top = 3, Inner = 4, Outer = 5 };

inline const char* side_name(SideId s) {
    switch (s) {
        case SideId::Left: return "left";
        case SideId::Right: return "right";
        case SideId::Bottom: return "bottom";
        case SideId::Top: return "top";
        case SideId::Inner: return "inner";
        case SideId::Outer: return "outer";
    }
    return "?";
}

struct BoundarySide {
    SideId id;
    int normal_axis;   // 0: first index direction (x or r), 1: second (y or theta)
    int normal_sign;   // outward normal points along normal_axis * normal_sign
    int layer_index;   // real index of the boundary layer along normal_axis
};

// Structured grid (Cartesian rectangle or polar annulus) with two ghost
// layers on the non-periodic directions.  Real points are indexed
// (i, j) in [0, n1) x [0, n2); storage includes a two-deep ghost frame so
// raw indices are offset by +2.  Immutable after construction.
class Mesh {
public:
    static constexpr int ghost = 2;

    MeshKind kind = MeshKind::Rectangle;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1; // rectangle extents
    double r_in = 0, r_out = 0;            // annulus radii
    int n1 = 0, n2 = 0;                    // real grid points per index direction
    double h1 = 0, h2 = 0;                 // spacings (annulus: h2 in radians)
    bool periodic2 = false;                // true only for the annulus theta direction
    std::vector<BoundarySide> sides;

    int N1() const { return n1 + 2 * ghost; }
    int N2() const { return n2 + 2 * ghost; }
    long size() const { return static_cast<long>(N1()) * N2(); }

    // i in [-2, n1+1], j in [-2, n2+1] (real-relative indices).
    long at(int i, int j) const { return static_cast<long>(i + ghost) * N2() + (j + ghost); }

    bool is_real(int i, int j) const { return i >= 0 && i < n1 && j >= 0 && j < n2; }
    bool is_boundary(int i, int j) const {
        if (!is_real(i, j)) return false;
        if (kind == MeshKind::Annulus) return i == 0 || i == n1 - 1;
        return i == 0 || i == n1 - 1 || j == 0 || j == n2 - 1;
    }
    bool is_interior(int i, int j) const { return is_real(i, j) && !is_boundary(i, j); }

    // Wraps a second-direction index onto [0, n2) for periodic meshes.
    int wrap2(int j) const {
        if (!periodic2) return j;
        int m = j % n2;
        return m < 0 ? m + n2 : m;
    }

    double radius(int i) const { return r_in + i * h1; } // annulus only
    double theta(int j) const { return wrap2(j) * h2; }

    double coord_x(int i, int j) const {
        if (kind == MeshKind::Rectangle) return x0 + i * h1;
        return radius(i) * std::cos(theta(j));
    }
    double coord_y(int i, int j) const {
        if (kind == MeshKind::Rectangle) return y0 + j * h2;
        return radius(i) * std::sin(theta(j));
    }

    // All real boundary points of one side; corners appear in the owner side only.
    std::vector<std::pair<int, int>> owned_boundary_points(SideId s) const {
        std::vector<std::pair<int, int>> pts;
        switch (s) {
            case SideId::Left:
                for (int j = 0; j < n2; ++j) pts.emplace_back(0, j);
                break;
            case SideId::Right:
                for (int j = 0; j < n2; ++j) pts.emplace_back(n1 - 1, j);
                break;
            case SideId::Bottom:
                for (int i = 1; i < n1 - 1; ++i) pts.emplace_back(i, 0);
                break;
            case SideId::Top:
                for (int i = 1; i < n1 - 1; ++i) pts.emplace_back(i, n2 - 1);
                break;
            case SideId::Inner:
                for (int j = 0; j < n2; ++j) pts.emplace_back(0, j);
                break;
            case SideId::Outer:
                for (int j = 0; j < n2; ++j) pts.emplace_back(n1 - 1, j);
                break;
        }
        return pts;
    }

    const BoundarySide& side(SideId s) const {
        for (const auto& b : sides)
            if (b.id == s) return b;
        throw ConfigError(std::string("mesh has no side '") + side_name(s) + "'");
    }
};

inline std::shared_ptr<const Mesh> build_rectangle(double x0, double x1, double y0, double y1,
                                                   int n1, int n2) {
    if (!(x1 > x0) || !(y1 > y0))
        throw ConfigError("rectangle extents must satisfy x1>x0 and y1>y0");
    if (n1 < 5 || n2 < 5)
        throw ConfigError("rectangle mesh needs at least 5 points per direction");
    auto m = std::make_shared<Mesh>();
    m->kind = MeshKind::Rectangle;
    m->x0 = x0; m->x1 = x1; m->y0 = y0; m->y1 = y1;
    m->n1 = n1; m->n2 = n2;
    m->h1 = (x1 - x0) / (n1 - 1);
    m->h2 = (y1 - y0) / (n2 - 1);
    m->periodic2 = false;
    m->sides = {
        {SideId::Left, 0, -1, 0},
        {SideId::Right, 0, +1, n1 - 1},
        {SideId::Bottom, 1, -1, 0},
        {SideId::Top, 1, +1, n2 - 1},
    };
    return m;
}

inline std::shared_ptr<const Mesh> build_annulus(double r_in, double r_out, int n1, int n2) {
    if (!(r_in > 0))
        throw ConfigError("annulus inner radius must be positive");
    if (!(r_out > r_in))
        throw ConfigError("annulus needs r_out > r_in");
    if (n1 < 5 || n2 < 8)
        throw ConfigError("annulus mesh needs n1 >= 5 and n2 >= 8");
    auto m = std::make_shared<Mesh>();
    m->kind = MeshKind::Annulus;
    m->r_in = r_in; m->r_out = r_out;
    m->n1 = n1; m->n2 = n2;
    m->h1 = (r_out - r_in) / (n1 - 1);
    m->h2 = 2.0 * std::numbers::pi / n2;
    m->periodic2 = true;
    if (r_in - Mesh::ghost * m->h1 <= 0.0)
        throw ConfigError("annulus too coarse: ghost radii reach past the origin");
    m->sides = {
        {SideId::Inner, 0, -1, 0},
        {SideId::Outer, 0, +1, n1 - 1},
    };
    return m;
}

inline double min_physical_spacing(const Mesh& m) {
    if (m.kind == MeshKind::Rectangle) return std::min(m.h1, m.h2);
    return std::min(m.h1, m.r_in * m.h2);
}

} // namespace plate

#endif
