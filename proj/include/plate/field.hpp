#ifndef PLATE_FIELD_HPP
#define PLATE_FIELD_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "plate/mesh.hpp"

namespace plate {

// Grid function stored over the full index frame (real points + ghosts).
struct Field {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> v;
    double time = 0.0;

    Field() = default;
    explicit Field(std::shared_ptr<const Mesh> m, double init = 0.0)
        : mesh(std::move(m)), v(mesh->size(), init) {}

    double& operator()(int i, int j) { return v[mesh->at(i, j)]; }
    double operator()(int i, int j) const { return v[mesh->at(i, j)]; }

    // Wrapping accessor for the periodic direction; identical cost on rectangles.
    double wat(int i, int j) const { return v[mesh->at(i, mesh->wrap2(j))]; }

    void fill(double value) { std::fill(v.begin(), v.end(), value); }

    // Samples f(x, y) at every stored point, ghosts included.
    void sample(const std::function<double(double, double)>& f) {
        const Mesh& m = *mesh;
        for (int i = -Mesh::ghost; i < m.n1 + Mesh::ghost; ++i)
            for (int j = -Mesh::ghost; j < m.n2 + Mesh::ghost; ++j)
                v[m.at(i, j)] = f(m.coord_x(i, j), m.coord_y(i, j));
    }

    void sample_real(const std::function<double(double, double)>& f) {
        const Mesh& m = *mesh;
        for (int i = 0; i < m.n1; ++i)
            for (int j = 0; j < m.n2; ++j)
                v[m.at(i, j)] = f(m.coord_x(i, j), m.coord_y(i, j));
    }

    double max_abs_real() const {
        const Mesh& m = *mesh;
        double r = 0.0;
        for (int i = 0; i < m.n1; ++i)
            for (int j = 0; j < m.n2; ++j)
                r = std::max(r, std::abs(v[m.at(i, j)]));
        return r;
    }

    bool finite_real() const {
        const Mesh& m = *mesh;
        for (int i = 0; i < m.n1; ++i)
            for (int j = 0; j < m.n2; ++j)
                if (!std::isfinite(v[m.at(i, j)])) return false;
        return true;
    }
};

// Bilinear interpolation of a field at a physical point.  Points are mapped
// to fractional grid indices (annulus: polar), then clamped to the real grid.
inline double interpolate(const Field& f, double x, double y) {
    const Mesh& m = *f.mesh;
    double fi, fj;
    if (m.kind == MeshKind::Rectangle) {
        fi = (x - m.x0) / m.h1;
        fj = (y - m.y0) / m.h2;
    } else {
        const double r = std::hypot(x, y);
        double th = std::atan2(y, x);
        if (th < 0) th += 2.0 * std::numbers::pi;
        fi = (r - m.r_in) / m.h1;
        fj = th / m.h2;
    }
    fi = std::clamp(fi, 0.0, static_cast<double>(m.n1 - 1));
    if (!m.periodic2) fj = std::clamp(fj, 0.0, static_cast<double>(m.n2 - 1));
    int i0 = std::min(static_cast<int>(std::floor(fi)), m.n1 - 2);
    int j0 = static_cast<int>(std::floor(fj));
    if (!m.periodic2) j0 = std::min(j0, m.n2 - 2);
    const double a = fi - i0, b = fj - j0;
    return (1 - a) * (1 - b) * f.wat(i0, j0) + a * (1 - b) * f.wat(i0 + 1, j0) +
           (1 - a) * b * f.wat(i0, j0 + 1) + a * b * f.wat(i0 + 1, j0 + 1);
}

} // namespace plate

#endif
