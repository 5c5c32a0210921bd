#ifndef PLATE_MODAL_HPP
#define PLATE_MODAL_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <vector>

#include "plate/assemble.hpp"
#include "plate/fdops.hpp"

namespace plate {

// Eigenpair of the discrete stiffness operator K_h phi = lambda phi with
// homogeneous boundary conditions.
struct Mode {
    double lambda = 0.0;
    double f = 0.0;      // natural frequency (Hz)
    Field phi;           // |phi|_2 = 1 over real points, ghosts filled
    double residual = 0.0;
};

inline double natural_frequency(double lambda, double rho_h) {
    if (rho_h <= 0) throw ConfigError("rho_h must be positive");
    if (lambda < 0) throw ConfigError("negative eigenvalue fed to natural_frequency; "
                                      "operator is indefinite (check BCs/assembly)");
    return std::sqrt(lambda / rho_h) / (2.0 * pi);
}

namespace detail {

// Interior-eliminated stiffness operator: ghost/boundary unknowns folded into
// the active (PDE) dofs through the homogeneous closure relations.
struct ReducedOperator {
    std::vector<long> active;      // full index of each active dof
    std::vector<long> active_of;   // full -> active (-1 if eliminated)
    SpMat A;                       // active x active
};

inline ReducedOperator reduce_stiffness(const PlateParams& p, std::shared_ptr<const Mesh> mesh,
                                        const BoundarySpec& b) {
    Assembly as = assemble(p, mesh, b, 0.0, 1.0, 0.0);
    const long n = mesh->size();
    ReducedOperator red;
    red.active = as.nodes.pde_nodes;
    red.active_of.assign(n, -1);
    for (size_t c = 0; c < red.active.size(); ++c) red.active_of[red.active[c]] = c;

    // Prolongation P: active values -> full vector via the ghost relations.
    std::vector<Eigen::Triplet<double>> pt;
    for (size_t c = 0; c < red.active.size(); ++c) pt.emplace_back(red.active[c], c, 1.0);
    for (int col = 0; col < as.ghost_relations.outerSize(); ++col)
        for (SpMat::InnerIterator it(as.ghost_relations, col); it; ++it)
            if (red.active_of[it.col()] >= 0)
                pt.emplace_back(it.row(), red.active_of[it.col()], it.value());
    SpMat P(n, red.active.size());
    P.setFromTriplets(pt.begin(), pt.end());

    // Rows of A at active nodes only (its BC rows are discarded by R).
    std::vector<Eigen::Triplet<double>> rt;
    for (size_t c = 0; c < red.active.size(); ++c) rt.emplace_back(c, red.active[c], 1.0);
    SpMat R(red.active.size(), n);
    R.setFromTriplets(rt.begin(), rt.end());

    red.A = R * as.A * P;
    red.A.makeCompressed();
    return red;
}

} // namespace detail

// Block inverse iteration with Rayleigh-Ritz extraction.  Returns the k modes
// of smallest |lambda| in ascending order; every residual |K phi - lambda phi|
// is at most tol * max(|lambda|, lambda_floor).
inline std::vector<Mode> solve_modes(const PlateParams& p, std::shared_ptr<const Mesh> mesh,
                                     const BoundarySpec& b, int k, double tol = 1e-9,
                                     int max_sweeps = 200) {
    if (k < 1) throw ConfigError("need at least one mode");
    detail::ReducedOperator red = detail::reduce_stiffness(p, mesh, b);
    const long n = red.A.rows();
    const int block = std::min<long>(k + 4, n);

    // Factorize with a small negative shift: free plates carry exact rigid
    // null modes, and an unshifted LU of the singular operator yields unusable
    // factors.  Ritz values always come from the unshifted operator.
    double diag_scale = 0.0;
    for (long i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::abs(red.A.coeff(i, i)));
    if (!(diag_scale > 0)) throw SolverError("stiffness operator is identically zero");
    Eigen::SparseLU<SpMat> lu;
    double shift = -1e-6 * diag_scale;
    SpMat I(n, n);
    I.setIdentity();
    for (int attempt = 0; attempt < 3; ++attempt) {
        SpMat S = red.A - shift * I;
        lu.compute(S);
        if (lu.info() == Eigen::Success) break;
        shift *= 100.0;
    }
    if (lu.info() != Eigen::Success) throw SolverError("eigensolver factorization failed");

    std::mt19937 rng(20240517u);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(n, block);
    for (long i = 0; i < n; ++i)
        for (int j = 0; j < block; ++j) X(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    X = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);

    Eigen::VectorXd ritz(block);
    Eigen::MatrixXd vecs(n, block);
    double worst = 1e30;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        Eigen::MatrixXd Y = lu.solve(X);
        Eigen::HouseholderQR<Eigen::MatrixXd> q2(Y);
        X = q2.householderQ() * Eigen::MatrixXd::Identity(n, block);

        Eigen::MatrixXd AX = red.A * X;
        Eigen::MatrixXd H = X.transpose() * AX;
        Eigen::EigenSolver<Eigen::MatrixXd> es(H);
        // Ritz pairs sorted by |lambda|
        std::vector<int> order(block);
        for (int i = 0; i < block; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int bb) {
            return std::abs(es.eigenvalues()[a]) < std::abs(es.eigenvalues()[bb]);
        });
        worst = 0.0;
        for (int i = 0; i < std::min(k, block); ++i) {
            const auto lam = es.eigenvalues()[order[i]];
            ritz[i] = lam.real();
            Eigen::VectorXcd vc = es.eigenvectors().col(order[i]);
            vecs.col(i) = (X * vc.real()).normalized();
            const double res = (red.A * vecs.col(i) - ritz[i] * vecs.col(i)).norm();
            // rigid/null modes are judged against the operator scale
            worst = std::max(worst, res / std::max(std::abs(ritz[i]), 1e-6 * diag_scale));
        }
        if (worst <= tol) break;
    }
    if (worst > tol)
        throw SolverError("eigensolver did not reach tolerance; worst relative residual " +
                          std::to_string(worst));

    // Degenerate clusters: the small eigensolver may return a nearly parallel
    // basis for a multiple eigenvalue.  Rebuild each cluster from the
    // near-nullspace of (H - lambda I) via SVD, which stays well conditioned
    // and yields an orthonormal basis of the eigenspace.
    const int kept = std::min<long>(k, block);
    {
        Eigen::MatrixXd AX = red.A * X;
        Eigen::MatrixXd H = X.transpose() * AX;
        for (int i = 0; i < kept;) {
            int j = i + 1;
            while (j < kept && std::abs(ritz[j] - ritz[i]) <=
                                   1e-7 * std::max(std::abs(ritz[i]), 1e-6 * diag_scale))
                ++j;
            const int m_sz = j - i;
            if (m_sz > 1) {
                double lam_c = 0.0;
                for (int a = i; a < j; ++a) lam_c += ritz[a];
                lam_c /= m_sz;
                Eigen::MatrixXd S = H - lam_c * Eigen::MatrixXd::Identity(block, block);
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeFullV);
                for (int a = 0; a < m_sz; ++a)
                    vecs.col(i + a) = (X * svd.matrixV().col(block - 1 - a)).normalized();
            }
            i = j;
        }
    }

    std::vector<Mode> modes;
    BoundarySpec hom = b;
    for (auto& [id, c] : hom.side) {
        c.g0 = zero_data();
        c.g1 = zero_data();
    }
    hom.corner_data = zero_data();
    // Rigid modes sit at |lambda| ~ machine noise of the kept spectrum, far
    // below any physical eigenvalue; report them as zero frequency.
    double lam_scale = 0.0;
    for (int i = 0; i < kept; ++i) lam_scale = std::max(lam_scale, std::abs(ritz[i]));
    const double lam_floor = 1e-7 * lam_scale;
    for (int i = 0; i < kept; ++i) {
        Mode md;
        md.lambda = ritz[i];
        md.f = natural_frequency(std::abs(md.lambda) < lam_floor ? 0.0 : std::max(md.lambda, 0.0),
                                 p.rho_h);
        md.residual = (red.A * vecs.col(i) - md.lambda * vecs.col(i)).norm();
        md.phi = Field(mesh, 0.0);
        for (long c = 0; c < n; ++c) md.phi.v[red.active[c]] = vecs(c, i);
        fill_ghosts(md.phi, hom, 0.0, 0);
        modes.push_back(std::move(md));
    }
    std::sort(modes.begin(), modes.end(),
              [](const Mode& a, const Mode& b2) { return std::abs(a.lambda) < std::abs(b2.lambda); });
    return modes;
}

// ---------------------------------------------------------------------------
// Nodal lines: marching-squares zero contour of a mode shape, vertices on
// cell edges by linear interpolation, stitched into polylines.
// ---------------------------------------------------------------------------

struct NodalLineSet {
    std::vector<std::vector<std::array<double, 2>>> polylines;
    size_t total_vertices() const {
        size_t s = 0;
        for (const auto& p : polylines) s += p.size();
        return s;
    }
};

namespace detail {

// Edge key: (i, j, horizontal?) of the cell edge carrying the crossing.
struct EdgeKey {
    int i, j, dir;
    bool operator<(const EdgeKey& o) const {
        return std::tie(i, j, dir) < std::tie(o.i, o.j, o.dir);
    }
};

} // namespace detail

inline NodalLineSet nodal_lines(const Field& phi) {
    const Mesh& m = *phi.mesh;
    auto val = [&](int i, int j) { return phi.wat(i, j); };
    auto pos = [&](int i, int j) {
        return std::array<double, 2>{m.coord_x(i, m.wrap2(j)), m.coord_y(i, m.wrap2(j))};
    };
    // Crossing point on the edge from (i,j) to its +dir neighbor.
    auto cross_point = [&](const detail::EdgeKey& e) {
        const int i2 = e.dir == 0 ? e.i + 1 : e.i;
        const int j2 = e.dir == 0 ? e.j : e.j + 1;
        const double a = val(e.i, e.j), b = val(i2, j2);
        const double s = a / (a - b);
        // interpolate in index space, map to physical coordinates
        if (m.kind == MeshKind::Rectangle) {
            auto p0 = pos(e.i, e.j), p1 = pos(i2, j2);
            return std::array<double, 2>{p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1])};
        }
        const double r = m.radius(e.i) + s * (m.radius(i2) - m.radius(e.i));
        const double theta = (e.dir == 1) ? (e.j + s) * m.h2 : m.theta(e.j);
        return std::array<double, 2>{r * std::cos(theta), r * std::sin(theta)};
    };

    const int ni = m.n1 - 1;
    const int nj = m.periodic2 ? m.n2 : m.n2 - 1;
    std::map<detail::EdgeKey, int> edge_vertex;
    std::vector<std::array<double, 2>> verts;
    std::vector<std::pair<int, int>> segments;

    auto vertex_of = [&](detail::EdgeKey e) {
        auto it = edge_vertex.find(e);
        if (it != edge_vertex.end()) return it->second;
        const int id = static_cast<int>(verts.size());
        verts.push_back(cross_point(e));
        edge_vertex[e] = id;
        return id;
    };

    for (int i = 0; i < ni; ++i) {
        for (int j = 0; j < nj; ++j) {
            const double v00 = val(i, j), v10 = val(i + 1, j);
            const double v01 = val(i, j + 1), v11 = val(i + 1, j + 1);
            // strict sign changes only: exact zeros (Dirichlet boundaries)
            // produce no contour of their own
            std::vector<detail::EdgeKey> hits;
            if (v00 * v10 < 0.0) hits.push_back({i, j, 0});
            if (v01 * v11 < 0.0) hits.push_back({i, j + 1, 0});
            if (v00 * v01 < 0.0) hits.push_back({i, j, 1});
            if (v10 * v11 < 0.0) hits.push_back({i + 1, j, 1});
            if (hits.size() == 2) {
                segments.emplace_back(vertex_of(hits[0]), vertex_of(hits[1]));
            } else if (hits.size() == 4) {
                // saddle: split by the cell-center sign
                const double c = 0.25 * (v00 + v10 + v01 + v11);
                // edges: 0 bottom, 1 top, 2 left, 3 right
                if ((c >= 0.0) == (v00 >= 0.0)) {
                    segments.emplace_back(vertex_of(hits[0]), vertex_of(hits[3]));
                    segments.emplace_back(vertex_of(hits[1]), vertex_of(hits[2]));
                } else {
                    segments.emplace_back(vertex_of(hits[0]), vertex_of(hits[2]));
                    segments.emplace_back(vertex_of(hits[1]), vertex_of(hits[3]));
                }
            }
        }
    }

    // Stitch segments into polylines.
    std::vector<std::vector<int>> adj(verts.size());
    for (size_t s = 0; s < segments.size(); ++s) {
        adj[segments[s].first].push_back(static_cast<int>(s));
        adj[segments[s].second].push_back(static_cast<int>(s));
    }
    std::vector<char> used(segments.size(), 0);
    NodalLineSet out;
    for (size_t start = 0; start < segments.size(); ++start) {
        if (used[start]) continue;
        // walk both directions from this segment
        std::vector<int> chain{segments[start].first, segments[start].second};
        used[start] = 1;
        for (int dir = 0; dir < 2; ++dir) {
            bool grew = true;
            while (grew) {
                grew = false;
                const int tip = dir == 0 ? chain.back() : chain.front();
                for (int s : adj[tip]) {
                    if (used[s]) continue;
                    const int other = segments[s].first == tip ? segments[s].second
                                                               : segments[s].first;
                    used[s] = 1;
                    if (dir == 0)
                        chain.push_back(other);
                    else
                        chain.insert(chain.begin(), other);
                    grew = true;
                    break;
                }
            }
        }
        std::vector<std::array<double, 2>> poly;
        poly.reserve(chain.size());
        for (int vtx : chain) poly.push_back(verts[vtx]);
        out.polylines.push_back(std::move(poly));
    }
    return out;
}

inline NodalLineSet nodal_lines(const Mode& mode) { return nodal_lines(mode.phi); }

} // namespace plate

#endif
