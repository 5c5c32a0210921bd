#ifndef PLATE_ASSEMBLE_HPP
#define PLATE_ASSEMBLE_HPP

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <vector>

#include "plate/fdops.hpp"

namespace plate {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

namespace detail {

// Sparse Laplacian with rows on real points and, optionally, the first ghost
// strips (needed to compose the biharmonic through ghost rows).
inline SpMat laplacian_matrix(const Mesh& m, bool strips) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(6 * m.size());
    auto add = [&](long row, int i, int j, double c) {
        trip.emplace_back(row, m.at(i, m.wrap2(j)), c);
    };
    const double c1 = 1.0 / (m.h1 * m.h1), c2 = 1.0 / (m.h2 * m.h2);
    const int lo = strips ? -1 : 0;
    const int hi1 = strips ? m.n1 + 1 : m.n1;
    for (int i = lo; i < hi1; ++i) {
        const bool gi = (i < 0 || i >= m.n1);
        if (m.kind == MeshKind::Rectangle) {
            const int lo2 = strips ? -1 : 0, hi2 = strips ? m.n2 + 1 : m.n2;
            for (int j = lo2; j < hi2; ++j) {
                if (gi && (j < 0 || j >= m.n2)) continue;
                const long r = m.at(i, j);
                add(r, i - 1, j, c1);
                add(r, i + 1, j, c1);
                add(r, i, j - 1, c2);
                add(r, i, j + 1, c2);
                add(r, i, j, -2.0 * (c1 + c2));
            }
        } else {
            const double rad = m.radius(i);
            const double cr = 1.0 / (2.0 * m.h1 * rad), ct = c2 / (rad * rad);
            for (int j = 0; j < m.n2; ++j) {
                const long r = m.at(i, j);
                add(r, i - 1, j, c1 - cr);
                add(r, i + 1, j, c1 + cr);
                add(r, i, j - 1, ct);
                add(r, i, j + 1, ct);
                add(r, i, j, -2.0 * (c1 + ct));
            }
        }
    }
    SpMat L(m.size(), m.size());
    L.setFromTriplets(trip.begin(), trip.end());
    return L;
}

} // namespace detail

// Assembled operator c0 I + cK K_h + cB B_h over the full node frame, with
// the PDE rows on interior/free-boundary points and the ghost/boundary rows
// replaced by the boundary-condition relations (homogeneous structure; data
// enters through bc_rhs).
struct Assembly {
    std::shared_ptr<const Mesh> mesh;
    NodeMap nodes;
    SpMat A;
    SpMat ghost_relations; // rows at ghosts: w_g - sum(M w_real) = data response
};

inline Assembly assemble(const PlateParams& p, std::shared_ptr<const Mesh> mesh,
                         const BoundarySpec& b, double c0, double cK, double cB) {
    const Mesh& m = *mesh;
    Assembly as;
    as.mesh = mesh;
    as.nodes = classify(mesh, b);
    const long n = m.size();

    // PDE rows from the stencil composition.
    SpMat L = detail::laplacian_matrix(m, true);
    SpMat Lr = detail::laplacian_matrix(m, false);
    SpMat L2 = Lr * L;

    std::vector<Eigen::Triplet<double>> trip;
    std::vector<char> keep(n, 0);
    for (long k : as.nodes.pde_nodes) keep[k] = 1;

    const double cI = c0 + cK * p.K0 + cB * p.K1;
    const double cL = -cK * p.T - cB * p.T1;
    const double cLL = cK * p.D;
    for (long k : as.nodes.pde_nodes) trip.emplace_back(k, k, cI);
    auto add_rows = [&](const SpMat& M, double c) {
        if (c == 0.0) return;
        for (int col = 0; col < M.outerSize(); ++col)
            for (SpMat::InnerIterator it(M, col); it; ++it)
                if (keep[it.row()]) trip.emplace_back(it.row(), it.col(), c * it.value());
    };
    add_rows(L, cL);
    add_rows(L2, cLL);

    // Boundary/ghost rows, probed from the ghost fill with homogeneous data.
    // A probe at a near-boundary real node k reveals every closure
    // coefficient M[g,k]; the relation row is  w_g - sum_k M[g,k] w_k.
    BoundarySpec hom = b;
    for (auto& [id, c] : hom.side) {
        c.g0 = zero_data();
        c.g1 = zero_data();
    }
    hom.corner_data = zero_data();

    std::vector<long> probe_cols;
    for (int i = 0; i < m.n1; ++i) {
        for (int j = 0; j < m.n2; ++j) {
            // every real node a ghost value can depend on: near a side, or (on
            // the annulus) feeding a periodic wrap column
            bool near = i <= 2 || i >= m.n1 - 3;
            if (m.kind == MeshKind::Rectangle)
                near = near || j <= 2 || j >= m.n2 - 3;
            else
                near = near || j <= 1 || j >= m.n2 - 2;
            if (near) probe_cols.push_back(m.at(i, j));
        }
    }

    std::vector<Eigen::Triplet<double>> ghost_trip;
    std::vector<double> probe(n, 0.0);
    for (long col : probe_cols) {
        std::fill(probe.begin(), probe.end(), 0.0);
        probe[col] = 1.0;
        fill_ghosts(m, hom, probe, 0.0, 0, nullptr);
        for (long g : as.nodes.ghost_nodes)
            if (probe[g] != 0.0) ghost_trip.emplace_back(g, col, probe[g]);
    }
    as.ghost_relations.resize(n, n);
    as.ghost_relations.setFromTriplets(ghost_trip.begin(), ghost_trip.end());

    for (long g : as.nodes.ghost_nodes) trip.emplace_back(g, g, 1.0);
    for (int col = 0; col < as.ghost_relations.outerSize(); ++col)
        for (SpMat::InnerIterator it(as.ghost_relations, col); it; ++it)
            trip.emplace_back(it.row(), it.col(), -it.value());

    // Dirichlet and unused nodes keep identity rows.
    for (long k = 0; k < n; ++k)
        if (as.nodes.cls[k] == NodeClass::Dirichlet || as.nodes.cls[k] == NodeClass::GhostUnused)
            trip.emplace_back(k, k, 1.0);

    as.A.resize(n, n);
    as.A.setFromTriplets(trip.begin(), trip.end());
    as.A.makeCompressed();
    return as;
}

// Inhomogeneous boundary data response: the fill applied to the zero field.
// Writes the Dirichlet values and ghost-relation right-hand sides into rhs
// (PDE rows untouched).
inline void bc_rhs(const Mesh& m, const BoundarySpec& b, const NodeMap& nodes, double t,
                   int tderiv, Vec& rhs) {
    static thread_local std::vector<double> zero;
    zero.assign(m.size(), 0.0);
    fill_ghosts(m, b, zero, t, tderiv, nullptr);
    for (long k = 0; k < m.size(); ++k)
        if (nodes.cls[k] == NodeClass::Dirichlet || nodes.cls[k] == NodeClass::GhostFilled)
            rhs[k] = zero[k];
}

} // namespace plate

#endif
