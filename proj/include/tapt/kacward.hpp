#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <vector>

#include "tapt/lattice.hpp"

namespace tapt {

// Straight-line planar embedding of the free sublattice plus (when a clamp is
// present) a single ghost vertex that carries the clamp-induced boundary
// fields back as edges. Directed edges come in reverse pairs 2m / 2m+1.
struct PlanarEmbedding {
    struct Vertex {
        double x, y;
    };
    struct DirectedEdge {
        std::uint32_t from, to;
        double angle;        // atan2 direction of the straight segment
        double weight_sign;  // +1 for free-free edges, clamp sign for ghost edges
    };

    std::vector<Vertex> vertices;       // free sites in raster order, then ghost
    std::vector<DirectedEdge> edges;    // 2 per undirected edge
    std::size_t n_free = 0;             // |U|
    std::size_t n_uu_edges = 0;         // free-free undirected edges
    std::size_t n_fu_edges = 0;         // clamped-free undirected edges (= ghost degree)
    double clamped_bond_sum = 0.0;      // sum of sigma_x sigma_y over clamped-clamped bonds
    bool has_ghost = false;
};

// Builds the embedding for an open-boundary 2D grid whose clamp covers the
// first k full rows (k may be 0). The ghost vertex sits far above the first
// free row; the construction is validated geometrically (no edge crossings,
// no vertex on a foreign edge). Throws GeometryError otherwise.
PlanarEmbedding build_kac_ward_embedding(const LatticeSpec& spec,
                                         const std::map<std::uint32_t, int>& clamp);

// Kac-Ward transition matrix over directed edges at inverse temperature beta:
//   Q_{e,e'} = C(e') exp(i/2 dtheta(e,e'))   if head(e) = tail(e'), e' != reverse(e)
// with C = tanh(beta J) on free-free edges and sigma_x tanh(beta J) on
// free-ghost edges.
struct KacWardMatrix {
    Eigen::MatrixXcd q;
    double max_weight = 0.0;
};
KacWardMatrix build_kac_ward_matrix(const PlanarEmbedding& emb, double beta, double j);

// log det(I - Q) via complex LU with partial pivoting, accumulating
// log-magnitude and phase. The determinant of a valid Kac-Ward matrix is real
// and positive; a wrapped phase above 1e-8 or a singular factor raises
// NumericError (reporting beta).
double kac_ward_log_det(const KacWardMatrix& m, double beta);

// Exact logZ of the open-boundary uniform-J grid with an optional clamp on a
// contiguous top region:
//   logZ = sum_{clamped bonds} beta J sigma sigma
//        + (#UU + #FU edges) log cosh(beta J)
//        + |U| log 2 + 1/2 log det(I - Q).
double kac_ward_log_z(const LatticeSpec& spec, double beta,
                      const std::map<std::uint32_t, int>& clamp = {});

// Clamp pattern for the top `rows` rows: -1 inside a disc of radius lx/5
// centered on the clamp/free boundary midline, +1 elsewhere.
std::map<std::uint32_t, int> semicircle_defect_clamp(const LatticeSpec& spec, int rows);

}  // namespace tapt
