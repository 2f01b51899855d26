#include "tapt/kacward.hpp"

#include <cmath>
#include <numbers>

#include "tapt/errors.hpp"

namespace tapt {

namespace {

struct Segment {
    double x0, y0, x1, y1;
};

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// Proper or improper intersection of two segments that do not share an
// endpoint. Shared endpoints are the fan vertex / lattice vertices and are
// fine; anything else breaks the planarity the determinant formula needs.
bool segments_conflict(const Segment& a, const Segment& b) {
    auto orient = [](double px, double py, double qx, double qy, double rx, double ry) {
        return cross(qx - px, qy - py, rx - px, ry - py);
    };
    const double eps = 1e-12;
    const double d1 = orient(a.x0, a.y0, a.x1, a.y1, b.x0, b.y0);
    const double d2 = orient(a.x0, a.y0, a.x1, a.y1, b.x1, b.y1);
    const double d3 = orient(b.x0, b.y0, b.x1, b.y1, a.x0, a.y0);
    const double d4 = orient(b.x0, b.y0, b.x1, b.y1, a.x1, a.y1);
    if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
        ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
        return true;
    return false;
}

bool point_on_open_segment(double px, double py, const Segment& s) {
    const double eps = 1e-9;
    const double c = cross(s.x1 - s.x0, s.y1 - s.y0, px - s.x0, py - s.y0);
    if (std::abs(c) > eps) return false;
    const double dot = (px - s.x0) * (s.x1 - s.x0) + (py - s.y0) * (s.y1 - s.y0);
    const double len2 = (s.x1 - s.x0) * (s.x1 - s.x0) + (s.y1 - s.y0) * (s.y1 - s.y0);
    return dot > eps && dot < len2 - eps;
}

}  // namespace

PlanarEmbedding build_kac_ward_embedding(const LatticeSpec& spec,
                                         const std::map<std::uint32_t, int>& clamp) {
    if (spec.kind != LatticeSpec::Kind::grid2d)
        throw ConfigError("Kac-Ward requires a 2D grid");
    if (spec.boundary != LatticeSpec::Boundary::open)
        throw ConfigError("Kac-Ward supports open boundaries only");
    const int ly = spec.ly, lx = spec.lx;

    // The clamp must cover exactly the first k full rows.
    int k_rows = 0;
    if (!clamp.empty()) {
        const std::size_t n_clamped = clamp.size();
        if (n_clamped % static_cast<std::size_t>(lx) != 0)
            throw GeometryError("clamp must cover full top rows");
        k_rows = static_cast<int>(n_clamped / static_cast<std::size_t>(lx));
        if (k_rows > ly) throw GeometryError("clamp larger than the lattice");
        for (int r = 0; r < k_rows; ++r)
            for (int c = 0; c < lx; ++c)
                if (!clamp.count(spec.index2d(r, c)))
                    throw GeometryError("clamp must be a contiguous top region");
    }

    PlanarEmbedding emb;
    emb.n_free = static_cast<std::size_t>(ly - k_rows) * lx;
    emb.has_ghost = k_rows > 0 && emb.n_free > 0;

    // sum over clamped-clamped bonds of sigma_x sigma_y
    for (int r = 0; r < k_rows; ++r) {
        for (int c = 0; c < lx; ++c) {
            const int sc = clamp.at(spec.index2d(r, c));
            if (c + 1 < lx) emb.clamped_bond_sum += sc * clamp.at(spec.index2d(r, c + 1));
            if (r + 1 < k_rows) emb.clamped_bond_sum += sc * clamp.at(spec.index2d(r + 1, c));
        }
    }

    if (emb.n_free == 0) return emb;  // fully clamped: Z_1 carries everything

    // Free vertices in raster order; row r sits at y = -r so the clamped rows
    // are "above" the free block.
    auto free_vertex = [&](int r, int c) {
        return static_cast<std::uint32_t>((r - k_rows) * lx + c);
    };
    for (int r = k_rows; r < ly; ++r)
        for (int c = 0; c < lx; ++c)
            emb.vertices.push_back({static_cast<double>(c), static_cast<double>(-r)});

    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> undirected;
    for (int r = k_rows; r < ly; ++r) {
        for (int c = 0; c < lx; ++c) {
            if (c + 1 < lx) undirected.emplace_back(free_vertex(r, c), free_vertex(r, c + 1), 1.0);
            if (r + 1 < ly) undirected.emplace_back(free_vertex(r, c), free_vertex(r + 1, c), 1.0);
        }
    }
    emb.n_uu_edges = undirected.size();

    if (emb.has_ghost) {
        const std::uint32_t ghost = static_cast<std::uint32_t>(emb.vertices.size());
        const double scale = 10.0 * std::max(ly, lx);
        emb.vertices.push_back({0.5 * (lx - 1), -static_cast<double>(k_rows) + scale});
        for (int c = 0; c < lx; ++c) {
            const int sigma = clamp.at(spec.index2d(k_rows - 1, c));
            undirected.emplace_back(ghost, free_vertex(k_rows, c), static_cast<double>(sigma));
        }
        emb.n_fu_edges = static_cast<std::size_t>(lx);
    }

    for (const auto& [u, v, sign] : undirected) {
        const auto& pu = emb.vertices[u];
        const auto& pv = emb.vertices[v];
        emb.edges.push_back({u, v, std::atan2(pv.y - pu.y, pv.x - pu.x), sign});
        emb.edges.push_back({v, u, std::atan2(pu.y - pv.y, pu.x - pv.x), sign});
    }

    // Geometric validation: no two edges cross, no vertex lies strictly
    // inside a foreign edge.
    std::vector<Segment> segs;
    segs.reserve(undirected.size());
    for (const auto& [u, v, sign] : undirected) {
        (void)sign;
        segs.push_back({emb.vertices[u].x, emb.vertices[u].y, emb.vertices[v].x, emb.vertices[v].y});
    }
    for (std::size_t a = 0; a < segs.size(); ++a) {
        for (std::size_t b = a + 1; b < segs.size(); ++b) {
            if (segments_conflict(segs[a], segs[b]))
                throw GeometryError("ghost wiring produces crossing edges");
        }
        for (const auto& vert : emb.vertices) {
            if (point_on_open_segment(vert.x, vert.y, segs[a]))
                throw GeometryError("vertex lies on a foreign edge");
        }
    }
    return emb;
}

KacWardMatrix build_kac_ward_matrix(const PlanarEmbedding& emb, double beta, double j) {
    const std::size_t dim = emb.edges.size();
    KacWardMatrix m;
    m.q = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const double t = std::tanh(beta * j);
    m.max_weight = std::abs(t);

    // Outgoing directed edges per vertex.
    std::vector<std::vector<std::uint32_t>> out(emb.vertices.size());
    for (std::size_t e = 0; e < dim; ++e) out[emb.edges[e].from].push_back(static_cast<std::uint32_t>(e));

    for (std::size_t e = 0; e < dim; ++e) {
        const auto& de = emb.edges[e];
        for (std::uint32_t ep : out[de.to]) {
            const auto& dn = emb.edges[ep];
            if (dn.to == de.from) continue;  // backtracking
            double dtheta = dn.angle - de.angle;
            dtheta = std::remainder(dtheta, 2.0 * std::numbers::pi);
            const double w = dn.weight_sign * t;
            const double half = 0.5 * dtheta;
            m.q(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(ep)) =
                std::complex<double>(w * std::cos(half), w * std::sin(half));
        }
    }
    return m;
}

double kac_ward_log_det(const KacWardMatrix& m, double beta) {
    const Eigen::Index dim = m.q.rows();
    if (dim == 0) return 0.0;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(dim, dim) - m.q;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    double log_mag = 0.0;
    double phase = 0.0;
    const auto& diag = lu.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const std::complex<double> d = diag(i);
        const double mag = std::abs(d);
        if (mag == 0.0)
            throw NumericError("singular Kac-Ward matrix at beta = " + std::to_string(beta));
        log_mag += std::log(mag);
        phase += std::arg(d);
    }
    if (lu.permutationP().determinant() < 0) phase += std::numbers::pi;
    phase = std::remainder(phase, 2.0 * std::numbers::pi);
    if (std::abs(phase) > 1e-8)
        throw NumericError("Kac-Ward determinant not real-positive at beta = " +
                           std::to_string(beta) + " (phase " + std::to_string(phase) + ")");
    return log_mag;
}

double kac_ward_log_z(const LatticeSpec& spec, double beta,
                      const std::map<std::uint32_t, int>& clamp) {
    if (beta < 0.0) throw ConfigError("beta must be >= 0");
    const PlanarEmbedding emb = build_kac_ward_embedding(spec, clamp);
    const double j = spec.coupling;

    double log_z = beta * j * emb.clamped_bond_sum;
    log_z += static_cast<double>(emb.n_uu_edges + emb.n_fu_edges) * std::log(std::cosh(beta * j));
    log_z += static_cast<double>(emb.n_free) * std::log(2.0);
    if (!emb.edges.empty()) {
        const KacWardMatrix m = build_kac_ward_matrix(emb, beta, j);
        log_z += 0.5 * kac_ward_log_det(m, beta);
    }
    return log_z;
}

std::map<std::uint32_t, int> semicircle_defect_clamp(const LatticeSpec& spec, int rows) {
    if (spec.kind != LatticeSpec::Kind::grid2d)
        throw ConfigError("semicircle clamp requires a 2D grid");
    if (rows < 1 || rows > spec.ly) throw ConfigError("clamp rows out of range");
    const double cx = 0.5 * (spec.lx - 1);
    const double cy = static_cast<double>(rows) - 0.5;  // clamp/free boundary midline
    const double radius = static_cast<double>(spec.lx) / 5.0;
    std::map<std::uint32_t, int> clamp;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < spec.lx; ++c) {
            const double dx = c - cx;
            const double dy = r - cy;
            clamp[spec.index2d(r, c)] = (dx * dx + dy * dy <= radius * radius) ? -1 : 1;
        }
    }
    return clamp;
}

}  // namespace tapt
