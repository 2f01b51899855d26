#include "tapt/lattice.hpp"

namespace tapt {

LatticeSpec LatticeSpec::grid2d(int ly, int lx, double j, Boundary b) {
    if (ly < 1 || lx < 1) throw ConfigError("grid2d dimensions must be >= 1");
    LatticeSpec s;
    s.kind = Kind::grid2d;
    s.boundary = b;
    s.ly = ly;
    s.lx = lx;
    s.coupling = j;
    return s;
}

LatticeSpec LatticeSpec::grid3d(int l, double j, Boundary b) {
    if (l < 1) throw ConfigError("grid3d size must be >= 1");
    LatticeSpec s;
    s.kind = Kind::grid3d;
    s.boundary = b;
    s.l = l;
    s.coupling = j;
    return s;
}

std::size_t LatticeSpec::n_sites() const {
    if (kind == Kind::grid2d) return static_cast<std::size_t>(ly) * lx;
    return static_cast<std::size_t>(l) * l * l;
}

std::size_t LatticeSpec::n_edges() const {
    if (kind == Kind::grid2d) {
        if (boundary == Boundary::open)
            return static_cast<std::size_t>(ly) * (lx - 1) + static_cast<std::size_t>(lx) * (ly - 1);
        std::size_t e = 0;
        if (lx > 1) e += static_cast<std::size_t>(ly) * lx;
        if (ly > 1) e += static_cast<std::size_t>(ly) * lx;
        return e;
    }
    if (boundary == Boundary::open)
        return 3ull * l * l * (l - 1);
    return l > 1 ? 3ull * l * l * l : 0;
}

std::uint32_t LatticeSpec::index2d(int row, int col) const {
    return static_cast<std::uint32_t>(row * lx + col);
}

std::uint32_t LatticeSpec::index3d(int x, int y, int z) const {
    return static_cast<std::uint32_t>(x + l * (y + static_cast<long>(l) * z));
}

CouplingGraph LatticeSpec::graph() const { return graph_clamped({}); }

CouplingGraph LatticeSpec::graph_clamped(const std::map<std::uint32_t, int>& clamp) const {
    CouplingGraph::Builder b(n_sites());
    const bool periodic = boundary == Boundary::periodic;
    if (kind == Kind::grid2d) {
        for (int r = 0; r < ly; ++r) {
            for (int c = 0; c < lx; ++c) {
                if (c + 1 < lx)
                    b.add_coupling(index2d(r, c), index2d(r, c + 1), coupling);
                else if (periodic && lx > 2)
                    b.add_coupling(index2d(r, c), index2d(r, 0), coupling);
                if (r + 1 < ly)
                    b.add_coupling(index2d(r, c), index2d(r + 1, c), coupling);
                else if (periodic && ly > 2)
                    b.add_coupling(index2d(r, c), index2d(0, c), coupling);
            }
        }
    } else {
        for (int z = 0; z < l; ++z) {
            for (int y = 0; y < l; ++y) {
                for (int x = 0; x < l; ++x) {
                    if (x + 1 < l) b.add_coupling(index3d(x, y, z), index3d(x + 1, y, z), coupling);
                    else if (periodic && l > 2) b.add_coupling(index3d(x, y, z), index3d(0, y, z), coupling);
                    if (y + 1 < l) b.add_coupling(index3d(x, y, z), index3d(x, y + 1, z), coupling);
                    else if (periodic && l > 2) b.add_coupling(index3d(x, y, z), index3d(x, 0, z), coupling);
                    if (z + 1 < l) b.add_coupling(index3d(x, y, z), index3d(x, y, z + 1), coupling);
                    else if (periodic && l > 2) b.add_coupling(index3d(x, y, z), index3d(x, y, 0), coupling);
                }
            }
        }
    }
    for (const auto& [site, value] : clamp) b.set_clamp(site, value);
    return b.build();
}

}  // namespace tapt
