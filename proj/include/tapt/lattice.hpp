#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tapt/spin_model.hpp"

namespace tapt {

// Regular lattices with uniform coupling J. Site ordering is fixed:
//   grid2d: raster row-major, index = row * lx + col, row 0 is the top row
//           (the row clamp patterns apply to);
//   grid3d: x-fastest, index = x + L * (y + L * z).
struct LatticeSpec {
    enum class Kind { grid2d, grid3d };
    enum class Boundary { open, periodic };

    Kind kind = Kind::grid2d;
    Boundary boundary = Boundary::open;
    int ly = 0, lx = 0;  // grid2d
    int l = 0;           // grid3d
    double coupling = 1.0;

    static LatticeSpec grid2d(int ly, int lx, double j = 1.0,
                              Boundary b = Boundary::open);
    static LatticeSpec grid3d(int l, double j = 1.0, Boundary b = Boundary::open);

    std::size_t n_sites() const;
    std::size_t n_edges() const;

    std::uint32_t index2d(int row, int col) const;
    std::uint32_t index3d(int x, int y, int z) const;

    CouplingGraph graph() const;

    // Graph with the given sites clamped (values ±1).
    CouplingGraph graph_clamped(const std::map<std::uint32_t, int>& clamp) const;
};

// Clamp map fixing the top `rows` full rows of a 2D grid to the given
// per-site pattern; pattern(row, col) must return ±1.
template <typename PatternFn>
std::map<std::uint32_t, int> top_rows_clamp(const LatticeSpec& spec, int rows,
                                            PatternFn pattern) {
    std::map<std::uint32_t, int> clamp;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < spec.lx; ++c) clamp[spec.index2d(r, c)] = pattern(r, c);
    return clamp;
}

}  // namespace tapt
