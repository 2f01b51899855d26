#pragma once

#include <functional>
#include <map>
#include <vector>

#include "tapt/lattice.hpp"
#include "tapt/spin_model.hpp"

namespace tapt {

// Exact thermodynamics at a single inverse temperature.
struct ExactThermo {
    double beta = 0.0;
    double log_z = 0.0;
    double free_energy = 0.0;      // F = -logZ / beta (NaN at beta = 0)
    double f_per_spin = 0.0;       // F / n_spins (all spins, clamped included)
    double f_per_free_spin = 0.0;  // F / n_free
    double energy_avg = 0.0;
    double energy_var = 0.0;
};

// Exact summation over all free-spin configurations (Gray-code enumeration,
// streaming log-sum-exp). Clamped spins are fixed to their clamp values and
// their couplings contribute to every term. Throws SizeError above 24 free
// spins.
ExactThermo brute_force_thermo(const CouplingGraph& g, double beta);

// Exact logZ of an open-boundary uniform-J 2D grid by column-to-column
// transfer contraction in the log domain, with per-site factorized horizontal
// transfer. Clamped sites are handled by restricting the corresponding state
// bits. Throws SizeError if the column height exceeds 20.
double transfer_matrix_log_z(const LatticeSpec& spec, double beta,
                             const std::map<std::uint32_t, int>& clamp = {});

// beta * F(beta) = -n_free ln 2 + trapezoid integral of E_avg over
// [1e-3, beta] on a uniform grid with `segments` segments; `source` must
// return a mean-energy estimate at the requested inverse temperature using
// the requested number of samples. Returns F(beta).
double thermo_integration_f(const std::function<double(double, int)>& source, double beta,
                            std::size_t n_free, int segments = 25, int samples_per_point = 100);

// var(E)(beta_i) = -d^2(beta F)/d beta^2 by central second differences on a
// uniform beta grid. Input: (beta_i, F_i) pairs, ascending uniform grid, at
// least 3 points. Output: (beta_i, var_i) for the interior points.
std::vector<std::pair<double, double>> variance_from_f(
    const std::vector<std::pair<double, double>>& f_values);

// Exact critical coupling of the square-lattice Ising model,
// (1/2) ln(1 + sqrt(2)) = 0.4406867935...
double critical_beta();

}  // namespace tapt
