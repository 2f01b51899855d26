#include "tapt/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace tapt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

ExactThermo finalize(double beta, double log_z, double e_avg, double e_var,
                     std::size_t n_spins, std::size_t n_free) {
    ExactThermo t;
    t.beta = beta;
    t.log_z = log_z;
    t.free_energy = beta > 0.0 ? -log_z / beta : std::numeric_limits<double>::quiet_NaN();
    t.f_per_spin = n_spins ? t.free_energy / static_cast<double>(n_spins) : 0.0;
    t.f_per_free_spin = n_free ? t.free_energy / static_cast<double>(n_free) : 0.0;
    t.energy_avg = e_avg;
    t.energy_var = e_var;
    return t;
}

}  // namespace

ExactThermo brute_force_thermo(const CouplingGraph& g, double beta) {
    const auto& free_sites = g.free_sites();
    const std::size_t n_free = free_sites.size();
    if (n_free > 24)
        throw SizeError("brute force limited to 24 free spins, got " + std::to_string(n_free));
    if (beta < 0.0) throw ConfigError("beta must be >= 0");

    SpinConfiguration s(g.n_spins(), -1);
    apply_clamps(g, s);
    double e = energy(g, s);

    // Streaming weighted sums (w = exp(-beta (E - E_ref))), rescaled whenever
    // a lower energy is seen so the accumulators never overflow.
    double e_ref = e;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    const std::uint64_t total = 1ull << n_free;

    auto accumulate = [&](double energy_now) {
        if (energy_now < e_ref) {
            const double scale = std::exp(-beta * (e_ref - energy_now));
            s0 *= scale;
            s1 *= scale;
            s2 *= scale;
            e_ref = energy_now;
        }
        const double w = std::exp(-beta * (energy_now - e_ref));
        s0 += w;
        s1 += w * energy_now;
        s2 += w * energy_now * energy_now;
    };

    accumulate(e);
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < total; ++k) {
        const std::uint64_t next_gray = k ^ (k >> 1);
        const int bit = std::countr_zero(gray ^ next_gray);
        gray = next_gray;
        const std::uint32_t site = free_sites[static_cast<std::size_t>(bit)];
        // dE = 2 s_i l_i, computed inline (site is free by construction).
        double l = g.field(site);
        for (const auto& nb : g.neighbors(site))
            l += nb.value * static_cast<double>(s[nb.index]);
        e += 2.0 * static_cast<double>(s[site]) * l;
        s[site] = static_cast<std::int8_t>(-s[site]);
        accumulate(e);
    }

    const double log_z = std::log(s0) - beta * e_ref;
    const double e_avg = s1 / s0;
    const double e_var = std::max(0.0, s2 / s0 - e_avg * e_avg);
    return finalize(beta, log_z, e_avg, e_var, g.n_spins(), n_free);
}

double transfer_matrix_log_z(const LatticeSpec& spec, double beta,
                             const std::map<std::uint32_t, int>& clamp) {
    if (spec.kind != LatticeSpec::Kind::grid2d)
        throw ConfigError("transfer matrix requires a 2D grid");
    if (spec.boundary != LatticeSpec::Boundary::open)
        throw ConfigError("transfer matrix supports open boundaries only");
    if (beta < 0.0) throw ConfigError("beta must be >= 0");
    const int w = spec.ly;
    if (w > 20) throw SizeError("transfer matrix limited to column height 20");
    const int n_cols = spec.lx;
    const double j = spec.coupling;
    const std::size_t n_states = 1ull << w;

    // Per-column clamp masks: required[r] bit set if site (r, col) clamped,
    // value[r] the required bit (1 for +1).
    auto column_masks = [&](int col) {
        std::uint64_t required = 0, value = 0;
        for (int r = 0; r < w; ++r) {
            auto it = clamp.find(spec.index2d(r, col));
            if (it != clamp.end()) {
                required |= 1ull << r;
                if (it->second > 0) value |= 1ull << r;
            }
        }
        return std::pair{required, value};
    };

    auto spin_of = [](std::uint64_t state, int r) {
        return (state >> r) & 1u ? 1.0 : -1.0;
    };
    auto intra_column = [&](std::uint64_t state) {
        double sum = 0.0;
        for (int r = 0; r + 1 < w; ++r) sum += beta * j * spin_of(state, r) * spin_of(state, r + 1);
        return sum;
    };

    std::vector<double> v(n_states);
    {
        auto [req, val] = column_masks(0);
        for (std::uint64_t st = 0; st < n_states; ++st)
            v[st] = ((st & req) == val) ? intra_column(st) : kNegInf;
    }

    for (int col = 0; col + 1 < n_cols; ++col) {
        // Horizontal transfer, factorized per site: for each row r, sum over
        // the old bit with weight exp(beta J s_old s_new).
        const double bj = beta * j;
        for (int r = 0; r < w; ++r) {
            const std::uint64_t bit = 1ull << r;
            for (std::uint64_t st = 0; st < n_states; ++st) {
                if (st & bit) continue;  // handle each (down, up) pair once
                const double lo = v[st];        // old bit = 0 (spin -1)
                const double hi = v[st | bit];  // old bit = 1 (spin +1)
                v[st] = log_add_exp(lo + bj, hi - bj);       // new spin -1
                v[st | bit] = log_add_exp(lo - bj, hi + bj); // new spin +1
            }
        }
        auto [req, val] = column_masks(col + 1);
        for (std::uint64_t st = 0; st < n_states; ++st) {
            if ((st & req) != val)
                v[st] = kNegInf;
            else if (v[st] != kNegInf)
                v[st] += intra_column(st);
        }
    }

    double log_z = kNegInf;
    for (double x : v) log_z = log_add_exp(log_z, x);
    return log_z;
}

double thermo_integration_f(const std::function<double(double, int)>& source, double beta,
                            std::size_t n_free, int segments, int samples_per_point) {
    if (beta <= 0.0) throw ConfigError("thermodynamic integration requires beta > 0");
    if (segments < 1) throw ConfigError("segments must be >= 1");
    const double lo = 1e-3;
    if (beta <= lo) throw ConfigError("beta must exceed the integration floor 1e-3");

    std::vector<double> grid(segments + 1), values(segments + 1);
    for (int i = 0; i <= segments; ++i) {
        grid[i] = lo + (beta - lo) * static_cast<double>(i) / segments;
        values[i] = source(grid[i], samples_per_point);
    }
    double integral = 0.0;
    for (int i = 0; i < segments; ++i)
        integral += 0.5 * (values[i] + values[i + 1]) * (grid[i + 1] - grid[i]);

    const double beta_f = -static_cast<double>(n_free) * std::log(2.0) + integral;
    return beta_f / beta;
}

std::vector<std::pair<double, double>> variance_from_f(
    const std::vector<std::pair<double, double>>& f_values) {
    if (f_values.size() < 3) throw ConfigError("variance_from_f needs at least 3 grid points");
    const double h = f_values[1].first - f_values[0].first;
    if (h <= 0.0) throw ConfigError("beta grid must be strictly increasing");
    for (std::size_t i = 1; i + 1 < f_values.size(); ++i) {
        const double step = f_values[i + 1].first - f_values[i].first;
        if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw ConfigError("beta grid must be uniform");
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(f_values.size() - 2);
    for (std::size_t i = 1; i + 1 < f_values.size(); ++i) {
        const double g_prev = f_values[i - 1].first * f_values[i - 1].second;
        const double g_mid = f_values[i].first * f_values[i].second;
        const double g_next = f_values[i + 1].first * f_values[i + 1].second;
        const double second = (g_next - 2.0 * g_mid + g_prev) / (h * h);
        out.emplace_back(f_values[i].first, -second);
    }
    return out;
}

double critical_beta() { return 0.5 * std::log(1.0 + std::sqrt(2.0)); }

}  // namespace tapt
