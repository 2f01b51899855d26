#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tapt/exact.hpp"
#include "tapt/kacward.hpp"
#include "tapt/lattice.hpp"

using namespace tapt;

namespace {

// Four canonical top-row clamp patterns used across the exactness checks.
std::map<std::uint32_t, int> top_row_pattern(const LatticeSpec& spec, int which) {
    return top_rows_clamp(spec, 1, [&](int, int c) {
        switch (which) {
            case 0: return 1;
            case 1: return -1;
            case 2: return c % 2 == 0 ? 1 : -1;
            default: return (c % 4 == 0 || c % 4 == 3) ? 1 : -1;  // +,-,-,+,...
        }
    });
}

}  // namespace

TEST_CASE("brute force: closed forms") {
    // single free spin, no field
    auto g1 = CouplingGraph::Builder(1).build();
    for (double beta : {0.0, 0.3, 1.0, 2.5})
        CHECK(brute_force_thermo(g1, beta).log_z == doctest::Approx(std::log(2.0)).epsilon(1e-14));

    // 2-spin bond: logZ = ln(4 cosh beta)
    CouplingGraph::Builder b2(2);
    b2.add_coupling(0, 1, 1.0);
    auto g2 = b2.build();
    for (double beta : {0.1, 0.44, 1.3})
        CHECK(brute_force_thermo(g2, beta).log_z ==
              doctest::Approx(std::log(4.0 * std::cosh(beta))).epsilon(1e-14));

    // beta -> 0 limit: N ln 2
    auto g3 = LatticeSpec::grid2d(3, 4).graph();
    CHECK(brute_force_thermo(g3, 0.0).log_z == doctest::Approx(12.0 * std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("brute force matches the independent enumeration oracle") {
    auto g = LatticeSpec::grid2d(3, 4).graph();
    for (double beta : {0.2, 0.44, 1.0}) {
        auto t = brute_force_thermo(g, beta);
        CHECK(t.log_z == doctest::Approx(oracle::log_z(g, beta)).epsilon(1e-12));
        CHECK(t.energy_avg == doctest::Approx(oracle::mean_energy(g, beta)).epsilon(1e-10));
        CHECK(t.energy_var == doctest::Approx(oracle::var_energy(g, beta)).epsilon(1e-8));
    }
}

TEST_CASE("brute force size guard") {
    auto g = LatticeSpec::grid2d(5, 5).graph();
    CHECK_THROWS_AS(brute_force_thermo(g, 0.5), SizeError);
}

TEST_CASE("transfer matrix: open chain closed form") {
    for (int n : {1, 2, 5, 9}) {
        auto spec = LatticeSpec::grid2d(1, n);
        for (double beta : {0.2, 0.9}) {
            const double expected = n * std::log(2.0) + (n - 1) * std::log(std::cosh(beta));
            CHECK(transfer_matrix_log_z(spec, beta) == doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("transfer matrix vs brute force on 4x4") {
    auto spec = LatticeSpec::grid2d(4, 4);
    auto g = spec.graph();
    CHECK(transfer_matrix_log_z(spec, 0.44) ==
          doctest::Approx(brute_force_thermo(g, 0.44).log_z).epsilon(1e-12));

    // top row clamped to +,-,-,+
    auto clamp = top_row_pattern(spec, 3);
    auto gc = spec.graph_clamped(clamp);
    CHECK(transfer_matrix_log_z(spec, 0.44, clamp) ==
          doctest::Approx(brute_force_thermo(gc, 0.44).log_z).epsilon(1e-12));
}

TEST_CASE("transfer matrix size guard") {
    auto spec = LatticeSpec::grid2d(21, 3);
    CHECK_THROWS_AS(transfer_matrix_log_z(spec, 0.5), SizeError);
}

TEST_CASE("Kac-Ward: single bond closed form") {
    auto spec = LatticeSpec::grid2d(1, 2);
    for (double beta : {0.2, 0.44, 1.0})
        CHECK(kac_ward_log_z(spec, beta) ==
              doctest::Approx(std::log(4.0 * std::cosh(beta))).epsilon(1e-13));
}

TEST_CASE("Kac-Ward vs brute force, unclamped grids") {
    for (int ly : {1, 2, 3, 4}) {
        for (int lx : {1, 2, 3, 4, 5}) {
            auto spec = LatticeSpec::grid2d(ly, lx);
            auto g = spec.graph();
            for (double beta : {0.2, 0.44, 1.0}) {
                const double kw = kac_ward_log_z(spec, beta);
                const double bf = brute_force_thermo(g, beta).log_z;
                INFO("grid ", ly, "x", lx, " beta ", beta);
                CHECK(std::abs(kw - bf) < 1e-9);
            }
        }
    }
}

TEST_CASE("Kac-Ward vs brute force, top-row clamped") {
    for (int lx : {2, 4, 5}) {
        auto spec = LatticeSpec::grid2d(4, lx);
        for (int pat = 0; pat < 4; ++pat) {
            auto clamp = top_row_pattern(spec, pat);
            auto gc = spec.graph_clamped(clamp);
            for (double beta : {0.2, 0.8}) {
                const double kw = kac_ward_log_z(spec, beta, clamp);
                const double bf = brute_force_thermo(gc, beta).log_z;
                INFO("lx ", lx, " pattern ", pat, " beta ", beta);
                CHECK(std::abs(kw - bf) < 1e-9);
            }
        }
    }
}

TEST_CASE("Kac-Ward: multi-row clamp (semicircle defect helper)") {
    auto spec = LatticeSpec::grid2d(4, 5);
    auto clamp = semicircle_defect_clamp(spec, 2);
    auto gc = spec.graph_clamped(clamp);
    for (double beta : {0.44, 1.2}) {
        CHECK(std::abs(kac_ward_log_z(spec, beta, clamp) -
                       brute_force_thermo(gc, beta).log_z) < 1e-9);
    }
}

TEST_CASE("Kac-Ward matches transfer matrix on 8x8") {
    auto spec = LatticeSpec::grid2d(8, 8);
    for (double beta : {0.2, 0.44, 0.9}) {
        CHECK(std::abs(kac_ward_log_z(spec, beta) - transfer_matrix_log_z(spec, beta)) < 1e-8);
    }
}

TEST_CASE("Kac-Ward determinant is real-positive (phase check built in)") {
    auto spec = LatticeSpec::grid2d(6, 6);
    auto clamp = top_rows_clamp(spec, 1, [](int, int c) { return c % 2 ? -1 : 1; });
    // Would throw NumericError if the wrapped phase exceeded 1e-8.
    CHECK_NOTHROW(kac_ward_log_z(spec, 1.5, clamp));
    CHECK_NOTHROW(kac_ward_log_z(spec, 1.5));
}

TEST_CASE("Kac-Ward matrix invariants") {
    auto spec = LatticeSpec::grid2d(3, 3);
    auto clamp = top_rows_clamp(spec, 1, [](int, int) { return 1; });
    auto emb = build_kac_ward_embedding(spec, clamp);
    auto m = build_kac_ward_matrix(emb, 0.7, 1.0);
    // backtracking entries vanish; all magnitudes bounded by max |C_K|
    for (std::size_t e = 0; e < emb.edges.size(); ++e) {
        const std::size_t rev = e ^ 1ull;
        CHECK(std::abs(m.q(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(rev))) == 0.0);
        for (std::size_t f = 0; f < emb.edges.size(); ++f)
            CHECK(std::abs(m.q(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(f))) <=
                  m.max_weight + 1e-15);
    }
}

TEST_CASE("Kac-Ward rejects a non-top clamp region") {
    auto spec = LatticeSpec::grid2d(4, 4);
    std::map<std::uint32_t, int> clamp;
    for (int c = 0; c < 4; ++c) clamp[spec.index2d(3, c)] = 1;  // bottom row
    CHECK_THROWS_AS(kac_ward_log_z(spec, 0.5, clamp), GeometryError);
}

TEST_CASE("exact logZ derivative equals mean energy") {
    auto spec = LatticeSpec::grid2d(4, 4);
    auto g = spec.graph();
    const double beta = 0.44, h = 1e-4;
    const double e_from_logz =
        -(kac_ward_log_z(spec, beta + h) - kac_ward_log_z(spec, beta - h)) / (2.0 * h);
    CHECK(e_from_logz == doctest::Approx(oracle::mean_energy(g, beta)).epsilon(1e-6));
}

TEST_CASE("thermodynamic integration: zero integrand") {
    auto source = [](double, int) { return 0.0; };
    const double f = thermo_integration_f(source, 0.7, 9);
    CHECK(f == doctest::Approx(-9.0 * std::log(2.0) / 0.7).epsilon(1e-12));
}

TEST_CASE("thermodynamic integration with the exact integrand, 4x4") {
    auto g = LatticeSpec::grid2d(4, 4).graph();
    auto source = [&](double w, int) { return oracle::mean_energy(g, w); };
    const double beta = 0.6;
    const double f_ti = thermo_integration_f(source, beta, g.n_free());
    const double f_exact = -oracle::log_z(g, beta) / beta;
    CHECK(std::abs(f_ti - f_exact) < 1e-3);
}

TEST_CASE("thermodynamic integration rejects non-positive beta") {
    auto source = [](double, int) { return 0.0; };
    CHECK_THROWS_AS(thermo_integration_f(source, 0.0, 4), ConfigError);
    CHECK_THROWS_AS(thermo_integration_f(source, -1.0, 4), ConfigError);
}

TEST_CASE("variance_from_f: linear beta*F gives zero variance") {
    // beta F = a beta + b  =>  F = a + b / beta
    std::vector<std::pair<double, double>> f;
    for (int i = 0; i < 7; ++i) {
        const double beta = 0.5 + 0.001 * i;
        f.emplace_back(beta, (2.0 * beta + 3.0) / beta);
    }
    for (auto [beta, var] : variance_from_f(f)) CHECK(std::abs(var) < 1e-6);
}

TEST_CASE("variance_from_f: single spin in unit field") {
    // var(E) = sech^2(beta) at h = 1
    CouplingGraph::Builder b(1);
    b.add_field(0, 1.0);
    auto g = b.build();
    std::vector<std::pair<double, double>> f;
    for (int i = -1; i <= 1; ++i) {
        const double beta = 1.0 + 1e-3 * i;
        f.emplace_back(beta, -oracle::log_z(g, beta) / beta);
    }
    auto var = variance_from_f(f);
    REQUIRE(var.size() == 1);
    const double sech = 1.0 / std::cosh(1.0);
    CHECK(var[0].second == doctest::Approx(sech * sech).epsilon(1e-5));
    CHECK(var[0].second == doctest::Approx(0.41997).epsilon(1e-4));
}

TEST_CASE("variance_from_f: 4x4 lattice vs brute force") {
    auto g = LatticeSpec::grid2d(4, 4).graph();
    const double beta = 0.3, h = 1e-3;
    std::vector<std::pair<double, double>> f;
    for (int i = -1; i <= 1; ++i) {
        const double bb = beta + h * i;
        f.emplace_back(bb, -oracle::log_z(g, bb) / bb);
    }
    auto var = variance_from_f(f);
    REQUIRE(var.size() == 1);
    CHECK(std::abs(var[0].second - oracle::var_energy(g, beta)) < 1e-4);
}

TEST_CASE("variance_from_f input validation") {
    std::vector<std::pair<double, double>> two = {{0.1, 1.0}, {0.2, 1.0}};
    CHECK_THROWS_AS(variance_from_f(two), ConfigError);
}

TEST_CASE("critical beta constant") {
    CHECK(critical_beta() == doctest::Approx(0.44068679350977147).epsilon(1e-15));
}
