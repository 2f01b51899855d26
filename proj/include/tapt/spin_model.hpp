#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tapt/errors.hpp"

namespace tapt {

// A spin configuration is a vector of ±1 entries, one per site (clamped sites
// included; samplers skip them).
using SpinConfiguration = std::vector<std::int8_t>;

struct Coupling {
    std::uint32_t i;  // i < j
    std::uint32_t j;
    double value;     // J_ij
};

// Immutable Ising problem: pairwise couplings J_ij, per-spin fields h_i and an
// optional clamp assignment. Energy convention:
//
//   E(s) = - sum_{i<j} J_ij s_i s_j - sum_i h_i s_i
//
// Clamped spins stay in the index space; operations that mutate spins skip
// them. Safe to share across threads after construction.
class CouplingGraph {
  public:
    class Builder {
      public:
        explicit Builder(std::size_t n_spins);

        // Adds J to the coupling on (i, j); contributions from different
        // sources (e.g. logic gates sharing a wire pair) accumulate.
        Builder& add_coupling(std::uint32_t i, std::uint32_t j, double value);
        Builder& add_field(std::uint32_t i, double value);
        Builder& set_clamp(std::uint32_t i, int value);  // value in {-1,+1}
        CouplingGraph build() const;

      private:
        std::size_t n_;
        std::vector<Coupling> couplings_;
        std::vector<double> fields_;
        std::vector<std::int8_t> clamps_;
    };

    std::size_t n_spins() const { return n_; }
    std::size_t n_free() const { return free_sites_.size(); }
    const std::vector<Coupling>& couplings() const { return couplings_; }
    const std::vector<double>& fields() const { return fields_; }
    double field(std::uint32_t i) const { return fields_[i]; }

    bool is_clamped(std::uint32_t i) const { return clamps_[i] != 0; }
    std::int8_t clamp_value(std::uint32_t i) const { return clamps_[i]; }
    const std::vector<std::uint32_t>& free_sites() const { return free_sites_; }
    bool has_clamps() const { return free_sites_.size() != n_; }

    struct Neighbor {
        std::uint32_t index;
        double value;
    };
    std::span<const Neighbor> neighbors(std::uint32_t i) const {
        return {adjacency_.data() + adj_offset_[i], adj_offset_[i + 1] - adj_offset_[i]};
    }

    // Content digest over (n, couplings, fields, clamps); used for dataset
    // provenance and reproducibility checks.
    std::uint64_t digest() const { return digest_; }

    void save(std::ostream& os) const;            // `isingmodel v1` text format
    void save_file(const std::string& path) const;
    static CouplingGraph load(std::istream& is);
    static CouplingGraph load_file(const std::string& path);

  private:
    friend class Builder;
    CouplingGraph() = default;

    std::size_t n_ = 0;
    std::vector<Coupling> couplings_;       // sorted by (i, j), unique
    std::vector<double> fields_;
    std::vector<std::int8_t> clamps_;       // 0 = free, ±1 = clamped
    std::vector<std::uint32_t> free_sites_; // ascending
    std::vector<Neighbor> adjacency_;       // CSR neighbor lists
    std::vector<std::size_t> adj_offset_;   // size n+1
    std::uint64_t digest_ = 0;
};

// --- energy arithmetic ------------------------------------------------------

// E(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i. Throws DimensionError if the
// configuration length does not match the graph.
double energy(const CouplingGraph& g, std::span<const std::int8_t> s);

// l_i = sum_j J_ij s_j + h_i, so that E(flip i) - E(s) = 2 s_i l_i.
// Throws ClampedSiteError if i is clamped.
double local_field(const CouplingGraph& g, std::span<const std::int8_t> s, std::uint32_t i);

// dE for flipping spin i: 2 s_i l_i.
double flip_delta(const CouplingGraph& g, std::span<const std::int8_t> s, std::uint32_t i);

// Overwrites entries at clamped indices with their clamp values.
void apply_clamps(const CouplingGraph& g, SpinConfiguration& s);

// (sum_i s_i) / n over all spins.
double magnetization(std::span<const std::int8_t> s);

// Uniform ±1 configuration on free sites, clamp values elsewhere.
class RngStream;
SpinConfiguration random_configuration(const CouplingGraph& g, RngStream& rng);

}  // namespace tapt
