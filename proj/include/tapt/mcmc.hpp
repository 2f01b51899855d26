#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tapt/rng.hpp"
#include "tapt/spin_model.hpp"

namespace tapt {

// Single-chain configuration. A "sample" everywhere in budget accounting is
// one full sweep (one heat-bath update of every free spin).
struct ChainConfig {
    double beta = 1.0;
    std::uint64_t mixing_sweeps = 0;
    std::uint64_t thinning = 1;  // sweeps between recorded samples, >= 1
    std::uint64_t seed = 0;
};

struct SampleRecord {
    double beta;
    SpinConfiguration spins;
};

struct SampleDataset {
    std::vector<SampleRecord> records;
    std::uint64_t graph_digest = 0;  // provenance: the generating graph

    void save(std::ostream& os) const;  // binary `ISFD1` format
    void save_file(const std::string& path) const;
    static SampleDataset load(std::istream& is);
    static SampleDataset load_file(const std::string& path);
};

// Heat-bath resampling of a single free spin i:
//   P(s_i = +1 | rest) = 1 / (1 + exp(-2 beta l_i)).
// Throws ClampedSiteError if i is clamped.
void gibbs_update(const CouplingGraph& g, SpinConfiguration& s, std::uint32_t i,
                  double beta, RngStream& rng);

// One sweep: every free spin updated once, index-ascending. Returns the total
// energy change, so callers can keep a running energy without recomputation.
double gibbs_sweep(const CouplingGraph& g, SpinConfiguration& s, double beta, RngStream& rng);

// Runs a chain from a random start: mixing_sweeps discarded, then n_records
// configurations recorded every `thinning` sweeps. Bit-reproducible per seed.
SampleDataset run_chain(const CouplingGraph& g, const ChainConfig& config,
                        std::uint64_t n_records);

// Union of run_chain outputs at each beta (per_beta records each), tagged
// with their beta. Chains use independent streams derived from config.seed.
SampleDataset generate_training_corpus(const CouplingGraph& g, const std::vector<double>& betas,
                                       std::uint64_t per_beta, const ChainConfig& config,
                                       unsigned n_threads = 1);

}  // namespace tapt
