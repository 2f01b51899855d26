#include "tapt/mcmc.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "tapt/threading.hpp"

namespace tapt {

namespace {

inline double conditional_up(double beta, double local) {
    return 1.0 / (1.0 + std::exp(-2.0 * beta * local));
}

void check_chain_config(const ChainConfig& c) {
    if (c.beta < 0.0) throw ConfigError("beta must be >= 0");
    if (c.thinning < 1) throw ConfigError("thinning must be >= 1");
}

}  // namespace

void gibbs_update(const CouplingGraph& g, SpinConfiguration& s, std::uint32_t i,
                  double beta, RngStream& rng) {
    const double l = local_field(g, s, i);  // throws if clamped
    s[i] = rng.uniform() < conditional_up(beta, l) ? 1 : -1;
}

double gibbs_sweep(const CouplingGraph& g, SpinConfiguration& s, double beta, RngStream& rng) {
    if (s.size() != g.n_spins()) throw DimensionError("configuration length mismatch");
    double delta = 0.0;
    std::int8_t* spins = s.data();
    for (std::uint32_t i : g.free_sites()) {
        double l = g.field(i);
        for (const auto& nb : g.neighbors(i))
            l += nb.value * static_cast<double>(spins[nb.index]);
        const std::int8_t next = rng.uniform() < conditional_up(beta, l) ? 1 : -1;
        if (next != spins[i]) {
            delta += 2.0 * static_cast<double>(spins[i]) * l;
            spins[i] = next;
        }
    }
    return delta;
}

SampleDataset run_chain(const CouplingGraph& g, const ChainConfig& config,
                        std::uint64_t n_records) {
    check_chain_config(config);
    SampleDataset out;
    out.graph_digest = g.digest();
    if (n_records == 0) return out;

    RngStream init = RngStream::derive(config.seed, {stream::kInit, stream::kChain});
    RngStream dyn = RngStream::derive(config.seed, {stream::kChain});
    SpinConfiguration s = random_configuration(g, init);

    for (std::uint64_t k = 0; k < config.mixing_sweeps; ++k) gibbs_sweep(g, s, config.beta, dyn);
    out.records.reserve(n_records);
    for (std::uint64_t r = 0; r < n_records; ++r) {
        for (std::uint64_t k = 0; k < config.thinning; ++k) gibbs_sweep(g, s, config.beta, dyn);
        out.records.push_back({config.beta, s});
    }
    return out;
}

SampleDataset generate_training_corpus(const CouplingGraph& g, const std::vector<double>& betas,
                                       std::uint64_t per_beta, const ChainConfig& config,
                                       unsigned n_threads) {
    check_chain_config(config);
    std::vector<SampleDataset> parts(betas.size());
    parallel_for(betas.size(), n_threads, [&](std::size_t bi) {
        ChainConfig c = config;
        c.beta = betas[bi];
        c.seed = RngStream::derive(config.seed, {stream::kChain, bi}).state();
        parts[bi] = run_chain(g, c, per_beta);
    });
    SampleDataset out;
    out.graph_digest = g.digest();
    out.records.reserve(betas.size() * per_beta);
    for (auto& p : parts)
        for (auto& r : p.records) out.records.push_back(std::move(r));
    return out;
}

// --- binary dataset format (`ISFD1`) -----------------------------------------
//
// magic "ISFD1", then per record:
//   beta   : float64 little-endian
//   count  : uint32 little-endian (number of spins)
//   spins  : bit-packed, +1 -> 1, -1 -> 0, index-ascending, LSB-first within
//            each byte, padded to a whole byte.

namespace {
constexpr char kDatasetMagic[5] = {'I', 'S', 'F', 'D', '1'};

template <typename T>
void write_le(std::ostream& os, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
bool read_le(std::istream& is, T& value) {
    unsigned char buf[sizeof(T)];
    is.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (is.gcount() != static_cast<std::streamsize>(sizeof(T))) return false;
    std::memcpy(&value, buf, sizeof(T));
    return true;
}
}  // namespace

void SampleDataset::save(std::ostream& os) const {
    os.write(kDatasetMagic, sizeof(kDatasetMagic));
    for (const auto& rec : records) {
        write_le(os, rec.beta);
        write_le(os, static_cast<std::uint32_t>(rec.spins.size()));
        const std::size_t n_bytes = (rec.spins.size() + 7) / 8;
        std::vector<unsigned char> packed(n_bytes, 0);
        for (std::size_t i = 0; i < rec.spins.size(); ++i)
            if (rec.spins[i] > 0) packed[i / 8] |= static_cast<unsigned char>(1u << (i % 8));
        os.write(reinterpret_cast<const char*>(packed.data()),
                 static_cast<std::streamsize>(n_bytes));
    }
}

void SampleDataset::save_file(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path + " for writing");
    save(os);
}

SampleDataset SampleDataset::load(std::istream& is) {
    char magic[5];
    is.read(magic, 5);
    if (is.gcount() != 5 || std::memcmp(magic, kDatasetMagic, 5) != 0)
        throw FormatError("bad dataset magic (expected ISFD1)");
    SampleDataset out;
    for (;;) {
        double beta;
        if (!read_le(is, beta)) break;  // clean EOF
        std::uint32_t count;
        if (!read_le(is, count)) throw FormatError("truncated dataset record");
        const std::size_t n_bytes = (count + 7) / 8;
        std::vector<unsigned char> packed(n_bytes);
        is.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(n_bytes));
        if (is.gcount() != static_cast<std::streamsize>(n_bytes))
            throw FormatError("truncated dataset record");
        SpinConfiguration s(count);
        for (std::uint32_t i = 0; i < count; ++i)
            s[i] = (packed[i / 8] >> (i % 8)) & 1u ? 1 : -1;
        out.records.push_back({beta, std::move(s)});
    }
    return out;
}

SampleDataset SampleDataset::load_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path);
    return load(is);
}

}  // namespace tapt
