#include "tapt/spin_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "tapt/digest.hpp"
#include "tapt/rng.hpp"

namespace tapt {

CouplingGraph::Builder::Builder(std::size_t n_spins)
    : n_(n_spins), fields_(n_spins, 0.0), clamps_(n_spins, 0) {}

CouplingGraph::Builder& CouplingGraph::Builder::add_coupling(std::uint32_t i, std::uint32_t j,
                                                             double value) {
    if (i == j) throw ConfigError("self-coupling on spin " + std::to_string(i));
    if (i >= n_ || j >= n_) throw ConfigError("coupling index out of range");
    if (i > j) std::swap(i, j);
    couplings_.push_back({i, j, value});
    return *this;
}

CouplingGraph::Builder& CouplingGraph::Builder::add_field(std::uint32_t i, double value) {
    if (i >= n_) throw ConfigError("field index out of range");
    fields_[i] += value;
    return *this;
}

CouplingGraph::Builder& CouplingGraph::Builder::set_clamp(std::uint32_t i, int value) {
    if (i >= n_) throw ConfigError("clamp index out of range");
    if (value != 1 && value != -1) throw ConfigError("clamp value must be ±1");
    clamps_[i] = static_cast<std::int8_t>(value);
    return *this;
}

CouplingGraph CouplingGraph::Builder::build() const {
    CouplingGraph g;
    g.n_ = n_;
    g.fields_ = fields_;
    g.clamps_ = clamps_;

    // Merge duplicate pairs by summation, then sort canonically.
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> merged;
    for (const auto& c : couplings_) merged[{c.i, c.j}] += c.value;
    g.couplings_.reserve(merged.size());
    for (const auto& [key, v] : merged) g.couplings_.push_back({key.first, key.second, v});

    g.adj_offset_.assign(n_ + 1, 0);
    for (const auto& c : g.couplings_) {
        ++g.adj_offset_[c.i + 1];
        ++g.adj_offset_[c.j + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) g.adj_offset_[i + 1] += g.adj_offset_[i];
    g.adjacency_.resize(g.adj_offset_[n_]);
    std::vector<std::size_t> cursor(g.adj_offset_.begin(), g.adj_offset_.end() - 1);
    for (const auto& c : g.couplings_) {
        g.adjacency_[cursor[c.i]++] = {c.j, c.value};
        g.adjacency_[cursor[c.j]++] = {c.i, c.value};
    }

    for (std::uint32_t i = 0; i < n_; ++i)
        if (g.clamps_[i] == 0) g.free_sites_.push_back(i);

    std::uint64_t d = fnv1a64_bytes(&g.n_, sizeof(g.n_));
    if (!g.couplings_.empty())
        d = fnv1a64_bytes(g.couplings_.data(), g.couplings_.size() * sizeof(Coupling), d);
    if (!g.fields_.empty())
        d = fnv1a64_bytes(g.fields_.data(), g.fields_.size() * sizeof(double), d);
    if (!g.clamps_.empty())
        d = fnv1a64_bytes(g.clamps_.data(), g.clamps_.size(), d);
    g.digest_ = d;
    return g;
}

double energy(const CouplingGraph& g, std::span<const std::int8_t> s) {
    if (s.size() != g.n_spins())
        throw DimensionError("configuration length " + std::to_string(s.size()) +
                             " != n_spins " + std::to_string(g.n_spins()));
    double e = 0.0;
    for (const auto& c : g.couplings())
        e -= c.value * static_cast<double>(s[c.i] * s[c.j]);
    const auto& h = g.fields();
    for (std::size_t i = 0; i < h.size(); ++i) e -= h[i] * static_cast<double>(s[i]);
    return e;
}

double local_field(const CouplingGraph& g, std::span<const std::int8_t> s, std::uint32_t i) {
    if (s.size() != g.n_spins()) throw DimensionError("configuration length mismatch");
    if (g.is_clamped(i)) throw ClampedSiteError("spin " + std::to_string(i) + " is clamped");
    double l = g.field(i);
    for (const auto& nb : g.neighbors(i)) l += nb.value * static_cast<double>(s[nb.index]);
    return l;
}

double flip_delta(const CouplingGraph& g, std::span<const std::int8_t> s, std::uint32_t i) {
    return 2.0 * static_cast<double>(s[i]) * local_field(g, s, i);
}

void apply_clamps(const CouplingGraph& g, SpinConfiguration& s) {
    if (s.size() != g.n_spins()) throw DimensionError("configuration length mismatch");
    for (std::uint32_t i = 0; i < g.n_spins(); ++i)
        if (g.is_clamped(i)) s[i] = g.clamp_value(i);
}

double magnetization(std::span<const std::int8_t> s) {
    if (s.empty()) return 0.0;
    long sum = 0;
    for (std::int8_t v : s) sum += v;
    return static_cast<double>(sum) / static_cast<double>(s.size());
}

SpinConfiguration random_configuration(const CouplingGraph& g, RngStream& rng) {
    SpinConfiguration s(g.n_spins());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = rng.coin() ? 1 : -1;
    apply_clamps(g, s);
    return s;
}

// --- `isingmodel v1` text format ---------------------------------------------

void CouplingGraph::save(std::ostream& os) const {
    char buf[64];
    os << "isingmodel v1\n";
    os << "n " << n_ << "\n";
    for (const auto& c : couplings_) {
        std::snprintf(buf, sizeof(buf), "%.17g", c.value);
        os << "c " << c.i << " " << c.j << " " << buf << "\n";
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (fields_[i] != 0.0) {
            std::snprintf(buf, sizeof(buf), "%.17g", fields_[i]);
            os << "f " << i << " " << buf << "\n";
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (clamps_[i] != 0) os << "x " << i << " " << (clamps_[i] > 0 ? "+1" : "-1") << "\n";
    }
}

void CouplingGraph::save_file(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path + " for writing");
    save(os);
}

CouplingGraph CouplingGraph::load(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("empty instance file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "isingmodel v1") throw FormatError("bad header: expected 'isingmodel v1'");

    std::size_t n = 0;
    bool have_n = false;
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> couplings;
    std::vector<std::pair<std::uint32_t, double>> fields;
    std::vector<std::pair<std::uint32_t, int>> clamps;

    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;  // blank line
        if (tag[0] == '#') continue;
        auto fail = [&](const std::string& what) {
            throw FormatError("line " + std::to_string(lineno) + ": " + what);
        };
        if (tag == "n") {
            if (have_n) fail("duplicate n line");
            if (!(ls >> n)) fail("bad n line");
            have_n = true;
        } else if (tag == "c") {
            std::uint32_t i, j;
            double v;
            if (!(ls >> i >> j >> v)) fail("bad coupling line");
            couplings.emplace_back(i, j, v);
        } else if (tag == "f") {
            std::uint32_t i;
            double v;
            if (!(ls >> i >> v)) fail("bad field line");
            fields.emplace_back(i, v);
        } else if (tag == "x") {
            std::uint32_t i;
            std::string v;
            if (!(ls >> i >> v)) fail("bad clamp line");
            int cv;
            if (v == "+1" || v == "1")
                cv = 1;
            else if (v == "-1")
                cv = -1;
            else
                fail("clamp value must be +1 or -1");
            clamps.emplace_back(i, cv);
        } else {
            fail("unknown record tag '" + tag + "'");
        }
    }
    if (!have_n) throw FormatError("missing n line");

    Builder b(n);
    // Duplicate coupling lines in a file are almost certainly an authoring
    // bug, unlike programmatic accumulation; reject them.
    std::map<std::pair<std::uint32_t, std::uint32_t>, bool> seen;
    for (auto [i, j, v] : couplings) {
        auto key = std::minmax(i, j);
        if (seen.count({key.first, key.second}))
            throw FormatError("duplicate coupling (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
        seen[{key.first, key.second}] = true;
        b.add_coupling(i, j, v);
    }
    for (auto [i, v] : fields) b.add_field(i, v);
    for (auto [i, v] : clamps) b.set_clamp(i, v);
    return b.build();
}

CouplingGraph CouplingGraph::load_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path);
    return load(is);
}

}  // namespace tapt
