#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace tapt {

// Counter-based 64-bit generator (splitmix64 increment + finalizer).
// Streams are derived by hashing a path of integers under a root seed, so
// per-replica / per-repetition streams are independent by construction and
// results do not depend on how work is scheduled across threads.
class RngStream {
  public:
    RngStream() : state_(0) {}
    explicit RngStream(std::uint64_t seed) : state_(mix(seed ^ kPhi)) {}

    // Derives a child stream from a root seed and a path of indices,
    // e.g. derive(seed, {kStreamReplica, repetition, replica}).
    static RngStream derive(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
        std::uint64_t s = mix(root ^ kPhi);
        for (std::uint64_t p : path) s = mix(s ^ (p + kPhi));
        RngStream r;
        r.state_ = s;
        return r;
    }

    std::uint64_t next_u64() {
        state_ += kPhi;
        return mix_final(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // One standard normal draw; consumes exactly two uniforms (Box-Muller).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        // u1 == 0 would give log(0); nudge to the smallest representable draw.
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        // Multiply-shift; bias is O(n / 2^64), irrelevant at our scales.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool coin() { return (next_u64() >> 63) != 0; }

    std::uint64_t state() const { return state_; }

  private:
    static constexpr std::uint64_t kPhi = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix_final(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    static std::uint64_t mix(std::uint64_t z) { return mix_final(z + kPhi); }

    std::uint64_t state_;
};

// Stream purpose tags (first path component in RngStream::derive).
namespace stream {
constexpr std::uint64_t kInit = 0x11;       // replica / chain initial states
constexpr std::uint64_t kReplica = 0x22;    // per-replica dynamics + proposals
constexpr std::uint64_t kCoordinator = 0x33;  // swap accept/reject decisions
constexpr std::uint64_t kChain = 0x44;      // standalone Gibbs chains
constexpr std::uint64_t kAnneal = 0x55;     // simulated-annealing restarts
constexpr std::uint64_t kTrain = 0x66;      // shuffling, parameter init
constexpr std::uint64_t kProbe = 0x77;      // ladder probe chains
}  // namespace stream

}  // namespace tapt
