#pragma once

// Counter-based deterministic RNG.  std:: distributions are not guaranteed
// to produce identical streams across standard library implementations, so
// everything that must be byte-reproducible (witness sampling, experiment
// replication) goes through these helpers instead.

#include <cmath>
#include <cstdint>

namespace quadineq {

// splitmix64: tiny, high-quality 64-bit mixer (Steele, Lea, Flood 2014).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Standard normal via Box-Muller (uses two uniforms, no caching so the
    // stream position stays predictable).
    double next_normal() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925287 * u2);
    }
};

// Independent stream derived from (seed, index): lets parallel loops draw
// per-item randomness without any ordering dependence between items.
inline SplitMix64 stream_at(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x85ebca77c2b2ae63ULL * (index + 1)));
    // burn one output so trivially related seeds decorrelate
    mixer.next_u64();
    return mixer;
}

}  // namespace quadineq
