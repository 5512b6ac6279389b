#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace qml {

// All randomness flows through named substreams derived from (seed, path).
// Parallel and serial runs therefore draw identical numbers: a worker never
// consumes from a shared sequential stream, it derives its own engine from
// the indices that identify its unit of work.

using Rng = std::mt19937_64;

constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr uint64_t mix(uint64_t seed, uint64_t v) {
    return splitmix64(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

inline Rng substream(uint64_t seed, std::initializer_list<uint64_t> path) {
    uint64_t s = splitmix64(seed);
    for (uint64_t p : path) s = mix(s, p);
    return Rng(s);
}

// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller, one value per call. Fixed two draws per call keeps streams
// reproducible across platforms (no rejection loop).
inline double normal(Rng& rng) {
    double u1 = 1.0 - uniform01(rng);  // (0, 1]
    double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline double normal(Rng& rng, double mean, double stddev) {
    return mean + stddev * normal(rng);
}

// Uniform integer in [0, n).
inline uint64_t uniform_index(Rng& rng, uint64_t n) {
    // Multiplicative range reduction; bias is negligible for n << 2^64 and,
    // more importantly, the draw count is fixed.
    return static_cast<uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace qml
