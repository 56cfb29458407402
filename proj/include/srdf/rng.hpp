#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace srdf {

/* All randomness goes through these helpers instead of the std
 * distributions, whose output is implementation-defined. mt19937_64 raw
 * output is pinned by the standard, so results are reproducible across
 * compilers and platforms. */

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0)
{
    // splitmix64 scramble so (seed, stream) pairs decorrelate
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return std::mt19937_64(z ^ (z >> 31));
}

/* Uniform in [0, 1). */
inline double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return lo + (hi - lo) * uniform01(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi_inclusive)
{
    const std::uint64_t span = static_cast<std::uint64_t>(hi_inclusive - lo) + 1;
    return lo + static_cast<int>(rng() % span);
}

/* Standard normal via Box-Muller. Draws two uniforms per call and keeps
 * no state, so call sequences stay reproducible. */
inline double normal01(std::mt19937_64& rng)
{
    double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    if (u1 <= 0.0)
        u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

} // namespace srdf
