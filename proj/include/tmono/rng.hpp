// rng.hpp — Counter-based random streams. Each (seed, index, slot) triple maps
// to an independent value through a splitmix64 finalizer chain, so samples can
// be drawn in any order (or in parallel) with identical results.

#pragma once

#include <cmath>
#include <cstdint>

namespace tmono {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Uniform double in [0, 1) for the given (seed, index, slot).
inline double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
    std::uint64_t x = detail::splitmix64(seed);
    x = detail::splitmix64(x ^ index);
    x = detail::splitmix64(x ^ slot);
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; consumes uniform slots (2*slot, 2*slot + 1).
inline double counter_gaussian(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
    const double u1 = counter_uniform(seed, index, 2 * slot);
    const double u2 = counter_uniform(seed, index, 2 * slot + 1);
    // guard log(0)
    const double r = std::sqrt(-2.0 * std::log(u1 + 0x1.0p-60));
    return r * std::cos(2.0 * M_PI * u2);
}

}  // namespace tmono
