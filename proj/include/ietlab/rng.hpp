#pragma once

#include <cstdint>

namespace ietlab {

// Counter-based stream: the value for (seed, index) does not depend on evaluation order.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t counter_random(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ index);
}

// Uniform in [0, 1) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(counter_random(seed, index) >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1).
inline double counter_uniform_open(std::uint64_t seed, std::uint64_t index) {
    return (static_cast<double>(counter_random(seed, index) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace ietlab
