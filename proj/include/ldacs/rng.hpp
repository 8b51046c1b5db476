#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ldacs {

using Rng = std::mt19937_64;

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Stable seed splitting: fold each part through splitmix64. Used for every
// (master seed, point, trial, stream) derivation so results never depend on
// scheduling order.
inline uint64_t derive_seed(std::initializer_list<uint64_t> parts) {
    uint64_t h = 0x1DAC5ull;
    for (uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
}

}  // namespace ldacs
