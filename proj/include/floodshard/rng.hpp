// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_RNG_HPP
#define FLOODSHARD_RNG_HPP

#include <cstdint>
#include <random>

namespace floodshard {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent seed for a named sub-stream of a base seed.
inline uint64_t derive_seed(uint64_t base, uint64_t stream, uint64_t index) {
    return splitmix64(splitmix64(base ^ (stream * 0x9e3779b97f4a7c15ULL)) ^ index);
}

// Uniform integer in [0, bound) straight from the generator output
// (Lemire's method), so sampled streams do not depend on the standard
// library's distribution implementations.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
    uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    uint64_t l = static_cast<uint64_t>(m);
    if (l < bound) {
        uint64_t t = -bound % bound;
        while (l < t) {
            x = rng();
            m = static_cast<__uint128_t>(x) * bound;
            l = static_cast<uint64_t>(m);
        }
    }
    return static_cast<uint64_t>(m >> 64);
}

} // namespace floodshard

#endif // FLOODSHARD_RNG_HPP
