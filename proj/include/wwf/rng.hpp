#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace wwf {

// splitmix64: mixes seed components into statistically independent streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
    return splitmix64(seed ^ splitmix64(v));
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::string_view s) {
    return hash_combine(seed, fnv1a64(s));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

} // namespace wwf
