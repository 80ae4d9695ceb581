#pragma once

#include <cstdint>
#include <string_view>

namespace geonas {

/// FNV-1a 64-bit hash; used for architecture fingerprints and seed derivation.
constexpr uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// One step of the splitmix64 sequence; advances `state` and returns the output.
/// Deterministic across platforms, used to derive independent sub-seeds.
constexpr uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derive the k-th sub-seed of a master seed without interacting with the
/// master stream itself.
constexpr uint64_t derive_seed(uint64_t master, uint64_t k) {
    uint64_t state = master ^ (0xA0761D6478BD642FULL * (k + 1));
    return splitmix64(state);
}

}  // namespace geonas
