#pragma once

#include <cstdint>
#include <initializer_list>

namespace twofold {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic child seed; independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = splitmix64(base);
    for (auto p : parts) s = splitmix64(s ^ p);
    return s;
}

}  // namespace twofold
