#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ergo {

// One RNG stream per logical role.  Streams are derived from the master seed
// by hashing a fixed label, so adding a new consumer never perturbs existing
// streams.
inline std::mt19937_64 rng_stream(std::uint64_t master_seed, std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
    for (char c : label) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ull;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(h),
                      static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}

inline double uniform01(std::mt19937_64& g) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(g);
}

} // namespace ergo
