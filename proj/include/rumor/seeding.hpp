#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rumor {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Folds a sequence of keys into one seed. Order-sensitive, so
/// (master, grid, trial) and (master, trial, grid) give different streams.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    for (auto k : keys) h = mix64(h ^ mix64(k));
    return h;
}

/// Maps a 64-bit word to a double in [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline Rng make_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Rng(seq);
}

// Stream labels used as the first key when a trial seed fans out.
namespace stream {
inline constexpr std::uint64_t source = 1;
inline constexpr std::uint64_t diffusion = 2;
inline constexpr std::uint64_t query = 3;
inline constexpr std::uint64_t tiebreak = 4;
inline constexpr std::uint64_t identity = 11;
inline constexpr std::uint64_t direction_truth = 12;
inline constexpr std::uint64_t direction_decoy = 13;
}  // namespace stream

}  // namespace rumor
