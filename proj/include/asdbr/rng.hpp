#pragma once

#include <cstdint>
#include <random>

namespace asdbr {

using RandomEngine = std::mt19937_64;

/// splitmix64 finalizer. Full-period bijection on 64-bit words, used here
/// to turn (seed, stream, index) triples into decorrelated engine seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent seed from a base seed plus up to two stream tags.
/// The design/signal/noise generators and every (point, trial) pair of the
/// benchmark driver get their own stream, so redrawing one quantity never
/// perturbs the others.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) {
    return mix64(mix64(mix64(base) ^ stream) ^ index);
}

namespace stream {
inline constexpr std::uint64_t design = 0x1ULL;
inline constexpr std::uint64_t signal = 0x2ULL;
inline constexpr std::uint64_t noise = 0x3ULL;
inline constexpr std::uint64_t trial = 0x4ULL;
} // namespace stream

inline RandomEngine make_engine(std::uint64_t seed, std::uint64_t stream_tag) {
    return RandomEngine(derive_seed(seed, stream_tag));
}

} // namespace asdbr
