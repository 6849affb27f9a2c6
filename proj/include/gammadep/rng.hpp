#pragma once
// Seed derivation. Every random stream is a pure function of (seed, stream id).

#include <cstdint>
#include <random>
#include <vector>

namespace gammadep {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream) { return Engine(derive_seed(seed, stream)); }

/// Uniformly random permutation of {0, ..., n-1}.
std::vector<std::uint32_t> random_permutation(std::size_t n, Engine& engine);

}  // namespace gammadep
