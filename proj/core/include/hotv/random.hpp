#pragma once

#include <cstdint>
#include <random>

namespace hotv {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based child seed: the same (parent, stream, index) always yields the
/// same seed, independent of the order in which children are requested.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream,
                                    std::uint64_t index = 0) noexcept {
  return splitmix64(splitmix64(splitmix64(parent) ^ stream) + index);
}

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

}  // namespace hotv
