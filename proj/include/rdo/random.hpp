#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rdo {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and a path of counters, e.g.
/// derive_seed(master, {rep, stream, agent}). Children of distinct paths are
/// statistically independent and the mapping never depends on call order.
inline std::uint64_t derive_seed(std::uint64_t parent,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(parent);
  for (std::uint64_t c : path)
    s = mix64(s ^ mix64(c + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_rng(std::uint64_t parent,
                    std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(parent, path));
}

/// Stream identifiers used with derive_seed.
namespace stream {
inline constexpr std::uint64_t kBasePoints = 1;
inline constexpr std::uint64_t kTargets = 2;
inline constexpr std::uint64_t kAgents = 3;
inline constexpr std::uint64_t kComparator = 4;
inline constexpr std::uint64_t kCalibration = 5;
} // namespace stream

} // namespace rdo
