#pragma once

#include <cstdint>

namespace primerace {

/// Stateless counter-based generator: every output is a pure function of
/// (key, counter), so draws do not depend on how work is scheduled.
/// The mixing function is the SplitMix64 finalizer.
struct CounterRng {
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Derives a child key; used to chain (seed, character, sample) into one key.
  static constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t tag) noexcept {
    return mix(key ^ mix(tag + kGolden));
  }

  static constexpr std::uint64_t at(std::uint64_t key, std::uint64_t counter) noexcept {
    return mix(key + (counter + 1) * kGolden);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  static constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }
};

}  // namespace primerace
