#pragma once

#include <cstdint>

namespace metaes::exec {

/// SplitMix64 output function.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t kSplitMixGamma = 0x9e3779b97f4a7c15ULL;

/// Seed for inner run `index` of epoch `epoch` under `master`.
///
/// Bit-exact definition: with s = 0, for each word w of (master, epoch, index)
/// in that order, s = mix((s ^ w) + gamma), where mix is the SplitMix64 output
/// function and gamma = 0x9e3779b97f4a7c15 (all arithmetic mod 2^64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t epoch, std::uint64_t index) noexcept;

}  // namespace metaes::exec
