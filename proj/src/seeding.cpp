#include "metaes/seeding.hpp"

#include <array>

namespace metaes::exec {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t epoch, std::uint64_t index) noexcept {
  std::uint64_t state = 0;
  for (const std::uint64_t word : std::array{master, epoch, index}) {
    state = splitmix64_mix((state ^ word) + kSplitMixGamma);
  }
  return state;
}

}  // namespace metaes::exec
