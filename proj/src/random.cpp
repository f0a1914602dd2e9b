#include "oculus/random.hpp"

#include <limits>

namespace oculus {

std::uint64_t Rng::below(std::uint64_t bound) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  // 2^64 mod bound; draws at or above 2^64 - rem would bias the low residues.
  const std::uint64_t rem = (kMax % bound + 1) % bound;
  std::uint64_t r = engine_();
  while (rem != 0 && r > kMax - rem) r = engine_();
  return r % bound;
}

}  // namespace oculus
