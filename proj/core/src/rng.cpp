#include "hypgame/rng.hpp"

#include "hypgame/error.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_input, "Rng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

Rng Rng::derive(std::uint64_t seed, std::string_view label) {
  return Rng(seed ^ fnv1a64(label));
}

}  // namespace hypgame
