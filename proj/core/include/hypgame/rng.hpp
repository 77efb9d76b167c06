#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hypgame {

// mt19937_64 with hand-rolled bounded/uniform draws, so a seed yields the same
// stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01();
  // Uniform in [0, n); n must be positive. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

  // Independent stream derived from this seed and a label.
  static Rng derive(std::uint64_t seed, std::string_view label);

 private:
  std::mt19937_64 engine_;
};

}  // namespace hypgame
