#pragma once

#include <cstdint>
#include <random>

namespace phasefit {

// Seedable random stream: mt19937_64 with an explicit 53-bit mapping to
// [0,1), so that a given seed produces the same stream on every platform.
// One Rng is owned by one task at a time; concurrent sampling should use
// independently seeded instances.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform draw in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace phasefit
