#pragma once

#include <cstdint>
#include <random>

namespace qam {

// All randomness goes through MT19937-64 (std::mt19937_64, whose output
// sequence is fixed by the C++ standard). Draws are converted by hand rather
// than through <random> distributions, whose algorithms are
// implementation-defined, so seeded runs are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// +1 when the top bit of the next draw is clear, -1 otherwise.
  int spin() { return (next() >> 63) == 0 ? +1 : -1; }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection, bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qam
