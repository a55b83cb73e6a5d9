#pragma once

#include <cstdint>
#include <random>

namespace mecplace {

// Deterministic RNG used by everything that samples. std::mt19937_64 output
// is pinned by the standard; the bounded/canonical draws below are
// implemented by hand because std::uniform_*_distribution is
// implementation-defined and would break byte-identical reproducibility
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform integer in [0, n). n must be > 0. Debiased by rejection.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = gen_();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double canonical() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mecplace
