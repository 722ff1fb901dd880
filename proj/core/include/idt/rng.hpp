#pragma once

#include <cstdint>
#include <random>

namespace idt {

// Seeded generator with platform-independent draws. The standard
// distributions are implementation-defined, so uniform draws are derived
// directly from the 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n); n must be positive. Rejection-sampled, no bias.
  std::uint64_t below(std::uint64_t n);

  // Derive an independent stream, e.g. one per purpose.
  Rng fork(std::uint64_t salt);

 private:
  std::mt19937_64 engine_;
};

}  // namespace idt
