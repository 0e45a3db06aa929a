// rng.hpp : seeded deterministic random source for simulation runs.
//
// std::mt19937_64 is fully specified by the standard, so identical seeds give
// identical streams on every platform. The uniform helpers below avoid
// std::uniform_real_distribution, whose output is implementation-defined.
#pragma once

#include <cstdint>
#include <random>

namespace avsoc {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Symmetric perturbation in [-span, +span).
  double jitter(double span) { return uniform(-span, span); }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace avsoc
