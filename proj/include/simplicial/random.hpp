#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "simplicial/matrix.hpp"

namespace simplicial {

// Seeded generator with platform-independent output. The engine is
// std::mt19937_64, whose sequence is fixed by the standard; the
// distributions below are written by hand because the std:: ones are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for sample `index` of a run seeded with `seed`.
  static Rng derived(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal, Box-Muller, one draw per call.
  double normal();

  // Uniform integer in [0, bound).
  std::size_t below(std::size_t bound);

  // Entries uniform in [-scale, scale].
  Matrix uniform_matrix(std::size_t rows, std::size_t cols, double scale);

  // Each row uniform in the Euclidean ball of the given radius.
  Matrix ball_rows(std::size_t rows, std::size_t cols, double radius);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace simplicial
