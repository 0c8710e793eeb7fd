#include "simplicial/random.hpp"

#include <cmath>
#include <numbers>

namespace simplicial {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::derived(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL)));
}

double Rng::normal() {
  // 1 - u keeps the logarithm argument in (0, 1].
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::below(std::size_t bound) {
  if (bound == 0) throw ArgumentError("Rng::below: bound must be positive");
  const std::uint64_t b = bound;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return static_cast<std::size_t>(x % b);
}

Matrix Rng::uniform_matrix(std::size_t rows, std::size_t cols, double scale) {
  Matrix m(rows, cols);
  for (auto& v : m.values()) v = uniform(-scale, scale);
  return m;
}

Matrix Rng::ball_rows(std::size_t rows, std::size_t cols, double radius) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    auto row = m.row(i);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& v : row) {
        v = normal();
        norm2 += v * v;
      }
    } while (norm2 == 0.0);
    // Direction uniform on the sphere, radius distributed as r^(1/d).
    double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(cols));
    double s = r / std::sqrt(norm2);
    for (auto& v : row) v *= s;
  }
  return m;
}

}  // namespace simplicial
