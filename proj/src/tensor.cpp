#include "simplicial/tensor.hpp"

#include <cmath>

#include "simplicial/random.hpp"

namespace simplicial {

namespace {

double euclidean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

SpectralNorm spectral_norm(const Matrix& a, double tol, int max_iter) {
  if (!(tol > 0.0)) throw ArgumentError("spectral_norm: tol must be positive");
  SpectralNorm out;
  if (a.empty()) {
    out.converged = true;
    return out;
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  // Fixed, generic start vector so results are reproducible.
  Rng rng(0x5eed5eedULL);
  std::vector<double> v(n), av(m), atav(n);
  for (auto& x : v) x = rng.uniform(0.5, 1.5);
  double nv = euclidean(v);
  for (auto& x : v) x /= nv;

  double prev = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
      av[i] = s;
    }
    double sigma = euclidean(av);
    out.value = sigma;
    out.iterations = it;
    if (sigma == 0.0) {
      out.converged = true;
      return out;
    }
    if (prev >= 0.0 && std::abs(sigma - prev) <= tol * sigma) {
      out.converged = true;
      return out;
    }
    prev = sigma;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += a(i, j) * av[i];
      atav[j] = s;
    }
    double na = euclidean(atav);
    if (na == 0.0) {
      out.converged = true;
      return out;
    }
    for (std::size_t j = 0; j < n; ++j) v[j] = atav[j] / na;
  }
  return out;
}

}  // namespace simplicial
