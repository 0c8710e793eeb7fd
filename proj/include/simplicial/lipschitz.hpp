#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "simplicial/attention.hpp"
#include "simplicial/hypergraph.hpp"
#include "simplicial/matrix.hpp"

namespace simplicial {

// n sqrt(2n) N V^N R^(N-1) sqrt(1 + d N^2 (K R)^(2(N+1)))
double lipschitz_bound(std::size_t n, std::size_t d, std::size_t order, double v, double k, double r);

// Directional derivative of the unmasked, no-skip forward pass at X along
// `direction`. A mask is rejected with UnsupportedError.
Matrix analytic_jvp(const Matrix& x, const SimplicialParams& params, const Matrix& direction,
                    const SimplicialMask* mask = nullptr);

// (nd) x (nd) Jacobians; column c is the derivative along the c-th entry of
// X in row-major order.
Matrix analytic_jacobian(const Matrix& x, const SimplicialParams& params);
Matrix fd_jacobian(const Matrix& x, const SimplicialParams& params, double h = 1e-5);

// Central difference (f(X + hU) - f(X - hU)) / 2h.
Matrix fd_directional(const Matrix& x, const SimplicialParams& params, const Matrix& direction, double h);

struct LipschitzReport {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t order = 0;
  double radius = 0.0;
  double v = 0.0;  // max spectral norm of the value weights
  double k = 0.0;  // max spectral norm of the key weights
  double bound = 0.0;
  double empirical = 0.0;
  std::size_t samples = 0;
  double margin = 0.0;

  bool holds() const { return empirical <= bound * (1.0 + 1e-9); }
  std::string to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

// Max spectral norm of the Jacobian over `samples` inputs whose rows are
// uniform in the radius-R ball. Sample i draws from its own stream derived
// from (seed, i).
LipschitzReport empirical_lipschitz(const SimplicialParams& params, std::size_t n, double radius,
                                    std::size_t samples, std::uint64_t seed);

}  // namespace simplicial
