#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "simplicial/hypergraph.hpp"
#include "simplicial/matrix.hpp"

namespace simplicial {

// Entry (k_0..k_N) = scale * sum_a prod_i keys[i](k_i, a). The feature axis
// is the innermost loop and products are formed left to right.
template <class Real>
BasicTensor<Real> contract_logits(const std::vector<BasicMatrix<Real>>& keys, const Real& scale) {
  if (keys.size() < 2) throw ArgumentError("contract_logits needs at least two key matrices");
  if (!(scale > Real(0))) throw ArgumentError("contract_logits: scale must be positive");
  const std::size_t n = keys[0].rows();
  const std::size_t d = keys[0].cols();
  if (n == 0 || d == 0) throw DimensionError("contract_logits: empty key matrix");
  for (const auto& k : keys) {
    if (k.rows() != n || k.cols() != d) throw DimensionError("contract_logits: key shapes differ");
  }
  const std::size_t arity = keys.size();
  auto out = BasicTensor<Real>::cube(n, arity);
  std::vector<std::size_t> idx(arity, 0);
  std::size_t flat = 0;
  do {
    Real acc(0);
    for (std::size_t a = 0; a < d; ++a) {
      Real p = keys[0](idx[0], a);
      for (std::size_t i = 1; i < arity; ++i) p *= keys[i](idx[i], a);
      acc += p;
    }
    out[flat++] = scale * acc;
  } while (next_index(idx, n));
  return out;
}

// Softmax jointly over axes 1..N for each query k_0. Masked entries are left
// out of the max and of the partition sum and come back as exact zeros.
template <class Real>
BasicTensor<Real> softmax_multi_axis(const BasicTensor<Real>& logits,
                                     const SimplicialMask* mask = nullptr) {
  if (logits.rank() < 2 || !logits.is_cube()) {
    throw DimensionError("softmax_multi_axis expects an n^(N+1) tensor with N >= 1");
  }
  const std::size_t n = logits.shape()[0];
  if (mask && (mask->tokens() != n || mask->order() + 1 != logits.rank())) {
    throw DimensionError("mask (n=" + std::to_string(mask->tokens()) + ", N=" +
                         std::to_string(mask->order()) + ") does not match logits");
  }
  const std::size_t row = logits.size() / n;
  using std::exp;
  BasicTensor<Real> out(logits.shape());
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t base = q * row;
    bool any = false;
    Real top(0);
    for (std::size_t j = 0; j < row; ++j) {
      if (mask && !mask->contains_flat(base + j)) continue;
      if (!any || logits[base + j] > top) top = logits[base + j];
      any = true;
    }
    if (!any) {
      throw DomainError("query " + std::to_string(q) + " has every simplex masked out");
    }
    Real total(0);
    for (std::size_t j = 0; j < row; ++j) {
      if (mask && !mask->contains_flat(base + j)) continue;
      out[base + j] = exp(logits[base + j] - top);
      total += out[base + j];
    }
    for (std::size_t j = 0; j < row; ++j) out[base + j] /= total;
  }
  return out;
}

// out(i, j) = sum over (k_1..k_N) of attn(i, k_1..k_N) * prod_m values[m](k_m, j).
template <class Real>
BasicMatrix<Real> apply_values(const BasicTensor<Real>& attn,
                               const std::vector<BasicMatrix<Real>>& values) {
  if (attn.rank() < 2 || !attn.is_cube()) throw DimensionError("apply_values: attention must be a cube");
  const std::size_t order = attn.rank() - 1;
  const std::size_t n = attn.shape()[0];
  if (values.size() != order) {
    throw DimensionError("apply_values: expected " + std::to_string(order) + " value matrices");
  }
  const std::size_t dv = values[0].cols();
  for (const auto& v : values) {
    if (v.rows() != n || v.cols() != dv) throw DimensionError("apply_values: value shapes differ");
  }
  BasicMatrix<Real> out(n, dv);
  std::vector<std::size_t> src(order, 0);
  std::vector<Real> prod(dv);
  std::size_t flat = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto dst = out.row(i);
    do {
      const Real& w = attn[flat++];
      for (std::size_t j = 0; j < dv; ++j) {
        Real p = w * values[0](src[0], j);
        for (std::size_t m = 1; m < order; ++m) p *= values[m](src[m], j);
        dst[j] += p;
      }
    } while (next_index(src, n));
  }
  return out;
}

// Maximum absolute column sum.
template <class Real>
Real norm_one(const BasicMatrix<Real>& a) {
  if (a.empty()) throw ArgumentError("norm of an empty matrix");
  using std::abs;
  Real best(0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Real s(0);
    for (std::size_t i = 0; i < a.rows(); ++i) s += abs(a(i, j));
    if (s > best) best = s;
  }
  return best;
}

// Maximum absolute row sum.
template <class Real>
Real norm_inf(const BasicMatrix<Real>& a) {
  if (a.empty()) throw ArgumentError("norm of an empty matrix");
  using std::abs;
  Real best(0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Real s(0);
    for (std::size_t j = 0; j < a.cols(); ++j) s += abs(a(i, j));
    if (s > best) best = s;
  }
  return best;
}

template <class Real>
Real norm_one_inf(const BasicMatrix<Real>& a) {
  using std::sqrt;
  return sqrt(norm_one(a) * norm_inf(a));
}

struct SpectralNorm {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest singular value by power iteration on A^T A.
SpectralNorm spectral_norm(const Matrix& a, double tol = 1e-12, int max_iter = 1000);

}  // namespace simplicial
