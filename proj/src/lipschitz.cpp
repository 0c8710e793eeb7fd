#include "simplicial/lipschitz.hpp"

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "simplicial/io.hpp"
#include "simplicial/random.hpp"
#include "simplicial/tensor.hpp"

namespace simplicial {

double lipschitz_bound(std::size_t n, std::size_t d, std::size_t order, double v, double k, double r) {
  if (n == 0 || d == 0 || order == 0) throw ArgumentError("lipschitz_bound: n, d and N must be positive");
  if (v < 0.0 || k < 0.0 || r < 0.0) throw ArgumentError("lipschitz_bound: V, K and R must be non-negative");
  const double nn = static_cast<double>(n);
  const double big_n = static_cast<double>(order);
  return nn * std::sqrt(2.0 * nn) * big_n * std::pow(v, big_n) * std::pow(r, big_n - 1.0) *
         std::sqrt(1.0 + static_cast<double>(d) * big_n * big_n * std::pow(k * r, 2.0 * (big_n + 1.0)));
}

namespace {

// Derivative of one head's output along U.
Matrix head_jvp(const Matrix& x, const HeadWeights& head, const Matrix& u, double scale) {
  const std::size_t n = x.rows();
  const std::size_t order = head.values.size();
  const std::size_t arity = order + 1;
  auto p = project(x, head.keys);
  auto dp = project(u, head.keys);
  auto v = project(x, head.values);
  auto dv = project(u, head.values);
  const std::size_t dh = p.front().cols();

  auto attn = softmax_multi_axis(contract_logits(p, scale));
  auto dlog = DenseTensor::cube(n, arity);
  std::vector<std::size_t> idx(arity, 0);
  std::size_t flat = 0;
  do {
    double acc = 0.0;
    for (std::size_t a = 0; a < dh; ++a) {
      for (std::size_t i = 0; i < arity; ++i) {
        double term = dp[i](idx[i], a);
        for (std::size_t l = 0; l < arity; ++l)
          if (l != i) term *= p[l](idx[l], a);
        acc += term;
      }
    }
    dlog[flat++] = scale * acc;
  } while (next_index(idx, n));

  // dA = A (dL - sum_M A dL) per query row.
  const std::size_t row = dlog.size() / n;
  auto dattn = DenseTensor::cube(n, arity);
  for (std::size_t q = 0; q < n; ++q) {
    double mean = 0.0;
    for (std::size_t j = 0; j < row; ++j) mean += attn[q * row + j] * dlog[q * row + j];
    for (std::size_t j = 0; j < row; ++j) dattn[q * row + j] = attn[q * row + j] * (dlog[q * row + j] - mean);
  }

  Matrix out = apply_values(dattn, v);
  // Product rule over the value factors.
  for (std::size_t m = 0; m < order; ++m) {
    auto factors = v;
    factors[m] = dv[m];
    out = out + apply_values(attn, factors);
  }
  return out;
}

Matrix unit_direction(std::size_t n, std::size_t d, std::size_t c) {
  Matrix e(n, d);
  e.values()[c] = 1.0;
  return e;
}

}  // namespace

Matrix analytic_jvp(const Matrix& x, const SimplicialParams& params, const Matrix& direction,
                    const SimplicialMask* mask) {
  if (mask) throw UnsupportedError("analytic_jvp supports only the unmasked forward pass");
  if (x.rows() == 0 || x.cols() != params.dim()) throw DimensionError("analytic_jvp: X has wrong shape");
  if (direction.rows() != x.rows() || direction.cols() != x.cols()) {
    throw DimensionError("analytic_jvp: direction must have the shape of X");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(params.head_dim()));
  std::vector<Matrix> heads;
  for (const auto& head : params.heads()) heads.push_back(head_jvp(x, head, direction, scale));
  return matmul(hconcat(heads), params.output());
}

Matrix analytic_jacobian(const Matrix& x, const SimplicialParams& params) {
  const std::size_t nd = x.rows() * x.cols();
  Matrix jac(nd, nd);
  for (std::size_t c = 0; c < nd; ++c) {
    auto col = analytic_jvp(x, params, unit_direction(x.rows(), x.cols(), c));
    for (std::size_t r = 0; r < nd; ++r) jac(r, c) = col.values()[r];
  }
  return jac;
}

Matrix fd_directional(const Matrix& x, const SimplicialParams& params, const Matrix& direction, double h) {
  if (!(h > 0.0)) throw ArgumentError("finite-difference step must be positive");
  Matrix plus = x, minus = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    plus.values()[i] += h * direction.values()[i];
    minus.values()[i] -= h * direction.values()[i];
  }
  Matrix diff = forward(plus, params) - forward(minus, params);
  return (1.0 / (2.0 * h)) * diff;
}

Matrix fd_jacobian(const Matrix& x, const SimplicialParams& params, double h) {
  const std::size_t nd = x.rows() * x.cols();
  Matrix jac(nd, nd);
  for (std::size_t c = 0; c < nd; ++c) {
    auto col = fd_directional(x, params, unit_direction(x.rows(), x.cols(), c), h);
    for (std::size_t r = 0; r < nd; ++r) jac(r, c) = col.values()[r];
  }
  return jac;
}

std::string LipschitzReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["d"] = d;
  j["order"] = order;
  j["R"] = radius;
  j["V"] = v;
  j["K"] = k;
  j["bound"] = bound;
  j["empirical"] = empirical;
  j["samples"] = samples;
  j["margin"] = margin;
  j["holds"] = holds();
  return j.dump();
}

std::string LipschitzReport::csv_header() { return "n,d,order,R,V,K,bound,empirical,samples,margin,holds"; }

std::string LipschitzReport::csv_row() const {
  std::ostringstream out;
  out << n << ',' << d << ',' << order << ',' << format_double(radius) << ',' << format_double(v) << ','
      << format_double(k) << ',' << format_double(bound) << ',' << format_double(empirical) << ',' << samples
      << ',' << format_double(margin) << ',' << (holds() ? "true" : "false");
  return out.str();
}

LipschitzReport empirical_lipschitz(const SimplicialParams& params, std::size_t n, double radius,
                                    std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ArgumentError("empirical_lipschitz needs at least one sample");
  if (n == 0) throw ArgumentError("empirical_lipschitz needs at least one token");
  if (!(radius >= 0.0)) throw ArgumentError("radius must be non-negative");
  LipschitzReport rep;
  rep.n = n;
  rep.d = params.dim();
  rep.order = params.order();
  rep.radius = radius;
  rep.samples = samples;
  for (const auto& head : params.heads()) {
    for (const auto& w : head.keys) rep.k = std::max(rep.k, spectral_norm(w, 1e-14, 100000).value);
    for (const auto& w : head.values) rep.v = std::max(rep.v, spectral_norm(w, 1e-14, 100000).value);
  }
  rep.bound = lipschitz_bound(n, params.dim(), params.order(), rep.v, rep.k, radius);
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng = Rng::derived(seed, s);
    Matrix x = rng.ball_rows(n, params.dim(), radius);
    rep.empirical = std::max(rep.empirical, spectral_norm(analytic_jacobian(x, params), 1e-13, 100000).value);
  }
  rep.margin = rep.bound - rep.empirical;
  return rep;
}

}  // namespace simplicial
