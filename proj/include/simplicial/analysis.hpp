#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simplicial/attention.hpp"
#include "simplicial/hypergraph.hpp"
#include "simplicial/matrix.hpp"
#include "simplicial/tensor.hpp"

namespace simplicial {

enum class CheckStatus { holds, violated, not_applicable };

std::string_view to_string(CheckStatus status);

// Largest spread max_j E_ij - min_j E_ij under which the softmax
// perturbation estimate applies.
inline constexpr double kSpreadLimit = 1.256;
inline constexpr double kBoundSlack = 1e-9;

// Column mean with a correction pass, so a column of identical entries
// has a mean equal to that entry.
template <class Real>
std::vector<Real> column_mean(const BasicMatrix<Real>& x) {
  const std::size_t n = x.rows();
  std::vector<Real> mean(x.cols(), Real(0));
  if (n == 0) return mean;
  const Real count(static_cast<double>(n));
  for (std::size_t j = 0; j < x.cols(); ++j) {
    Real s(0);
    for (std::size_t i = 0; i < n; ++i) s += x(i, j);
    Real m = s / count;
    Real c(0);
    for (std::size_t i = 0; i < n; ++i) c += x(i, j) - m;
    mean[j] = m + c / count;
  }
  return mean;
}

// X - 1 x^T with x the column mean.
template <class Real>
BasicMatrix<Real> residual(const BasicMatrix<Real>& x) {
  auto mean = column_mean(x);
  BasicMatrix<Real> out = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) -= mean[j];
  return out;
}

template <class Real>
Real residual_norm(const BasicMatrix<Real>& x) {
  return norm_one_inf(residual(x));
}

// (2 max_m |W_K^(m)|)^(N+1) (2 max_m |W_V^(m)|)^N in the composite norm,
// maxima taken over every layer given.
double beta_prime(std::span<const SimplicialParams> layers);
double beta_prime(const SimplicialParams& params);

// max over layers and value matrices of |W_V|_{1,inf}.
double max_value_norm(std::span<const SimplicialParams> layers);

template <class Real>
struct GammaMeasurement {
  Real gamma{0};
  Real spread{0};             // max_{i,j,j'} |E_ij - E_ij'|
  bool precondition = true;   // spread <= kSpreadLimit
};

// gamma = max_{i,j,j'} |E_ij - E_ij'| / max_{j,j'} sum_i |E_ij - E_ij'|, or 0
// when the denominator vanishes.
template <class Real>
GammaMeasurement<Real> measure_gamma(const BasicMatrix<Real>& e) {
  using std::abs;
  GammaMeasurement<Real> out;
  const std::size_t n = e.rows(), m = e.cols();
  for (std::size_t i = 0; i < n; ++i) {
    if (m == 0) break;
    Real lo = e(i, 0), hi = e(i, 0);
    for (std::size_t j = 1; j < m; ++j) {
      if (e(i, j) < lo) lo = e(i, j);
      if (e(i, j) > hi) hi = e(i, j);
    }
    if (hi - lo > out.spread) out.spread = hi - lo;
  }
  Real denom(0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      Real s(0);
      for (std::size_t i = 0; i < n; ++i) s += abs(e(i, j) - e(i, k));
      if (s > denom) denom = s;
    }
  }
  out.gamma = denom > Real(0) ? Real(out.spread / denom) : Real(0);
  out.precondition = out.spread <= Real(kSpreadLimit);
  return out;
}

// Higher-order part of the logits: writing X = 1 x^T + R, every logit is
// sum_a prod_i (c_i(a) + r_i(k_i, a)); this keeps the terms with at least two
// residual factors r. Rows are queries, columns the flattened (k_1..k_N).
// Includes the 1/sqrt(d_h) logit scale.
template <class Real>
BasicMatrix<Real> error_tensor(const BasicMatrix<Real>& x, const SimplicialParams& params) {
  if (params.head_count() != 1) throw ArgumentError("error_tensor expects single-head parameters");
  const std::size_t n = x.rows();
  const std::size_t order = params.order();
  const std::size_t arity = order + 1;
  const std::size_t dh = params.head_dim();
  using std::sqrt;
  const Real scale = Real(1) / sqrt(Real(static_cast<double>(dh)));
  auto mean = column_mean(x);
  BasicMatrix<Real> mean_row(1, x.cols(), std::vector<Real>(mean.begin(), mean.end()));
  auto res = residual(x);
  std::vector<BasicMatrix<Real>> c, r;
  for (const auto& w : params.head(0).keys) {
    auto wr = w.template cast<Real>();
    c.push_back(matmul(mean_row, wr));
    r.push_back(matmul(res, wr));
  }
  const std::size_t cols = int_pow(n, order);
  BasicMatrix<Real> out(n, cols);
  std::vector<std::size_t> idx(arity, 0);
  std::vector<Real> poly(arity + 1);
  std::size_t flat = 0;
  do {
    Real acc(0);
    for (std::size_t a = 0; a < dh; ++a) {
      // Coefficients of prod_i (c_i + t r_i) in t.
      std::fill(poly.begin(), poly.end(), Real(0));
      poly[0] = Real(1);
      for (std::size_t i = 0; i < arity; ++i) {
        const Real& ci = c[i](0, a);
        const Real& ri = r[i](idx[i], a);
        for (std::size_t s = i + 1; s > 0; --s) poly[s] = poly[s] * ci + poly[s - 1] * ri;
        poly[0] = poly[0] * ci;
      }
      for (std::size_t s = 2; s <= arity; ++s) acc += poly[s];
    }
    out.values()[flat++] = scale * acc;
  } while (next_index(idx, n));
  return out;
}

template <class Real>
struct LayerCheck {
  Real lhs{0};  // |res(X')|
  Real rhs{0};  // 4 gamma / sqrt(d_h) beta' |X|^(2(N-1)) |res X|^3
  GammaMeasurement<Real> gamma;
  CheckStatus status = CheckStatus::holds;
  Real attn_min{0};  // smallest attention entry of the layer
};

template <class Real>
LayerCheck<Real> layer_check(const BasicMatrix<Real>& x, const SimplicialParams& params,
                             BasicMatrix<Real>* output = nullptr) {
  if (params.head_count() != 1) throw ArgumentError("the single-layer bound is stated for one head");
  using std::pow;
  using std::sqrt;
  LayerCheck<Real> out;
  auto trace = forward_traced(x, params, nullptr, false);
  out.lhs = residual_norm(trace.output);
  const auto& attn = trace.attention.front();
  out.attn_min = *std::min_element(attn.values().begin(), attn.values().end());
  out.gamma = measure_gamma(error_tensor(x, params));
  const Real xn = norm_one_inf(x);
  const Real rn = residual_norm(x);
  const int power = 2 * (static_cast<int>(params.order()) - 1);
  out.rhs = Real(4) * out.gamma.gamma / sqrt(Real(static_cast<double>(params.head_dim()))) *
            Real(beta_prime(params)) * pow(xn, power) * rn * rn * rn;
  if (!out.gamma.precondition) {
    out.status = CheckStatus::not_applicable;
  } else {
    out.status = out.lhs <= out.rhs * Real(1 + kBoundSlack) ? CheckStatus::holds : CheckStatus::violated;
  }
  if (output) *output = std::move(trace.output);
  return out;
}

inline LayerCheck<double> cubic_bound_check(const Matrix& x, const SimplicialParams& params) {
  return layer_check(x, params);
}

// Stacked-layer bound
//   |res X_L| <= |res X_0|^(3^L) (4 gamma H / sqrt(d) beta max_t |X_t|^(2(N-1)))^((3^L - 1)/2)
// compared in log10 so the tiny right-hand sides stay representable.
template <class Real>
struct StackedBoundCheck {
  Real lhs{0};
  double log10_lhs = 0.0;
  double log10_rhs = 0.0;
  Real gamma_max{0};
  std::vector<bool> precondition;  // per layer
  CheckStatus status = CheckStatus::holds;
};

template <class Real>
double log10_of(const Real& v) {
  using std::log10;
  if (v == Real(0)) return -INFINITY;
  return static_cast<double>(log10(v));
}

template <class Real>
StackedBoundCheck<Real> stacked_bound_check(std::span<const BasicMatrix<Real>> trajectory,
                                     std::span<const SimplicialParams> layers, std::size_t heads = 1) {
  if (trajectory.size() != layers.size() + 1) {
    throw DimensionError("stacked_bound_check: trajectory must hold L+1 states for L layers");
  }
  using std::log10;
  StackedBoundCheck<Real> out;
  const std::size_t L = layers.size();
  for (std::size_t t = 0; t < L; ++t) {
    auto g = measure_gamma(error_tensor(trajectory[t], layers[t]));
    out.precondition.push_back(g.precondition);
    if (g.gamma > out.gamma_max) out.gamma_max = g.gamma;
  }
  const Real r0 = residual_norm(trajectory.front());
  out.lhs = residual_norm(trajectory.back());
  out.log10_lhs = log10_of(out.lhs);
  if (std::find(out.precondition.begin(), out.precondition.end(), false) != out.precondition.end()) {
    out.status = CheckStatus::not_applicable;
  }
  if (L == 0) {
    out.log10_rhs = log10_of(r0);
    if (out.status != CheckStatus::not_applicable) out.status = CheckStatus::holds;
    return out;
  }
  Real xmax(0);
  for (const auto& x : trajectory) {
    Real v = norm_one_inf(x);
    if (v > xmax) xmax = v;
  }
  const std::size_t order = layers.front().order();
  const double dh = static_cast<double>(layers.front().head_dim());
  const double three_l = std::pow(3.0, static_cast<double>(L));
  // log10 of the bracketed constant; -inf when any factor is zero.
  const double log_c = log10_of(Real(4) * out.gamma_max * Real(static_cast<double>(heads))) -
                       0.5 * std::log10(dh) + std::log10(beta_prime(layers)) +
                       2.0 * (static_cast<double>(order) - 1.0) * log10_of(xmax);
  const double log_r0 = log10_of(r0);
  if (r0 == Real(0)) {
    out.log10_rhs = -INFINITY;
  } else if (std::isinf(log_c) && log_c < 0) {
    out.log10_rhs = -INFINITY;
  } else {
    out.log10_rhs = three_l * log_r0 + (three_l - 1.0) / 2.0 * log_c;
  }
  if (out.status == CheckStatus::not_applicable) return out;
  if (out.lhs == Real(0)) {
    out.status = CheckStatus::holds;
  } else if (std::isinf(out.log10_rhs)) {
    out.status = CheckStatus::violated;
  } else {
    out.status = out.log10_lhs <= out.log10_rhs + std::log10(1.0 + kBoundSlack) ? CheckStatus::holds
                                                                                : CheckStatus::violated;
  }
  return out;
}

// Per-layer record; optional fields are absent at t = 0.
template <class Real>
struct ResidualTrajectory {
  std::vector<Real> res_norm;
  std::vector<Real> x_norm;
  std::vector<std::optional<Real>> bound_rhs;
  std::vector<std::optional<Real>> attn_min_on_edges;

  std::size_t size() const noexcept { return res_norm.size(); }
};

template <class Real>
struct CollapseReport {
  std::vector<BasicMatrix<Real>> states;  // X^(0..L)
  ResidualTrajectory<Real> trajectory;
  std::vector<LayerCheck<Real>> layers;
  StackedBoundCheck<Real> stacked;
};

// Unmasked, single-head, no-skip stack with the single-layer bound at
// every layer and the stacked bound at the end.
template <class Real>
CollapseReport<Real> collapse_report(const BasicMatrix<Real>& x0, std::span<const SimplicialParams> layers) {
  CollapseReport<Real> out;
  out.states.push_back(x0);
  auto& tr = out.trajectory;
  tr.res_norm.push_back(residual_norm(x0));
  tr.x_norm.push_back(norm_one_inf(x0));
  tr.bound_rhs.emplace_back();
  tr.attn_min_on_edges.emplace_back();
  for (const auto& layer : layers) {
    BasicMatrix<Real> next;
    auto check = layer_check(out.states.back(), layer, &next);
    tr.res_norm.push_back(check.lhs);
    tr.x_norm.push_back(norm_one_inf(next));
    tr.bound_rhs.emplace_back(check.rhs);
    tr.attn_min_on_edges.emplace_back(check.attn_min);
    out.layers.push_back(std::move(check));
    out.states.push_back(std::move(next));
  }
  out.stacked = stacked_bound_check<Real>(out.states, layers, 1);
  return out;
}

// Least-squares slope of log r_{t+1} against log r_t over consecutive
// finite pairs; NaN with fewer than two pairs.
double cubic_slope(std::span<const double> log_res);

struct MaskedDecayReport {
  ResidualTrajectory<double> trajectory;
  std::vector<Matrix> states;
  std::size_t radius = 0;
  double eps_hat = 0.0;
  double constant = 0.0;            // C = res_norm(0)
  std::vector<double> certified;    // C (1 - eps^r)^(t/r)
  bool gate_ok = true;
  std::optional<std::size_t> gate_violation;  // first layer failing the gate
  double gate_value = 0.0;                    // largest gate quantity observed
  bool positive = true;
  bool decay_holds = true;
  CheckStatus status = CheckStatus::holds;
};

// Masked, single-head, no-skip stack checked against the exponential decay
// certificate. Throws DomainError when the mask has no center or the center
// lacks a self loop.
MaskedDecayReport masked_decay_check(const Matrix& x0, std::span<const SimplicialParams> layers,
                                     const SimplicialMask& mask);

// CSV with columns t,res_norm,x_norm,bound_rhs,attn_min_on_edges followed by
// any extra columns; absent values are written as nan.
template <class Real, class Format>
void write_trajectory_csv(std::ostream& out, const ResidualTrajectory<Real>& tr, Format&& format,
                          const std::vector<std::pair<std::string, std::vector<std::string>>>& extra = {}) {
  out << "# schema=1\n";
  out << "t,res_norm,x_norm,bound_rhs,attn_min_on_edges";
  for (const auto& [name, col] : extra) out << ',' << name;
  out << '\n';
  auto opt = [&](const std::optional<Real>& v) { return v ? format(*v) : std::string("nan"); };
  for (std::size_t t = 0; t < tr.size(); ++t) {
    out << t << ',' << format(tr.res_norm[t]) << ',' << format(tr.x_norm[t]) << ',' << opt(tr.bound_rhs[t])
        << ',' << opt(tr.attn_min_on_edges[t]);
    for (const auto& [name, col] : extra) out << ',' << (t < col.size() ? col[t] : std::string("nan"));
    out << '\n';
  }
}

}  // namespace simplicial
