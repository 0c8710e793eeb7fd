#include "simplicial/analysis.hpp"

#include <cmath>
#include <limits>

namespace simplicial {

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::holds: return "holds";
    case CheckStatus::violated: return "violated";
    case CheckStatus::not_applicable: return "not-applicable";
  }
  return "unknown";
}

double beta_prime(std::span<const SimplicialParams> layers) {
  if (layers.empty()) throw ArgumentError("beta_prime needs at least one layer");
  double k = 0.0, v = 0.0;
  const std::size_t order = layers.front().order();
  for (const auto& p : layers) {
    if (p.order() != order) throw DimensionError("beta_prime: layers disagree on the order");
    for (const auto& head : p.heads()) {
      for (const auto& w : head.keys) k = std::max(k, norm_one_inf(w));
      for (const auto& w : head.values) v = std::max(v, norm_one_inf(w));
    }
  }
  const double n = static_cast<double>(order);
  return std::pow(2.0 * k, n + 1.0) * std::pow(2.0 * v, n);
}

double beta_prime(const SimplicialParams& params) { return beta_prime(std::span(&params, 1)); }

double max_value_norm(std::span<const SimplicialParams> layers) {
  double v = 0.0;
  for (const auto& p : layers)
    for (const auto& head : p.heads())
      for (const auto& w : head.values) v = std::max(v, norm_one_inf(w));
  return v;
}

double cubic_slope(std::span<const double> log_res) {
  std::vector<double> xs, ys;
  for (std::size_t t = 0; t + 1 < log_res.size(); ++t) {
    if (std::isfinite(log_res[t]) && std::isfinite(log_res[t + 1])) {
      xs.push_back(log_res[t]);
      ys.push_back(log_res[t + 1]);
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

MaskedDecayReport masked_decay_check(const Matrix& x0, std::span<const SimplicialParams> layers,
                                     const SimplicialMask& mask) {
  auto conn = is_quasi_strongly_connected(mask);
  if (!conn.connected) {
    throw DomainError("mask is not quasi-strongly connected: " + describe_unreachable(mask));
  }
  bool looped = false;
  for (auto c : conn.centers) looped = looped || has_center_self_loop(mask, c);
  if (!looped) throw DomainError("no center of the mask carries a self loop");
  for (const auto& p : layers) {
    if (p.head_count() != 1) throw ArgumentError("masked decay check expects single-head layers");
    if (p.order() != mask.order()) throw DimensionError("layer order does not match the mask");
  }

  MaskedDecayReport out;
  out.radius = radius(mask);
  const double vmax = max_value_norm(layers);
  const double order = static_cast<double>(mask.order());

  std::vector<std::size_t> edge_flat;
  for (const auto& e : mask.edges()) {
    std::size_t f = 0;
    for (auto k : e) f = f * mask.tokens() + k;
    edge_flat.push_back(f);
  }

  auto& tr = out.trajectory;
  out.states.push_back(x0);
  tr.res_norm.push_back(residual_norm(x0));
  tr.x_norm.push_back(norm_one_inf(x0));
  tr.bound_rhs.emplace_back();
  tr.attn_min_on_edges.emplace_back();
  out.eps_hat = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < layers.size(); ++t) {
    const Matrix& x = out.states.back();
    double gate = std::pow(norm_one_inf(x), order - 1.0) * std::pow(vmax, order);
    out.gate_value = std::max(out.gate_value, gate);
    if (gate > 1.0 && !out.gate_violation) out.gate_violation = t;
    auto trace = forward_traced(x, layers[t], &mask, false);
    const auto& attn = trace.attention.front();
    double amin = std::numeric_limits<double>::infinity();
    for (auto f : edge_flat) amin = std::min(amin, attn[f]);
    out.eps_hat = std::min(out.eps_hat, amin);
    out.positive = out.positive && amin > 0.0;
    tr.res_norm.push_back(residual_norm(trace.output));
    tr.x_norm.push_back(norm_one_inf(trace.output));
    tr.bound_rhs.emplace_back();
    tr.attn_min_on_edges.emplace_back(amin);
    out.states.push_back(std::move(trace.output));
  }
  out.gate_ok = !out.gate_violation;
  if (layers.empty()) out.eps_hat = std::numeric_limits<double>::quiet_NaN();

  out.constant = tr.res_norm.front();
  const double r = static_cast<double>(out.radius);
  for (std::size_t t = 0; t < tr.size(); ++t) {
    double bound = out.constant;
    if (t > 0) {
      // r = 0 only for a single token, where the residual is identically zero.
      double rate = r > 0 ? 1.0 - std::pow(out.eps_hat, r) : 0.0;
      bound = out.constant * (r > 0 ? std::pow(rate, static_cast<double>(t) / r) : 0.0);
    }
    out.certified.push_back(bound);
    tr.bound_rhs[t] = bound;
    if (!(tr.res_norm[t] <= bound * (1.0 + kBoundSlack))) out.decay_holds = false;
  }

  if (!out.gate_ok) {
    out.status = CheckStatus::not_applicable;
  } else {
    out.status = out.positive && out.decay_holds ? CheckStatus::holds : CheckStatus::violated;
  }
  return out;
}

}  // namespace simplicial
