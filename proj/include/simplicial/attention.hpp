#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "simplicial/hypergraph.hpp"
#include "simplicial/matrix.hpp"
#include "simplicial/random.hpp"
#include "simplicial/tensor.hpp"

namespace simplicial {

struct HeadWeights {
  std::vector<Matrix> keys;    // N+1 matrices, d x d_h
  std::vector<Matrix> values;  // N matrices, d x d_h

  friend bool operator==(const HeadWeights&, const HeadWeights&) = default;
};

class SimplicialParams {
 public:
  // `output` maps the concatenated heads (H * d_h columns) back to d.
  SimplicialParams(std::size_t order, std::vector<HeadWeights> heads, Matrix output);

  // One head with an identity output projection (requires d_h == d).
  static SimplicialParams single_head(std::vector<Matrix> keys, std::vector<Matrix> values);

  // Weights uniform in [-weight_scale, weight_scale], d_h = d / H, W_O = I.
  static SimplicialParams random(std::size_t order, std::size_t dim, std::size_t heads,
                                 double weight_scale, Rng& rng);

  std::size_t order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t head_count() const noexcept { return heads_.size(); }
  std::size_t head_dim() const noexcept { return head_dim_; }
  const std::vector<HeadWeights>& heads() const noexcept { return heads_; }
  const HeadWeights& head(std::size_t h) const { return heads_.at(h); }
  const Matrix& output() const noexcept { return output_; }

  friend bool operator==(const SimplicialParams&, const SimplicialParams&) = default;

 private:
  std::size_t order_;
  std::size_t dim_ = 0;
  std::size_t head_dim_ = 0;
  std::vector<HeadWeights> heads_;
  Matrix output_;
};

template <class Real>
std::vector<BasicMatrix<Real>> project(const BasicMatrix<Real>& x, const std::vector<Matrix>& weights) {
  std::vector<BasicMatrix<Real>> out;
  out.reserve(weights.size());
  for (const auto& w : weights) out.push_back(matmul(x, w.template cast<Real>()));
  return out;
}

template <class Real>
struct ForwardTrace {
  BasicMatrix<Real> output;
  std::vector<BasicTensor<Real>> attention;  // one tensor per head
};

template <class Real>
ForwardTrace<Real> forward_traced(const BasicMatrix<Real>& x, const SimplicialParams& params,
                                  const SimplicialMask* mask = nullptr, bool skip = false) {
  if (x.rows() == 0 || x.cols() != params.dim()) {
    throw DimensionError("forward: X is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                         ", parameters expect d = " + std::to_string(params.dim()));
  }
  using std::sqrt;
  const Real scale = Real(1) / sqrt(Real(static_cast<double>(params.head_dim())));
  ForwardTrace<Real> trace;
  std::vector<BasicMatrix<Real>> head_out;
  for (const auto& head : params.heads()) {
    auto logits = contract_logits(project(x, head.keys), scale);
    auto attn = softmax_multi_axis(logits, mask);
    head_out.push_back(apply_values(attn, project(x, head.values)));
    trace.attention.push_back(std::move(attn));
  }
  trace.output = matmul(hconcat(head_out), params.output().template cast<Real>());
  if (skip) trace.output = x + trace.output;
  return trace;
}

template <class Real>
BasicMatrix<Real> forward(const BasicMatrix<Real>& x, const SimplicialParams& params,
                          const SimplicialMask* mask = nullptr, bool skip = false) {
  return forward_traced(x, params, mask, skip).output;
}

template <class Real>
struct StackResult {
  BasicMatrix<Real> output;
  std::vector<BasicMatrix<Real>> trajectory;  // X^(0..L) when recorded
};

template <class Real>
StackResult<Real> forward_stack(const BasicMatrix<Real>& x0, std::span<const SimplicialParams> layers,
                                const SimplicialMask* mask = nullptr, bool skip = false,
                                bool record = true) {
  StackResult<Real> out;
  out.output = x0;
  if (record) out.trajectory.push_back(x0);
  for (const auto& layer : layers) {
    out.output = forward(out.output, layer, mask, skip);
    if (record) out.trajectory.push_back(out.output);
  }
  return out;
}

// Order-N logits with a ones pseudo-token appended to every key axis past
// the second. Fixing those axes at the ones token reproduces lower orders.
struct OrderReduction {
  DenseTensor augmented;            // n x n x (n+1) x ... x (n+1)
  std::vector<DenseTensor> slices;  // slices[m-1]: order-m logits read from `augmented`
  std::vector<DenseTensor> direct;  // direct[m-1]: contract_logits of the first m+1 keys

  bool exact() const { return slices == direct; }
};

OrderReduction reduce_order(const SimplicialParams& params, const Matrix& x, std::size_t head = 0);

// One-line JSON header, then each matrix as a text block.
void write_params(std::ostream& out, const SimplicialParams& params);
SimplicialParams read_params(std::istream& in);
std::string format_params(const SimplicialParams& params);
SimplicialParams parse_params(const std::string& text);

}  // namespace simplicial
