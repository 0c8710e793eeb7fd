#include "simplicial/routing.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "simplicial/io.hpp"

namespace simplicial {

std::size_t PairMask::row_count(std::size_t i) const {
  return static_cast<std::size_t>(
      std::count(bits_.begin() + static_cast<std::ptrdiff_t>(i * n_),
                 bits_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_), std::uint8_t{1}));
}

std::size_t PairMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

PairMask PairMask::identity(std::size_t n) {
  PairMask m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

PairMask PairMask::all(std::size_t n) {
  PairMask m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.set(i, j);
  return m;
}

std::vector<std::size_t> top_k_indices(std::span<const double> scores, std::size_t k) {
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < scores.size(); ++j)
    if (scores[j] != kExcluded) order.push_back(j);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  if (order.size() > k) order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

Matrix expert_choice_step(const Matrix& x, std::span<const double> omega, std::size_t k,
                          const std::function<Matrix(const Matrix&)>& layer) {
  if (omega.size() != x.cols()) throw DimensionError("expert_choice_step: omega length must equal d");
  if (k > x.rows()) throw ArgumentError("expert_choice_step: k exceeds the token count");
  if (k == 0) return x;
  std::vector<double> s(x.rows(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) s[i] += x(i, j) * omega[j];
  Matrix update = layer(x);
  if (update.rows() != x.rows() || update.cols() != x.cols()) {
    throw DimensionError("expert_choice_step: layer output shape differs from X");
  }
  Matrix out = x;
  for (auto i : top_k_indices(s, k)) {
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) + s[i] * update(i, j);
  }
  return out;
}

Matrix dsa_scores(const Matrix& q, const Matrix& k, std::span<const double> w, const SimplicialMask& causal) {
  const std::size_t n = q.rows();
  if (k.rows() != n || k.cols() != q.cols()) throw DimensionError("dsa_scores: Q and K shapes differ");
  if (w.size() != n) throw DimensionError("dsa_scores: weight vector length must equal n");
  if (causal.order() != 1 || causal.tokens() != n) {
    throw DimensionError("dsa_scores: expects an order-1 mask over the same tokens");
  }
  Matrix s(n, n, kExcluded);
  for (const auto& e : causal.edges()) {
    const std::size_t i = e[0], j = e[1];
    double dot = 0.0;
    for (std::size_t a = 0; a < q.cols(); ++a) dot += q(i, a) * k(j, a);
    s(i, j) = w[i] * std::max(0.0, dot);
  }
  return s;
}

PairMask pairwise_topk(const Matrix& scores, std::size_t k) {
  if (scores.rows() != scores.cols()) throw DimensionError("pairwise_topk: scores must be square");
  if (k == 0) throw ArgumentError("pairwise_topk: k must be at least 1");
  PairMask out(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i)
    for (auto j : top_k_indices(scores.row(i), k)) out.set(i, j);
  return out;
}

SimplicialMask path_sparse_mask(const PairMask& pairs, std::size_t order) {
  const std::size_t n = pairs.tokens();
  if (order == 0) throw ArgumentError("path_sparse_mask: order must be at least 1");
  std::vector<std::vector<std::size_t>> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (pairs(i, j)) next[i].push_back(j);
    if (next[i].empty()) {
      throw DomainError("token " + std::to_string(i) + " selects no pairs; its query would be orphaned");
    }
  }
  std::vector<Simplex> edges;
  Simplex chain(order + 1);
  // Depth-first walk over chains of selected pairs.
  auto walk = [&](auto&& self, std::size_t depth) -> void {
    if (depth == order + 1) {
      edges.push_back(chain);
      return;
    }
    for (auto j : next[chain[depth - 1]]) {
      chain[depth] = j;
      self(self, depth + 1);
    }
  };
  for (std::size_t k0 = 0; k0 < n; ++k0) {
    chain[0] = k0;
    walk(walk, 1);
  }
  return SimplicialMask(n, order, std::move(edges));
}

RouterState build_router_state(const Matrix& x, const Matrix& q, const Matrix& keys, std::span<const double> w,
                               std::span<const double> omega, const SimplicialMask& causal, std::size_t k) {
  if (omega.size() != x.cols()) throw DimensionError("build_router_state: omega length must equal d");
  RouterState st;
  st.scores = dsa_scores(q, keys, w, causal);
  st.pair_mask = pairwise_topk(st.scores, k);
  st.k = k;
  st.weights.assign(w.begin(), w.end());
  st.token_scores.assign(x.rows(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) st.token_scores[i] += x(i, j) * omega[j];
  return st;
}

void write_scores_csv(std::ostream& out, const Matrix& scores) {
  out << "# schema=1\n";
  out << "row";
  for (std::size_t j = 0; j < scores.cols(); ++j) out << ",k" << j;
  out << '\n';
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    out << i;
    for (std::size_t j = 0; j < scores.cols(); ++j) out << ',' << format_double(scores(i, j));
    out << '\n';
  }
}

}  // namespace simplicial
