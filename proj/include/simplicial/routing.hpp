#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "simplicial/hypergraph.hpp"
#include "simplicial/matrix.hpp"

namespace simplicial {

// Marks pairs that are never selectable.
inline constexpr double kExcluded = -std::numeric_limits<double>::infinity();

// Square 0/1 matrix of selected (query, key) pairs.
class PairMask {
 public:
  explicit PairMask(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t tokens() const noexcept { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool on = true) { bits_[i * n_ + j] = on ? 1 : 0; }
  std::size_t row_count(std::size_t i) const;
  std::size_t count() const;

  static PairMask identity(std::size_t n);
  static PairMask all(std::size_t n);

  friend bool operator==(const PairMask&, const PairMask&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> bits_;
};

// Indices of the k largest scores, ties to the lower index, returned in
// ascending index order. Entries equal to kExcluded are never chosen.
std::vector<std::size_t> top_k_indices(std::span<const double> scores, std::size_t k);

// Rows whose score X_i . omega is in the top k receive X_i + s_i * layer(X)_i;
// all other rows are copied unchanged.
Matrix expert_choice_step(const Matrix& x, std::span<const double> omega, std::size_t k,
                          const std::function<Matrix(const Matrix&)>& layer);

// s_ij = w_i * max(0, <Q_i, K_j>) on edges (i; j) of `causal`, kExcluded elsewhere.
Matrix dsa_scores(const Matrix& q, const Matrix& k, std::span<const double> w, const SimplicialMask& causal);

PairMask pairwise_topk(const Matrix& scores, std::size_t k);

// Edge (k_0; k_1..k_N) is kept iff pairs(k_i, k_{i+1}) for i = 0..N-1.
SimplicialMask path_sparse_mask(const PairMask& pairs, std::size_t order);

struct RouterState {
  Matrix scores;
  PairMask pair_mask{0};
  std::size_t k = 0;
  std::vector<double> token_scores;
  std::vector<double> weights;
};

// Scores, per-row top-k pairs and expert-choice token scores X_i . omega.
RouterState build_router_state(const Matrix& x, const Matrix& q, const Matrix& keys, std::span<const double> w,
                               std::span<const double> omega, const SimplicialMask& causal, std::size_t k);

// Score matrix as CSV with a schema comment; excluded entries written as -inf.
void write_scores_csv(std::ostream& out, const Matrix& scores);

}  // namespace simplicial
