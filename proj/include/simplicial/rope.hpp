#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "simplicial/attention.hpp"
#include "simplicial/hypergraph.hpp"
#include "simplicial/matrix.hpp"

namespace simplicial {

// Chunk layout and rotation family for determinant logits. Each chunk has
// width N+1; trailing dimensions that do not fill a chunk are ignored.
class RopeConfig {
 public:
  RopeConfig(std::size_t order, std::size_t dim, double base = 10000.0, bool scale_by_chunks = false);

  std::size_t order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t chunk_width() const noexcept { return order_ + 1; }
  std::size_t chunk_count() const noexcept { return dim_ / (order_ + 1); }
  double base() const noexcept { return base_; }
  // Multiply det logits by 1/sqrt(chunk_count).
  bool scale_by_chunks() const noexcept { return scale_by_chunks_; }

  // Skew-symmetric: G(i, i+1) = 1, G(i+1, i) = -1.
  const Matrix& generator() const noexcept { return generator_; }

  // base^(-a / chunk_count) for zero-based chunk a.
  double frequency(std::size_t chunk) const;

  // exp(angle * G), special orthogonal.
  Matrix rotation(double angle) const;

 private:
  std::size_t order_;
  std::size_t dim_;
  double base_;
  bool scale_by_chunks_;
  Matrix generator_;
};

// exp(t * g) for skew-symmetric g: closed forms for sizes 2 and 3, scaled
// and squared Taylor series otherwise.
Matrix skew_exponential(const Matrix& g, double t);

// Closed forms up to 3x3, partial-pivot LU beyond.
double determinant(const Matrix& m);

// Entry (m_0..m_N) = sum over chunks of det[chunk of keys[0] row m_0, ..., chunk of keys[N] row m_N].
DenseTensor det_logits(const std::vector<Matrix>& keys, const RopeConfig& config);

// Left-multiplies chunk a of row i by exp(p_i * w_a * G).
Matrix apply_rotations(const Matrix& k, std::span<const std::int64_t> positions, const RopeConfig& config);

// Left-multiplies every chunk of every row by `rotation`.
Matrix rotate_chunks(const Matrix& k, const Matrix& rotation, const RopeConfig& config);

// Forward pass with determinant logits on rotated projected keys. Values are
// not rotated. `key_rotation`, when given, is applied to every chunk of
// every projected key after the positional rotation.
Matrix rope_forward(const Matrix& x, const SimplicialParams& params, std::span<const std::int64_t> positions,
                    const RopeConfig& config, const SimplicialMask* mask = nullptr, bool skip = false,
                    const Matrix* key_rotation = nullptr);

}  // namespace simplicial
