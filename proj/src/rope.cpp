#include "simplicial/rope.hpp"

#include <cmath>
#include <string>

#include "simplicial/tensor.hpp"

namespace simplicial {

RopeConfig::RopeConfig(std::size_t order, std::size_t dim, double base, bool scale_by_chunks)
    : order_(order), dim_(dim), base_(base), scale_by_chunks_(scale_by_chunks) {
  if (order_ == 0) throw ArgumentError("rope order must be at least 1");
  if (dim_ < order_ + 1) {
    throw ArgumentError("rope needs d >= N+1 (d = " + std::to_string(dim_) + ", N = " +
                        std::to_string(order_) + ")");
  }
  if (!(base_ > 0.0) || !std::isfinite(base_)) throw ArgumentError("rope base must be positive");
  const std::size_t w = order_ + 1;
  generator_ = Matrix(w, w);
  for (std::size_t i = 0; i + 1 < w; ++i) {
    generator_(i, i + 1) = 1.0;
    generator_(i + 1, i) = -1.0;
  }
  double det = determinant(rotation(1.0));
  if (std::abs(det - 1.0) > 1e-12) {
    throw DomainError("rotation generator does not exponentiate to a special orthogonal matrix");
  }
}

double RopeConfig::frequency(std::size_t chunk) const {
  return std::pow(base_, -static_cast<double>(chunk) / static_cast<double>(chunk_count()));
}

Matrix RopeConfig::rotation(double angle) const { return skew_exponential(generator_, angle); }

Matrix skew_exponential(const Matrix& g, double t) {
  const std::size_t w = g.rows();
  if (g.cols() != w) throw DimensionError("skew_exponential: matrix must be square");
  if (w == 0) return {};
  if (w == 1) return Matrix::identity(1);
  if (w == 2) {
    double th = t * g(0, 1);
    double c = std::cos(th), s = std::sin(th);
    return Matrix{{c, s}, {-s, c}};
  }
  if (w == 3) {
    // Rodrigues: exp(K) = I + sin(th)/th K + (1 - cos th)/th^2 K^2, th = |axis of K|.
    Matrix k = t * g;
    double th = std::sqrt(k(0, 1) * k(0, 1) + k(0, 2) * k(0, 2) + k(1, 2) * k(1, 2));
    Matrix out = Matrix::identity(3);
    if (th == 0.0) return out;
    Matrix k2 = matmul(k, k);
    double a = std::sin(th) / th;
    double b = (1.0 - std::cos(th)) / (th * th);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) out(i, j) += a * k(i, j) + b * k2(i, j);
    return out;
  }
  Matrix a = t * g;
  double norm = norm_one(a);
  int squarings = 0;
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  a = std::ldexp(1.0, -squarings) * a;
  Matrix out = Matrix::identity(w);
  Matrix term = Matrix::identity(w);
  for (int k = 1; k < 40; ++k) {
    term = (1.0 / k) * matmul(term, a);
    out = out + term;
    if (norm_one(term) < 1e-17) break;
  }
  for (int i = 0; i < squarings; ++i) out = matmul(out, out);
  return out;
}

double determinant(const Matrix& m) {
  const std::size_t w = m.rows();
  if (m.cols() != w) throw DimensionError("determinant of a non-square matrix");
  if (w == 0) return 1.0;
  if (w == 1) return m(0, 0);
  if (w == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (w == 3) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  }
  Matrix lu = m;
  double det = 1.0;
  for (std::size_t c = 0; c < w; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < w; ++r)
      if (std::abs(lu(r, c)) > std::abs(lu(pivot, c))) pivot = r;
    if (lu(pivot, c) == 0.0) return 0.0;
    if (pivot != c) {
      for (std::size_t j = 0; j < w; ++j) std::swap(lu(c, j), lu(pivot, j));
      det = -det;
    }
    det *= lu(c, c);
    for (std::size_t r = c + 1; r < w; ++r) {
      double f = lu(r, c) / lu(c, c);
      for (std::size_t j = c; j < w; ++j) lu(r, j) -= f * lu(c, j);
    }
  }
  return det;
}

DenseTensor det_logits(const std::vector<Matrix>& keys, const RopeConfig& config) {
  const std::size_t arity = config.order() + 1;
  if (keys.size() != arity) {
    throw DimensionError("det_logits: expected " + std::to_string(arity) + " key matrices");
  }
  const std::size_t n = keys[0].rows();
  if (n == 0) throw DimensionError("det_logits: empty keys");
  for (const auto& k : keys) {
    if (k.rows() != n || k.cols() != config.dim()) {
      throw DimensionError("det_logits: key matrices must be n x " + std::to_string(config.dim()));
    }
  }
  const std::size_t chunks = config.chunk_count();
  const double scale = config.scale_by_chunks() ? 1.0 / std::sqrt(static_cast<double>(chunks)) : 1.0;
  auto out = DenseTensor::cube(n, arity);
  std::vector<std::size_t> idx(arity, 0);
  Matrix block(arity, arity);
  std::size_t flat = 0;
  do {
    double acc = 0.0;
    for (std::size_t a = 0; a < chunks; ++a) {
      // Column i of the block is chunk a of keys[i] row idx[i].
      for (std::size_t i = 0; i < arity; ++i)
        for (std::size_t r = 0; r < arity; ++r) block(r, i) = keys[i](idx[i], a * arity + r);
      acc += determinant(block);
    }
    out[flat++] = config.scale_by_chunks() ? scale * acc : acc;
  } while (next_index(idx, n));
  return out;
}

namespace {

void rotate_row_chunk(std::span<double> row, std::size_t offset, const Matrix& rot) {
  const std::size_t w = rot.rows();
  std::vector<double> tmp(w, 0.0);
  for (std::size_t r = 0; r < w; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < w; ++c) s += rot(r, c) * row[offset + c];
    tmp[r] = s;
  }
  for (std::size_t r = 0; r < w; ++r) row[offset + r] = tmp[r];
}

}  // namespace

Matrix apply_rotations(const Matrix& k, std::span<const std::int64_t> positions, const RopeConfig& config) {
  if (positions.size() != k.rows()) {
    throw DimensionError("apply_rotations: " + std::to_string(positions.size()) + " positions for " +
                         std::to_string(k.rows()) + " rows");
  }
  if (k.cols() != config.dim()) throw DimensionError("apply_rotations: key width does not match config");
  Matrix out = k;
  const std::size_t w = config.chunk_width();
  for (std::size_t i = 0; i < k.rows(); ++i) {
    if (positions[i] < 0) throw ArgumentError("positions must be non-negative");
    if (positions[i] == 0) continue;
    for (std::size_t a = 0; a < config.chunk_count(); ++a) {
      Matrix rot = config.rotation(static_cast<double>(positions[i]) * config.frequency(a));
      rotate_row_chunk(out.row(i), a * w, rot);
    }
  }
  return out;
}

Matrix rotate_chunks(const Matrix& k, const Matrix& rotation, const RopeConfig& config) {
  const std::size_t w = config.chunk_width();
  if (rotation.rows() != w || rotation.cols() != w) throw DimensionError("rotate_chunks: rotation size");
  if (k.cols() != config.dim()) throw DimensionError("rotate_chunks: key width does not match config");
  Matrix out = k;
  for (std::size_t i = 0; i < k.rows(); ++i)
    for (std::size_t a = 0; a < config.chunk_count(); ++a) rotate_row_chunk(out.row(i), a * w, rotation);
  return out;
}

Matrix rope_forward(const Matrix& x, const SimplicialParams& params, std::span<const std::int64_t> positions,
                    const RopeConfig& config, const SimplicialMask* mask, bool skip,
                    const Matrix* key_rotation) {
  if (x.rows() == 0 || x.cols() != params.dim()) throw DimensionError("rope_forward: X has wrong shape");
  if (config.order() != params.order() || config.dim() != params.head_dim()) {
    throw DimensionError("rope config (N=" + std::to_string(config.order()) + ", d=" +
                         std::to_string(config.dim()) + ") does not match the head size");
  }
  std::vector<Matrix> head_out;
  for (const auto& head : params.heads()) {
    auto keys = project(x, head.keys);
    for (auto& k : keys) {
      k = apply_rotations(k, positions, config);
      if (key_rotation) k = rotate_chunks(k, *key_rotation, config);
    }
    auto attn = softmax_multi_axis(det_logits(keys, config), mask);
    head_out.push_back(apply_values(attn, project(x, head.values)));
  }
  Matrix out = matmul(hconcat(head_out), params.output());
  return skip ? x + out : out;
}

}  // namespace simplicial
