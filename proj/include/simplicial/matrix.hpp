#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simplicial/errors.hpp"

namespace simplicial {

// Row-major dense matrix. The scalar is a template parameter so the same
// kernels run in double and in extended precision.
template <class Real>
class BasicMatrix {
 public:
  using value_type = Real;

  BasicMatrix() = default;

  BasicMatrix(std::size_t rows, std::size_t cols, const Real& fill = Real(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  BasicMatrix(std::size_t rows, std::size_t cols, std::vector<Real> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("matrix data length " + std::to_string(data_.size()) +
                           " does not match " + std::to_string(rows_) + "x" +
                           std::to_string(cols_));
    }
  }

  BasicMatrix(std::initializer_list<std::initializer_list<Real>> rows)
      : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Real(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Real& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Real& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Real> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Real> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<Real> values() noexcept { return data_; }
  std::span<const Real> values() const noexcept { return data_; }

  template <class Other>
  BasicMatrix<Other> cast() const {
    std::vector<Other> out;
    out.reserve(data_.size());
    for (const auto& v : data_) out.push_back(static_cast<Other>(v));
    return BasicMatrix<Other>(rows_, cols_, std::move(out));
  }

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

using Matrix = BasicMatrix<double>;

inline std::size_t int_pow(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) out *= base;
  return out;
}

// Odometer increment over a hypercube of side `extent`, last axis fastest.
// Returns false once the index wraps back to all zeros.
inline bool next_index(std::span<std::size_t> index, std::size_t extent) {
  for (std::size_t axis = index.size(); axis-- > 0;) {
    if (++index[axis] < extent) return true;
    index[axis] = 0;
  }
  return false;
}

// Row-major tensor with arbitrary rank. Extents are positive.
template <class Real>
class BasicTensor {
 public:
  using value_type = Real;

  BasicTensor() = default;

  explicit BasicTensor(std::vector<std::size_t> shape, const Real& fill = Real(0))
      : shape_(std::move(shape)) {
    data_.assign(checked_volume(shape_), fill);
  }

  BasicTensor(std::vector<std::size_t> shape, std::vector<Real> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != checked_volume(shape_)) {
      throw DimensionError("tensor data length does not match its shape");
    }
  }

  // Tensor of shape (extent, extent, ..., extent) with `rank` axes.
  static BasicTensor cube(std::size_t extent, std::size_t rank, const Real& fill = Real(0)) {
    return BasicTensor(std::vector<std::size_t>(rank, extent), fill);
  }

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }

  bool is_cube() const noexcept {
    return !shape_.empty() &&
           std::all_of(shape_.begin(), shape_.end(), [&](std::size_t e) { return e == shape_[0]; });
  }

  Real& operator[](std::size_t flat) { return data_[flat]; }
  const Real& operator[](std::size_t flat) const { return data_[flat]; }

  std::size_t flat_index(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size()) throw DimensionError("tensor index has wrong rank");
    std::size_t flat = 0;
    for (std::size_t axis = 0; axis < shape_.size(); ++axis) {
      if (index[axis] >= shape_[axis]) throw ArgumentError("tensor index out of range");
      flat = flat * shape_[axis] + index[axis];
    }
    return flat;
  }

  Real& at(std::span<const std::size_t> index) { return data_[flat_index(index)]; }
  const Real& at(std::span<const std::size_t> index) const { return data_[flat_index(index)]; }
  Real& at(std::initializer_list<std::size_t> index) {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  const Real& at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  std::span<Real> values() noexcept { return data_; }
  std::span<const Real> values() const noexcept { return data_; }

  friend bool operator==(const BasicTensor&, const BasicTensor&) = default;

 private:
  static std::size_t checked_volume(const std::vector<std::size_t>& shape) {
    std::size_t volume = 1;
    for (auto e : shape) {
      if (e == 0) throw ArgumentError("tensor extents must be positive");
      volume *= e;
    }
    return volume;
  }

  std::vector<std::size_t> shape_;
  std::vector<Real> data_;
};

using DenseTensor = BasicTensor<double>;

template <class Real>
BasicMatrix<Real> matmul(const BasicMatrix<Real>& a, const BasicMatrix<Real>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  BasicMatrix<Real> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Real& aik = a(i, k);
      auto src = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += aik * src[j];
    }
  }
  return out;
}

template <class Real>
BasicMatrix<Real> transpose(const BasicMatrix<Real>& a) {
  BasicMatrix<Real> out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

template <class Real>
BasicMatrix<Real> operator+(const BasicMatrix<Real>& a, const BasicMatrix<Real>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix sum shape mismatch");
  BasicMatrix<Real> out = a;
  auto dst = out.values();
  auto src = b.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

template <class Real>
BasicMatrix<Real> operator-(const BasicMatrix<Real>& a, const BasicMatrix<Real>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix difference shape mismatch");
  }
  BasicMatrix<Real> out = a;
  auto dst = out.values();
  auto src = b.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= src[i];
  return out;
}

template <class Real>
BasicMatrix<Real> operator*(const Real& s, const BasicMatrix<Real>& a) {
  BasicMatrix<Real> out = a;
  for (auto& v : out.values()) v *= s;
  return out;
}

// Side-by-side concatenation of equally tall blocks.
template <class Real>
BasicMatrix<Real> hconcat(const std::vector<BasicMatrix<Real>>& blocks) {
  if (blocks.empty()) return {};
  std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw DimensionError("hconcat: row counts differ");
    cols += b.cols();
  }
  BasicMatrix<Real> out(rows, cols);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, offset + j) = b(i, j);
    offset += b.cols();
  }
  return out;
}

template <class Real>
Real max_abs_diff(std::span<const Real> a, std::span<const Real> b) {
  if (a.size() != b.size()) throw DimensionError("max_abs_diff: length mismatch");
  using std::abs;
  Real out(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Real d = abs(a[i] - b[i]);
    if (d > out) out = d;
  }
  return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  return max_abs_diff<double>(a.values(), b.values());
}

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape()) throw DimensionError("max_abs_diff: shape mismatch");
  return max_abs_diff<double>(a.values(), b.values());
}

inline bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace simplicial
