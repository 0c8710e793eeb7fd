#include <doctest.h>

#include <cmath>

#include "simplicial/attention.hpp"
#include "simplicial/errors.hpp"
#include "simplicial/rope.hpp"

using namespace simplicial;

namespace {

std::vector<Matrix> random_keys(Rng& rng, std::size_t count, std::size_t n, std::size_t d) {
  std::vector<Matrix> k;
  for (std::size_t i = 0; i < count; ++i) k.push_back(rng.uniform_matrix(n, d, 1.0));
  return k;
}

}  // namespace

TEST_CASE("rope config") {
  RopeConfig c(2, 7);
  CHECK(c.chunk_width() == 3);
  CHECK(c.chunk_count() == 2);
  const Matrix& g = c.generator();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(g(i, j) + g(j, i) == 0.0);
  CHECK(g(0, 1) == 1.0);
  CHECK(g(1, 0) == -1.0);
  CHECK(c.frequency(0) == 1.0);
  CHECK(c.frequency(1) == doctest::Approx(std::pow(10000.0, -0.5)));
  CHECK_THROWS_AS(RopeConfig(2, 2), ArgumentError);
  CHECK_THROWS_AS(RopeConfig(0, 4), ArgumentError);
}

TEST_CASE("skew exponentials are special orthogonal") {
  for (std::size_t w = 2; w <= 6; ++w) {
    RopeConfig c(w - 1, w);
    for (double t : {0.0, 0.3, -1.7, 12.5}) {
      Matrix r = c.rotation(t);
      CHECK(determinant(r) == doctest::Approx(1.0).epsilon(1e-12));
      Matrix rtr = matmul(transpose(r), r);
      CHECK(max_abs_diff(rtr, Matrix::identity(w)) <= 1e-12);
    }
    CHECK(c.rotation(0.0) == Matrix::identity(w));
    // One-parameter subgroup: R(a) R(b) = R(a + b).
    CHECK(max_abs_diff(matmul(c.rotation(0.4), c.rotation(1.1)), c.rotation(1.5)) <= 1e-12);
  }
}

TEST_CASE("determinant logits: identity and repeated columns") {
  RopeConfig c(1, 2);
  auto l = det_logits({Matrix{{1, 0}}, Matrix{{0, 1}}}, c);
  CHECK(l[0] == 1.0);
  Rng rng(1);
  Matrix k = rng.uniform_matrix(3, 6, 1.0);
  RopeConfig c2(2, 6);
  auto same = det_logits({k, k, k}, c2);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(same.at({i, i, i})) <= 1e-15);
  CHECK_THROWS_AS(det_logits({k, k}, c2), DimensionError);
}

TEST_CASE("swapping two key operands negates the logits with the axes exchanged") {
  Rng rng(2);
  for (std::size_t order = 1; order <= 3; ++order) {
    RopeConfig c(order, 2 * (order + 1) + 1);
    auto keys = random_keys(rng, order + 1, 3, c.dim());
    auto base = det_logits(keys, c);
    const std::size_t a = order >= 2 ? 1 : 0, b = a + 1;
    auto swapped = keys;
    std::swap(swapped[a], swapped[b]);
    auto s = det_logits(swapped, c);
    std::vector<std::size_t> idx(order + 1, 0);
    do {
      auto t = idx;
      std::swap(t[a], t[b]);
      CHECK(std::abs(s.at(std::span<const std::size_t>(t)) + base.at(std::span<const std::size_t>(idx))) <= 1e-14);
    } while (next_index(idx, 3));
  }
}

TEST_CASE("all identical keys give zero logits") {
  Rng rng(3);
  RopeConfig c(2, 6);
  Matrix k = rng.uniform_matrix(1, 6, 1.0);
  auto l = det_logits({k, k, k}, c);
  CHECK(std::abs(l[0]) <= 1e-15);
}

TEST_CASE("rotations preserve chunk norms and zero positions are the identity") {
  Rng rng(4);
  RopeConfig c(2, 9);
  Matrix k = rng.uniform_matrix(4, 9, 1.0);
  std::vector<std::int64_t> zeros(4, 0), pos{0, 3, 17, 250};
  CHECK(apply_rotations(k, zeros, c) == k);
  Matrix r = apply_rotations(k, pos, c);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t a = 0; a < 3; ++a) {
      double n0 = 0, n1 = 0;
      for (std::size_t j = 0; j < 3; ++j) {
        n0 += k(i, 3 * a + j) * k(i, 3 * a + j);
        n1 += r(i, 3 * a + j) * r(i, 3 * a + j);
      }
      CHECK(std::sqrt(n1) == doctest::Approx(std::sqrt(n0)).epsilon(1e-13));
    }
  std::vector<std::int64_t> neg{0, -1, 0, 0};
  CHECK_THROWS_AS(apply_rotations(k, neg, c), ArgumentError);
  CHECK_THROWS_AS(apply_rotations(k, std::vector<std::int64_t>(3, 0), c), DimensionError);
}

TEST_CASE("rotation and shift invariance of determinant logits") {
  Rng rng(5);
  for (std::size_t order = 1; order <= 2; ++order) {
    for (std::size_t d : {4, 6, 9}) {
      RopeConfig c(order, d);
      auto keys = random_keys(rng, order + 1, 4, d);
      auto base = det_logits(keys, c);
      Matrix rot = c.rotation(rng.uniform(-3, 3));
      std::vector<Matrix> rotated, at_p, at_shift;
      std::vector<std::int64_t> p(4), q(4);
      for (std::size_t i = 0; i < 4; ++i) {
        p[i] = static_cast<std::int64_t>(rng.below(100));
        q[i] = p[i] + 37;
      }
      for (const auto& k : keys) {
        rotated.push_back(rotate_chunks(k, rot, c));
        at_p.push_back(apply_rotations(k, p, c));
        at_shift.push_back(apply_rotations(k, q, c));
      }
      CHECK(max_abs_diff(base, det_logits(rotated, c)) <= 1e-10);
      CHECK(max_abs_diff(det_logits(at_p, c), det_logits(at_shift, c)) <= 1e-10);
    }
  }
}

TEST_CASE("rope forward with zero positions equals the unrotated determinant path") {
  Rng rng(6);
  auto p = SimplicialParams::random(2, 6, 1, 0.5, rng);
  RopeConfig c(2, 6);
  Matrix x = rng.uniform_matrix(4, 6, 1.0);
  std::vector<std::int64_t> zeros(4, 0);
  auto got = rope_forward(x, p, zeros, c);
  auto keys = project(x, p.head(0).keys);
  auto manual = apply_values(softmax_multi_axis(det_logits(keys, c)), project(x, p.head(0).values));
  CHECK(got == manual);

  // A common rotation of all projected keys leaves the output unchanged.
  std::vector<std::int64_t> pos{1, 5, 2, 9};
  Matrix rot = c.rotation(0.8);
  CHECK(max_abs_diff(rope_forward(x, p, pos, c, nullptr, false, &rot), rope_forward(x, p, pos, c)) <= 1e-10);
  CHECK_THROWS_AS(rope_forward(x, p, pos, RopeConfig(2, 5)), DimensionError);
}
