#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simplicial/matrix.hpp"

namespace simplicial {

// (target, source_1, ..., source_N)
using Simplex = std::vector<std::size_t>;

// N-uniform directed hypergraph on n tokens. Edges are kept sorted and
// deduplicated; a dense membership bitmap is built when n^(N+1) <= 2^24.
class SimplicialMask {
 public:
  SimplicialMask(std::size_t tokens, std::size_t order, std::vector<Simplex> edges);

  // Every (N+1)-tuple.
  static SimplicialMask full(std::size_t tokens, std::size_t order);

  std::size_t tokens() const noexcept { return tokens_; }
  std::size_t order() const noexcept { return order_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Simplex>& edges() const noexcept { return edges_; }

  bool contains(std::span<const std::size_t> simplex) const;
  // Row-major position in the n^(N+1) cube.
  bool contains_flat(std::size_t flat) const;

  // Targets that head no edge; softmax rejects masks where this is nonempty.
  std::vector<std::size_t> uncovered_targets() const;

  friend bool operator==(const SimplicialMask& a, const SimplicialMask& b) {
    return a.tokens_ == b.tokens_ && a.order_ == b.order_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t tokens_;
  std::size_t order_;
  std::vector<Simplex> edges_;
  std::vector<std::uint8_t> dense_;
};

// Sources restricted to k_m <= k_0.
SimplicialMask causal_mask(std::size_t n, std::size_t order);

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// Hop counts from `source` under the any-source rule: j is one step from S
// when some edge has target j and at least one source in S.
std::vector<std::size_t> hop_distances(const SimplicialMask& mask, std::size_t source);

struct Connectivity {
  bool connected = false;
  std::vector<std::size_t> centers;
};

Connectivity is_quasi_strongly_connected(const SimplicialMask& mask);

// Minimum eccentricity over centers. Throws DomainError without a center.
std::size_t radius(const SimplicialMask& mask);

bool has_center_self_loop(const SimplicialMask& mask, std::size_t c);

// Human readable list of nodes a candidate cannot reach, used in diagnostics.
std::string describe_unreachable(const SimplicialMask& mask);

struct TradeoffDiagnostic {
  std::size_t radius = 0;
  double lambda2 = 0.0;
  double bound = 0.0;
  bool holds = false;
};

// Radius of the undirected clique projection against 96 ln(n) / lambda_2 of
// its normalized Laplacian.
TradeoffDiagnostic tradeoff_diagnostic(const SimplicialMask& mask);

// Second-smallest eigenvalue of D^-1/2 (D - A) D^-1/2 for a symmetric 0/1
// adjacency matrix without self loops.
double normalized_laplacian_lambda2(const Matrix& adjacency);

// Order-1 mask with both directions of every pair plus all self loops.
SimplicialMask undirected_mask(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> pairs);

// Text format: "n N" header, then one "target: s1 s2 ..." line per edge.
void write_mask(std::ostream& out, const SimplicialMask& mask);
SimplicialMask read_mask(std::istream& in);
std::string format_mask(const SimplicialMask& mask);
SimplicialMask parse_mask(const std::string& text);

}  // namespace simplicial
