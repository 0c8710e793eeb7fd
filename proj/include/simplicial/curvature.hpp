#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "simplicial/random.hpp"

namespace simplicial {

using Edge = std::pair<std::size_t, std::size_t>;

// Undirected graph without loops or multi-edges; edges stored as sorted
// (low, high) pairs.
class SimpleGraph {
 public:
  SimpleGraph(std::size_t nodes, std::vector<Edge> edges);

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }
  bool adjacent(std::size_t u, std::size_t v) const;
  bool connected() const;
  // |E| / (n (n - 1) / 2)
  double density() const;

  friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

SimpleGraph path_graph(std::size_t n);
SimpleGraph cycle_graph(std::size_t n);
SimpleGraph star_graph(std::size_t leaves);
SimpleGraph complete_graph(std::size_t n);

// Line-graph node i is edge i of `g` in its sorted order.
SimpleGraph line_graph(const SimpleGraph& g);

enum class FormanVariant {
  combinatorial,  // 4 - deg u - deg v
  augmented,      // plus 3 per triangle containing the edge
};

std::string to_string(FormanVariant v);
FormanVariant parse_forman_variant(const std::string& text);

// One value per edge, in the order of g.edges().
std::vector<double> forman_curvature(const SimpleGraph& g, FormanVariant variant = FormanVariant::combinatorial);

struct CurvatureReport {
  double avg_graph = 0.0;
  double min_graph = 0.0;
  double avg_line = 0.0;
  double min_line = 0.0;
  double density = 0.0;
  bool avg_increased = false;  // strict
  bool min_increased = false;  // strict
};

CurvatureReport curvature_report(const SimpleGraph& g, FormanVariant variant = FormanVariant::augmented);

// Uniform labelled tree on n nodes from a random Pruefer sequence.
SimpleGraph random_tree(std::size_t n, Rng& rng);

// Random spanning tree plus extra uniformly chosen edges up to `density`.
SimpleGraph random_sparse_graph(std::size_t n, double density, Rng& rng);

// "n" header, then one "u v" line per edge.
void write_graph(std::ostream& out, const SimpleGraph& g);
SimpleGraph read_graph(std::istream& in);

}  // namespace simplicial
