#include "simplicial/curvature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <tuple>

#include "simplicial/errors.hpp"
#include "simplicial/io.hpp"

namespace simplicial {

SimpleGraph::SimpleGraph(std::size_t nodes, std::vector<Edge> edges) : nodes_(nodes), adjacency_(nodes) {
  for (auto& [u, v] : edges) {
    if (u >= nodes_ || v >= nodes_) {
      throw ArgumentError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") outside [0, " +
                          std::to_string(nodes_) + ")");
    }
    if (u == v) throw ArgumentError("self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw ArgumentError("duplicate edge");
  }
  edges_ = std::move(edges);
  for (auto [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& a : adjacency_) std::sort(a.begin(), a.end());
}

bool SimpleGraph::adjacent(std::size_t u, std::size_t v) const {
  const auto& a = adjacency_.at(u);
  return std::binary_search(a.begin(), a.end(), v);
}

bool SimpleGraph::connected() const {
  if (nodes_ == 0) return true;
  std::vector<bool> seen(nodes_, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (auto v : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        queue.push_back(v);
      }
    }
  }
  return count == nodes_;
}

double SimpleGraph::density() const {
  if (nodes_ < 2) return 0.0;
  const double n = static_cast<double>(nodes_);
  return static_cast<double>(edges_.size()) / (n * (n - 1.0) / 2.0);
}

SimpleGraph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return SimpleGraph(n, std::move(e));
}

SimpleGraph cycle_graph(std::size_t n) {
  if (n < 3) throw ArgumentError("a cycle needs at least 3 nodes");
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return SimpleGraph(n, std::move(e));
}

SimpleGraph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return SimpleGraph(leaves + 1, std::move(e));
}

SimpleGraph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return SimpleGraph(n, std::move(e));
}

SimpleGraph line_graph(const SimpleGraph& g) {
  if (g.edge_count() == 0) throw ArgumentError("line graph of an edgeless graph");
  // Edges incident to each node, as indices into g.edges().
  std::vector<std::vector<std::size_t>> incident(g.nodes());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    incident[g.edges()[i].first].push_back(i);
    incident[g.edges()[i].second].push_back(i);
  }
  std::vector<Edge> e;
  for (const auto& inc : incident)
    for (std::size_t a = 0; a < inc.size(); ++a)
      for (std::size_t b = a + 1; b < inc.size(); ++b) e.emplace_back(inc[a], inc[b]);
  // Two simple-graph edges share at most one endpoint, so no duplicates arise.
  return SimpleGraph(g.edge_count(), std::move(e));
}

std::string to_string(FormanVariant v) {
  return v == FormanVariant::combinatorial ? "combinatorial" : "augmented";
}

FormanVariant parse_forman_variant(const std::string& text) {
  if (text == "combinatorial") return FormanVariant::combinatorial;
  if (text == "augmented") return FormanVariant::augmented;
  throw ArgumentError("unknown Forman variant '" + text + "' (combinatorial | augmented)");
}

std::vector<double> forman_curvature(const SimpleGraph& g, FormanVariant variant) {
  std::vector<double> out;
  out.reserve(g.edge_count());
  for (auto [u, v] : g.edges()) {
    double f = 4.0 - static_cast<double>(g.degree(u)) - static_cast<double>(g.degree(v));
    if (variant == FormanVariant::augmented) {
      const auto& a = g.neighbors(u);
      const auto& b = g.neighbors(v);
      std::size_t triangles = 0;
      std::size_t i = 0, j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
          ++i;
        } else if (b[j] < a[i]) {
          ++j;
        } else {
          ++triangles;
          ++i;
          ++j;
        }
      }
      f += 3.0 * static_cast<double>(triangles);
    }
    out.push_back(f);
  }
  return out;
}

namespace {

std::pair<double, double> mean_min(const std::vector<double>& v) {
  double s = 0.0, m = std::numeric_limits<double>::infinity();
  for (double x : v) {
    s += x;
    m = std::min(m, x);
  }
  return {s / static_cast<double>(v.size()), m};
}

}  // namespace

CurvatureReport curvature_report(const SimpleGraph& g, FormanVariant variant) {
  if (g.edge_count() < 2) throw ArgumentError("curvature report needs at least two edges");
  if (!g.connected()) throw DomainError("curvature report needs a connected graph");
  CurvatureReport r;
  std::tie(r.avg_graph, r.min_graph) = mean_min(forman_curvature(g, variant));
  std::tie(r.avg_line, r.min_line) = mean_min(forman_curvature(line_graph(g), variant));
  r.density = g.density();
  r.avg_increased = r.avg_line > r.avg_graph;
  r.min_increased = r.min_line > r.min_graph;
  return r;
}

SimpleGraph random_tree(std::size_t n, Rng& rng) {
  if (n < 2) throw ArgumentError("random_tree needs at least two nodes");
  if (n == 2) return path_graph(2);
  std::vector<std::size_t> code(n - 2);
  for (auto& c : code) c = rng.below(n);
  std::vector<std::size_t> degree(n, 1);
  for (auto c : code) ++degree[c];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> leaves;
  for (std::size_t v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.push(v);
  std::vector<Edge> e;
  for (auto c : code) {
    auto leaf = leaves.top();
    leaves.pop();
    e.emplace_back(leaf, c);
    if (--degree[c] == 1) leaves.push(c);
  }
  auto a = leaves.top();
  leaves.pop();
  auto b = leaves.top();
  e.emplace_back(a, b);
  return SimpleGraph(n, std::move(e));
}

SimpleGraph random_sparse_graph(std::size_t n, double density, Rng& rng) {
  if (!(density >= 0.0 && density <= 1.0)) throw ArgumentError("density must lie in [0, 1]");
  auto tree = random_tree(n, rng);
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const auto target = static_cast<std::size_t>(std::floor(density * pairs));
  std::vector<Edge> e = tree.edges();
  std::vector<Edge> absent;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (!tree.adjacent(u, v)) absent.emplace_back(u, v);
  // Partial Fisher-Yates draw of the extra edges.
  for (std::size_t i = 0; e.size() < target && i < absent.size(); ++i) {
    std::size_t j = i + rng.below(absent.size() - i);
    std::swap(absent[i], absent[j]);
    e.push_back(absent[i]);
  }
  return SimpleGraph(n, std::move(e));
}

void write_graph(std::ostream& out, const SimpleGraph& g) {
  out << g.nodes() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

SimpleGraph read_graph(std::istream& in) {
  auto parse = [](std::string_view t) {
    std::size_t v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw ParseError("bad integer '" + std::string(t) + "' in graph file");
    }
    return v;
  };
  std::string line;
  bool have_n = false;
  std::size_t n = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto f = split_fields(body, ' ');
    if (!have_n) {
      if (f.size() != 1) throw ParseError("graph header must be the node count");
      n = parse(f[0]);
      have_n = true;
    } else {
      if (f.size() != 2) throw ParseError("edge lines must be 'u v'");
      edges.emplace_back(parse(f[0]), parse(f[1]));
    }
  }
  if (!have_n) throw ParseError("empty graph file");
  try {
    return SimpleGraph(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace simplicial
