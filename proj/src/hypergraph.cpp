#include "simplicial/hypergraph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

#include "simplicial/io.hpp"

namespace simplicial {

namespace {

constexpr std::size_t kDenseLimit = std::size_t{1} << 24;

// n^(N+1) if it does not exceed `limit`, else limit + 1.
std::size_t capped_volume(std::size_t n, std::size_t arity, std::size_t limit) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (n != 0 && v > limit / n) return limit + 1;
    v *= n;
  }
  return v;
}

std::size_t flatten(const Simplex& s, std::size_t n) {
  std::size_t flat = 0;
  for (auto k : s) flat = flat * n + k;
  return flat;
}

// Source -> target adjacency of the projected digraph.
std::vector<std::vector<std::size_t>> successor_lists(const SimplicialMask& mask) {
  std::vector<std::vector<std::size_t>> succ(mask.tokens());
  for (const auto& e : mask.edges()) {
    for (std::size_t m = 1; m < e.size(); ++m) succ[e[m]].push_back(e[0]);
  }
  for (auto& s : succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return succ;
}

std::vector<std::size_t> bfs(const std::vector<std::vector<std::size_t>>& adj, std::size_t source) {
  std::vector<std::size_t> dist(adj.size(), kUnreachable);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (auto v : adj[u]) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::size_t eccentricity(const std::vector<std::size_t>& dist) {
  std::size_t ecc = 0;
  for (auto d : dist) {
    if (d == kUnreachable) return kUnreachable;
    ecc = std::max(ecc, d);
  }
  return ecc;
}

}  // namespace

SimplicialMask::SimplicialMask(std::size_t tokens, std::size_t order, std::vector<Simplex> edges)
    : tokens_(tokens), order_(order), edges_(std::move(edges)) {
  if (tokens_ == 0) throw ArgumentError("mask needs at least one token");
  if (order_ == 0) throw ArgumentError("mask order must be at least 1");
  for (const auto& e : edges_) {
    if (e.size() != order_ + 1) {
      throw DimensionError("simplex has " + std::to_string(e.size()) + " entries, expected " +
                           std::to_string(order_ + 1));
    }
    for (auto k : e) {
      if (k >= tokens_) {
        throw ArgumentError("simplex index " + std::to_string(k) + " outside [0, " +
                            std::to_string(tokens_) + ")");
      }
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  std::size_t volume = capped_volume(tokens_, order_ + 1, kDenseLimit);
  if (volume <= kDenseLimit) {
    dense_.assign(volume, 0);
    for (const auto& e : edges_) dense_[flatten(e, tokens_)] = 1;
  }
}

SimplicialMask SimplicialMask::full(std::size_t tokens, std::size_t order) {
  if (tokens == 0 || order == 0) throw ArgumentError("full mask needs n >= 1 and order >= 1");
  std::vector<Simplex> edges;
  Simplex s(order + 1, 0);
  do {
    edges.push_back(s);
  } while (next_index(s, tokens));
  return SimplicialMask(tokens, order, std::move(edges));
}

bool SimplicialMask::contains(std::span<const std::size_t> simplex) const {
  if (simplex.size() != order_ + 1) return false;
  return std::binary_search(edges_.begin(), edges_.end(), simplex,
                            [](const auto& a, const auto& b) {
                              return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                  b.end());
                            });
}

bool SimplicialMask::contains_flat(std::size_t flat) const {
  if (!dense_.empty()) return flat < dense_.size() && dense_[flat] != 0;
  Simplex s(order_ + 1);
  for (std::size_t axis = order_ + 1; axis-- > 0;) {
    s[axis] = flat % tokens_;
    flat /= tokens_;
  }
  if (flat != 0) return false;
  return contains(s);
}

std::vector<std::size_t> SimplicialMask::uncovered_targets() const {
  std::vector<bool> covered(tokens_, false);
  for (const auto& e : edges_) covered[e[0]] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens_; ++i)
    if (!covered[i]) out.push_back(i);
  return out;
}

SimplicialMask causal_mask(std::size_t n, std::size_t order) {
  if (n == 0 || order == 0) throw ArgumentError("causal_mask needs n >= 1 and order >= 1");
  std::vector<Simplex> edges;
  Simplex s(order + 1, 0);
  for (std::size_t target = 0; target < n; ++target) {
    // Sources range over [0, target].
    std::vector<std::size_t> src(order, 0);
    do {
      s[0] = target;
      std::copy(src.begin(), src.end(), s.begin() + 1);
      edges.push_back(s);
    } while (next_index(src, target + 1));
  }
  return SimplicialMask(n, order, std::move(edges));
}

std::vector<std::size_t> hop_distances(const SimplicialMask& mask, std::size_t source) {
  if (source >= mask.tokens()) throw ArgumentError("hop_distances: source out of range");
  return bfs(successor_lists(mask), source);
}

Connectivity is_quasi_strongly_connected(const SimplicialMask& mask) {
  auto succ = successor_lists(mask);
  Connectivity out;
  for (std::size_t c = 0; c < mask.tokens(); ++c) {
    if (eccentricity(bfs(succ, c)) != kUnreachable) out.centers.push_back(c);
  }
  out.connected = !out.centers.empty();
  return out;
}

std::size_t radius(const SimplicialMask& mask) {
  auto succ = successor_lists(mask);
  std::size_t best = kUnreachable;
  for (std::size_t c = 0; c < mask.tokens(); ++c) best = std::min(best, eccentricity(bfs(succ, c)));
  if (best == kUnreachable) {
    throw DomainError("mask is not quasi-strongly connected: " + describe_unreachable(mask));
  }
  return best;
}

bool has_center_self_loop(const SimplicialMask& mask, std::size_t c) {
  if (c >= mask.tokens()) throw ArgumentError("has_center_self_loop: node out of range");
  for (const auto& e : mask.edges()) {
    if (e[0] == c && std::find(e.begin() + 1, e.end(), c) != e.end()) return true;
  }
  return false;
}

std::string describe_unreachable(const SimplicialMask& mask) {
  // Report from the node that reaches the most others.
  auto succ = successor_lists(mask);
  std::size_t best_node = 0;
  std::vector<std::size_t> best_missing;
  bool first = true;
  for (std::size_t c = 0; c < mask.tokens(); ++c) {
    auto dist = bfs(succ, c);
    std::vector<std::size_t> missing;
    for (std::size_t v = 0; v < dist.size(); ++v)
      if (dist[v] == kUnreachable) missing.push_back(v);
    if (first || missing.size() < best_missing.size()) {
      best_node = c;
      best_missing = std::move(missing);
      first = false;
    }
  }
  if (best_missing.empty()) return "every node is reachable from node " + std::to_string(best_node);
  std::string out = "no node reaches all others; best candidate " + std::to_string(best_node) +
                    " cannot reach nodes";
  for (auto v : best_missing) out += " " + std::to_string(v);
  return out;
}

double normalized_laplacian_lambda2(const Matrix& adjacency) {
  const std::size_t n = adjacency.rows();
  if (n != adjacency.cols()) throw DimensionError("adjacency must be square");
  if (n < 2) throw DomainError("spectral gap needs at least two nodes");
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) deg[i] += adjacency(i, j);
  for (std::size_t i = 0; i < n; ++i) {
    if (deg[i] == 0.0) throw DomainError("graph has an isolated node " + std::to_string(i));
  }
  Eigen::MatrixXd lap(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double a = adjacency(i, j) / std::sqrt(deg[i] * deg[j]);
      lap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (i == j ? 1.0 : 0.0) - a;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw DomainError("eigen-solver failed");
  return solver.eigenvalues()(1);
}

TradeoffDiagnostic tradeoff_diagnostic(const SimplicialMask& mask) {
  const std::size_t n = mask.tokens();
  if (n < 2) throw DomainError("trade-off diagnostic needs at least two nodes");
  Matrix adj(n, n);
  for (const auto& e : mask.edges()) {
    for (std::size_t a = 0; a < e.size(); ++a) {
      for (std::size_t b = a + 1; b < e.size(); ++b) {
        if (e[a] != e[b]) adj(e[a], e[b]) = adj(e[b], e[a]) = 1.0;
      }
    }
  }
  std::vector<std::vector<std::size_t>> nbrs(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (adj(i, j) != 0.0) nbrs[i].push_back(j);

  std::size_t rad = kUnreachable;
  for (std::size_t c = 0; c < n; ++c) rad = std::min(rad, eccentricity(bfs(nbrs, c)));
  if (rad == kUnreachable) throw DomainError("undirected projection of the mask is disconnected");

  TradeoffDiagnostic out;
  out.radius = rad;
  out.lambda2 = normalized_laplacian_lambda2(adj);
  out.bound = 96.0 * std::log(static_cast<double>(n)) / out.lambda2;
  out.holds = static_cast<double>(out.radius) <= out.bound;
  return out;
}

SimplicialMask undirected_mask(std::size_t n,
                               std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<Simplex> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({i, i});
  for (auto [u, v] : pairs) {
    edges.push_back({u, v});
    edges.push_back({v, u});
  }
  return SimplicialMask(n, 1, std::move(edges));
}

void write_mask(std::ostream& out, const SimplicialMask& mask) {
  out << mask.tokens() << ' ' << mask.order() << '\n';
  for (const auto& e : mask.edges()) {
    out << e[0] << ':';
    for (std::size_t m = 1; m < e.size(); ++m) out << ' ' << e[m];
    out << '\n';
  }
}

namespace {

std::size_t parse_index(std::string_view text) {
  std::size_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("bad node index '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

SimplicialMask read_mask(std::istream& in) {
  std::string line;
  std::size_t n = 0, order = 0;
  bool have_header = false;
  std::vector<Simplex> edges;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!have_header) {
      auto f = split_fields(body, ' ');
      if (f.size() != 2) throw ParseError("mask header must be 'n N'");
      n = parse_index(f[0]);
      order = parse_index(f[1]);
      have_header = true;
      continue;
    }
    auto colon = body.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'target: sources'");
    }
    Simplex s{parse_index(trim(body.substr(0, colon)))};
    for (auto f : split_fields(body.substr(colon + 1), ' ')) s.push_back(parse_index(f));
    if (s.size() != order + 1) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(order) +
                       " sources");
    }
    edges.push_back(std::move(s));
  }
  if (!have_header) throw ParseError("empty mask file");
  try {
    return SimplicialMask(n, order, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string format_mask(const SimplicialMask& mask) {
  std::ostringstream out;
  write_mask(out, mask);
  return out.str();
}

SimplicialMask parse_mask(const std::string& text) {
  std::istringstream in(text);
  return read_mask(in);
}

}  // namespace simplicial
