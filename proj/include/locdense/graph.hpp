#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "locdense/error.hpp"

namespace locdense {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Ordered list of distinct vertices of some host graph.
using VertexSet = std::vector<Vertex>;

/// Finite map from source vertices to target vertices.
using PartialMap = std::map<Vertex, Vertex>;

/// Finite simple undirected graph on vertices 0..n-1. Immutable once built.
class Graph {
public:
  Graph() = default;

  /// Edgeless graph on n vertices.
  explicit Graph(int n) : n_(checked_count(n)), adjacency_(static_cast<std::size_t>(n) * n, 0), neighbors_(n) {}

  /// Throws InputError on self-loops, duplicate edges or out-of-range endpoints.
  static Graph from_edges(int n, std::span<const Edge> edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n)
        throw InputError("edge {" + std::to_string(u) + "," + std::to_string(v) +
                         "} has an endpoint outside 0.." + std::to_string(n - 1));
      if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
      if (g.adjacent(u, v))
        throw InputError("duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
      g.link(u, v);
    }
    g.finish();
    return g;
  }

  static Graph from_edges(int n, std::initializer_list<Edge> edges) {
    return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()));
  }

  /// Like from_edges but silently ignores repeated edges.
  static Graph from_edge_set(int n, std::span<const Edge> edges) {
    std::vector<Edge> unique;
    for (auto [u, v] : edges) unique.emplace_back(std::min(u, v), std::max(u, v));
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    return from_edges(n, unique);
  }

  int vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  bool adjacent(Vertex u, Vertex v) const noexcept {
    return adjacency_[static_cast<std::size_t>(u) * n_ + v] != 0;
  }

  std::span<const Vertex> neighbors(Vertex v) const noexcept { return neighbors_[v]; }
  int degree(Vertex v) const noexcept { return static_cast<int>(neighbors_[v].size()); }

  /// Edges as (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v : neighbors_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool is_complete() const noexcept {
    return edge_count_ == static_cast<std::size_t>(n_) * (n_ - 1) / 2;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.adjacency_ == b.adjacency_;
  }

private:
  static int checked_count(int n) {
    if (n < 0) throw InputError("negative vertex count");
    return n;
  }

  void link(Vertex u, Vertex v) {
    adjacency_[static_cast<std::size_t>(u) * n_ + v] = 1;
    adjacency_[static_cast<std::size_t>(v) * n_ + u] = 1;
    neighbors_[u].push_back(v);
    neighbors_[v].push_back(u);
    ++edge_count_;
  }

  void finish() {
    for (auto& list : neighbors_) std::sort(list.begin(), list.end());
  }

  int n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<char> adjacency_;
  std::vector<std::vector<Vertex>> neighbors_;
};

/// Throws InputError unless every index is a vertex of `g` and no index repeats.
inline void check_vertex_set(const Graph& g, std::span<const Vertex> set) {
  std::vector<char> seen(g.vertex_count(), 0);
  for (Vertex v : set) {
    if (v < 0 || v >= g.vertex_count())
      throw InputError("vertex " + std::to_string(v) + " is not in a graph on " +
                       std::to_string(g.vertex_count()) + " vertices");
    if (seen[v]) throw InputError("vertex " + std::to_string(v) + " repeated in vertex set");
    seen[v] = 1;
  }
}

/// Subgraph induced on `set`; vertex i of the result is set[i].
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> set) {
  check_vertex_set(g, set);
  std::vector<Edge> edges;
  int k = static_cast<int>(set.size());
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (g.adjacent(set[i], set[j])) edges.emplace_back(i, j);
  return Graph::from_edges(k, edges);
}

/// Checks that `map` (indexed by vertices of `a`) is a bijection onto V(b) preserving
/// adjacency and non-adjacency.
inline bool is_isomorphism(const Graph& a, const Graph& b, std::span<const Vertex> map) {
  int n = a.vertex_count();
  if (b.vertex_count() != n || static_cast<int>(map.size()) != n) return false;
  std::vector<char> hit(n, 0);
  for (Vertex x : map) {
    if (x < 0 || x >= n || hit[x]) return false;
    hit[x] = 1;
  }
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (a.adjacent(u, v) != b.adjacent(map[u], map[v])) return false;
  return true;
}

namespace detail {

struct IsoSearch {
  const Graph& a;
  const Graph& b;
  std::vector<Vertex> forward;
  std::vector<char> used;

  bool consistent(Vertex u, Vertex x) const {
    if (a.degree(u) != b.degree(x)) return false;
    for (Vertex w = 0; w < a.vertex_count(); ++w) {
      if (w == u || forward[w] < 0) continue;
      if (a.adjacent(u, w) != b.adjacent(x, forward[w])) return false;
    }
    return true;
  }

  bool extend(Vertex u) {
    int n = a.vertex_count();
    while (u < n && forward[u] >= 0) ++u;
    if (u == n) return true;
    for (Vertex x = 0; x < n; ++x) {
      if (used[x] || !consistent(u, x)) continue;
      forward[u] = x;
      used[x] = 1;
      if (extend(u + 1)) return true;
      forward[u] = -1;
      used[x] = 0;
    }
    return false;
  }
};

}  // namespace detail

/// Isomorphism a -> b extending `fixed`, or nullopt. Backtracks over the vertices of `a`
/// in increasing order trying images in increasing order, so the first witness found is
/// the lexicographically least one.
inline std::optional<std::vector<Vertex>> find_isomorphism_fixing(const Graph& a, const Graph& b,
                                                                  const PartialMap& fixed = {}) {
  int n = a.vertex_count();
  if (b.vertex_count() != n || a.edge_count() != b.edge_count()) return std::nullopt;
  std::vector<int> da, db;
  for (Vertex v = 0; v < n; ++v) {
    da.push_back(a.degree(v));
    db.push_back(b.degree(v));
  }
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  if (da != db) return std::nullopt;

  detail::IsoSearch search{a, b, std::vector<Vertex>(n, -1), std::vector<char>(n, 0)};
  for (auto [u, x] : fixed) {
    if (u < 0 || u >= n || x < 0 || x >= n)
      throw InputError("fixed pair outside the vertex range");
    if (search.used[x]) throw InputError("fixed map is not injective");
    search.forward[u] = x;
    search.used[x] = 1;
  }
  for (auto [u, x] : fixed)
    if (!search.consistent(u, x)) return std::nullopt;
  if (!search.extend(0)) return std::nullopt;
  return search.forward;
}

}  // namespace locdense
