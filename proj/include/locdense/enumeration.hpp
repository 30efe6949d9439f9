#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "locdense/decomposition.hpp"
#include "locdense/error.hpp"
#include "locdense/graph.hpp"

namespace locdense {

inline constexpr int kEnumerationVertexLimit = 7;

namespace detail {

inline int pair_index(int u, int v) {
  if (u > v) std::swap(u, v);
  return v * (v - 1) / 2 + u;
}

inline Graph graph_from_mask(int n, std::uint32_t mask) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u)
      if (mask >> pair_index(u, v) & 1) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

inline std::uint32_t mask_of(const Graph& g) {
  std::uint32_t mask = 0;
  for (auto [u, v] : g.edges()) mask |= 1u << pair_index(u, v);
  return mask;
}

}  // namespace detail

/// Canonical form: the smallest edge mask over all vertex relabelings.
inline std::uint32_t canonical_mask(const Graph& g) {
  int n = g.vertex_count();
  if (n > kEnumerationVertexLimit) throw LimitError("canonical_mask is limited to 7 vertices");
  auto edges = g.edges();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint32_t best = ~0u;
  do {
    std::uint32_t m = 0;
    for (auto [u, v] : edges) m |= 1u << detail::pair_index(perm[u], perm[v]);
    best = std::min(best, m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// One representative per isomorphism class on exactly n vertices, ordered by canonical
/// mask. Built by adding a vertex with every neighbourhood to the classes on n-1 vertices.
inline std::vector<Graph> nonisomorphic_graphs(int n) {
  if (n < 0 || n > kEnumerationVertexLimit) throw LimitError("nonisomorphic_graphs needs 0 <= n <= 7");
  std::set<std::uint32_t> level{0};
  for (int k = 1; k <= n; ++k) {
    std::set<std::uint32_t> next;
    for (std::uint32_t base : level)
      for (std::uint32_t nb = 0; nb < (1u << (k - 1)); ++nb) {
        std::uint32_t mask = base;
        for (int u = 0; u < k - 1; ++u)
          if (nb >> u & 1) mask |= 1u << detail::pair_index(u, k - 1);
        next.insert(canonical_mask(detail::graph_from_mask(k, mask)));
      }
    level = std::move(next);
  }
  std::vector<Graph> out;
  for (std::uint32_t m : level) out.push_back(detail::graph_from_mask(n, m));
  return out;
}

/// All isomorphism classes with 1..max_n vertices.
inline std::vector<Graph> nonisomorphic_graphs_up_to(int max_n) {
  std::vector<Graph> out;
  for (int n = 1; n <= max_n; ++n) {
    auto level = nonisomorphic_graphs(n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// Calls visit(g) for each of the 2^(n(n-1)/2) labeled graphs on n vertices.
template <class Visit>
void for_each_labeled_graph(int n, Visit&& visit) {
  if (n < 0 || n > kEnumerationVertexLimit) throw LimitError("labeled enumeration needs 0 <= n <= 7");
  std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  for (std::uint64_t mask = 0; mask < (1ULL << pairs); ++mask)
    visit(detail::graph_from_mask(n, static_cast<std::uint32_t>(mask)));
}

inline bool is_regular(const Graph& g) {
  for (Vertex v = 1; v < g.vertex_count(); ++v)
    if (g.degree(v) != g.degree(0)) return false;
  return true;
}

/// Erdos-Renyi G(n, p).
template <class Rng>
Graph random_graph(int n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

/// Random r-tree on n >= r+1 vertices: each new vertex attaches to a random r-subset of a
/// random existing bag.
template <class Rng>
RTree random_r_tree(int r, int n, Rng& rng) {
  if (n < r + 1) throw InputError("an r-tree has at least r+1 vertices");
  std::vector<VertexSet> bags{VertexSet(r + 1)};
  std::iota(bags[0].begin(), bags[0].end(), 0);
  std::vector<VertexSet> script;
  for (int v = r + 1; v < n; ++v) {
    VertexSet host = bags[std::uniform_int_distribution<std::size_t>(0, bags.size() - 1)(rng)];
    std::shuffle(host.begin(), host.end(), rng);
    host.resize(r);
    std::sort(host.begin(), host.end());
    script.push_back(host);
    host.push_back(v);
    bags.push_back(host);
  }
  return build_r_tree(r, script);
}

}  // namespace locdense
