#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "locdense/decomposition.hpp"
#include "locdense/error.hpp"
#include "locdense/graph.hpp"

namespace locdense {

inline constexpr int kTreewidthVertexLimit = 12;

struct TreewidthResult {
  int width = -1;
  std::vector<Vertex> elimination_order;
  TreeDecomposition witness;
};

/// Exact treewidth by dynamic programming over eliminated vertex sets:
///   TW(S) = min_{v in S} max(TW(S - v), |Q(S - v, v)|)
/// where Q(S, v) holds the vertices outside S + v reachable from v through S.
/// The empty graph has width -1.
inline TreewidthResult treewidth_exact(const Graph& h) {
  int n = h.vertex_count();
  if (n > kTreewidthVertexLimit)
    throw LimitError("treewidth_exact is limited to " + std::to_string(kTreewidthVertexLimit) +
                     " vertices, graph has " + std::to_string(n));
  if (n == 0) return {};

  std::vector<std::uint32_t> nbr(n, 0);
  for (auto [u, v] : h.edges()) {
    nbr[u] |= 1u << v;
    nbr[v] |= 1u << u;
  }
  auto q_size = [&](std::uint32_t s, int v) {
    std::uint32_t reached = 1u << v, frontier = 1u << v, outside = 0;
    while (frontier) {
      int x = std::countr_zero(frontier);
      frontier &= frontier - 1;
      std::uint32_t next = nbr[x] & ~reached;
      reached |= next;
      outside |= next & ~s;
      frontier |= next & s;
    }
    return std::popcount(outside);
  };

  std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<int> best(std::size_t(full) + 1, std::numeric_limits<int>::max());
  std::vector<std::int8_t> last(std::size_t(full) + 1, -1);
  best[0] = -1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    for (std::uint32_t rest = s; rest; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      std::uint32_t prev = s & ~(1u << v);
      int cost = std::max(best[prev], q_size(prev, v));
      if (cost < best[s]) {
        best[s] = cost;
        last[s] = static_cast<std::int8_t>(v);
      }
    }
  }

  TreewidthResult result;
  result.width = best[full];
  std::vector<Vertex> reversed;
  for (std::uint32_t s = full; s; s &= ~(1u << last[s])) reversed.push_back(last[s]);
  result.elimination_order.assign(reversed.rbegin(), reversed.rend());
  result.witness = compress_decomposition(decomposition_from_elimination_order(h, result.elimination_order));
  return result;
}

}  // namespace locdense
