#pragma once

// Deliberately naive reference implementations. None of these call into the library's
// counting, density or entropy code.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "locdense/graph.hpp"
#include "locdense/rational.hpp"

namespace oracle {

using locdense::Graph;
using locdense::Integer;
using locdense::Rational;

/// Counts homomorphisms by running an odometer over all |V(G)|^|V(H)| maps.
inline Integer hom_count(const Graph& h, const Graph& g) {
  int k = h.vertex_count(), n = g.vertex_count();
  if (k == 0) return 1;
  if (n == 0) return 0;
  auto edges = h.edges();
  std::vector<int> map(k, 0);
  Integer count = 0;
  while (true) {
    bool ok = true;
    for (auto [u, v] : edges)
      if (!g.adjacent(map[u], map[v])) {
        ok = false;
        break;
      }
    if (ok) ++count;
    int i = 0;
    while (i < k && ++map[i] == n) map[i++] = 0;
    if (i == k) break;
  }
  return count;
}

inline Rational density(const Graph& h, const Graph& g) {
  Integer total = 1;
  for (int i = 0; i < h.vertex_count(); ++i) total *= g.vertex_count();
  return Rational(hom_count(h, g), total);
}

using Matrix = std::vector<std::vector<Integer>>;

inline Matrix adjacency(const Graph& g) {
  int n = g.vertex_count();
  Matrix a(n, std::vector<Integer>(n, 0));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) a[u][v] = g.adjacent(u, v) ? 1 : 0;
  return a;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  std::size_t n = a.size();
  Matrix c(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Matrix power(const Graph& g, int e) {
  int n = g.vertex_count();
  Matrix r(n, std::vector<Integer>(n, 0));
  for (int i = 0; i < n; ++i) r[i][i] = 1;
  Matrix a = adjacency(g);
  for (int i = 0; i < e; ++i) r = multiply(r, a);
  return r;
}

/// Walks with `length` edges: the entry sum of A^length.
inline Integer walk_count(const Graph& g, int length) {
  Integer s = 0;
  for (const auto& row : power(g, length))
    for (const auto& x : row) s += x;
  return s;
}

/// Closed walks with `length` edges: the trace of A^length.
inline Integer closed_walk_count(const Graph& g, int length) {
  auto p = power(g, length);
  Integer s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i][i];
  return s;
}

inline Rational path_density(const Graph& g, int length) {
  Integer total = 1;
  for (int i = 0; i <= length; ++i) total *= g.vertex_count();
  return Rational(walk_count(g, length), total);
}

inline Rational cycle_density(const Graph& g, int length) {
  Integer total = 1;
  for (int i = 0; i < length; ++i) total *= g.vertex_count();
  return Rational(closed_walk_count(g, length), total);
}

/// min 2 e(X) / |X|^2 over all X with |X| >= min_size, by plain enumeration of every subset.
inline Rational min_subset_ratio(const Graph& g, int min_size) {
  int n = g.vertex_count();
  bool found = false;
  Rational best = 0;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    int k = std::popcount(s);
    if (k < min_size) continue;
    long long e = 0;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if ((s >> u & 1) && (s >> v & 1) && g.adjacent(u, v)) ++e;
    Rational r(2 * e, static_cast<long long>(k) * k);
    if (!found || r < best) best = r, found = true;
  }
  return best;
}

/// Entropy in bits of a finite mass function, by the plain formula.
template <class Map>
double entropy(const Map& mass) {
  double h = 0;
  for (const auto& [key, w] : mass) {
    double p = static_cast<double>(w);
    if (p > 0) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace oracle
