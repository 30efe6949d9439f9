#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "locdense/error.hpp"
#include "locdense/graph.hpp"
#include "locdense/rational.hpp"

namespace locdense {

inline constexpr int kExactDenseLimit = 22;

/// (rho, d): every X with |X| >= rho |V(G)| spans at least (d/2)|X|^2 edges.
struct DensityParams {
  Rational rho;
  Rational d;
};

struct SubsetDensity {
  Rational min_ratio;  // min of 2 e(X) / |X|^2 over qualifying X
  VertexSet argmin;    // lexicographically least minimizer, ascending
};

struct DenseVerdict {
  bool holds = false;
  std::optional<VertexSet> witness;
  Rational min_ratio;
};

/// Smallest qualifying subset size: ceil(rho n), and at least 1.
inline int min_qualifying_size(int n, const Rational& rho) {
  if (rho <= 0 || rho > 1) throw InputError("rho must lie in (0,1]");
  Rational target = rho * n;
  Integer s = boost::multiprecision::numerator(target) / boost::multiprecision::denominator(target);
  if (Rational(s) < target) ++s;
  return std::max(1, s.convert_to<int>());
}

inline std::size_t induced_edge_count(const Graph& g, std::span<const Vertex> set) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (g.adjacent(set[i], set[j])) ++e;
  return e;
}

inline Rational subset_ratio(const Graph& g, std::span<const Vertex> set) {
  auto k = static_cast<long long>(set.size());
  if (k == 0) throw InputError("ratio of an empty subset");
  return Rational(2 * static_cast<long long>(induced_edge_count(g, set)), k * k);
}

namespace detail {

class SubsetBranchAndBound {
public:
  SubsetBranchAndBound(const Graph& g, int min_size) : n_(g.vertex_count()), s_(min_size), adj_(n_, 0) {
    for (auto [u, v] : g.edges()) {
      adj_[u] |= 1u << v;
      adj_[v] |= 1u << u;
    }
  }

  SubsetDensity solve() {
    search(0, 0, 0);
    SubsetDensity out{Rational(best_num_, best_den_), {}};
    for (int v = 0; v < n_; ++v)
      if (best_set_ >> v & 1) out.argmin.push_back(v);
    return out;
  }

private:
  // ratio a/b < c/d with positive denominators
  static bool less(long long a, long long b, long long c, long long d) { return a * d < c * b; }

  static bool lex_less(std::uint32_t x, std::uint32_t y) {
    // compare ascending element lists; a proper prefix is smaller
    while (x && y) {
      int a = std::countr_zero(x), b = std::countr_zero(y);
      if (a != b) return a < b;
      x &= x - 1;
      y &= y - 1;
    }
    return !x && y;
  }

  void offer(std::uint32_t set, long long edges) {
    long long k = std::popcount(set);
    long long num = 2 * edges, den = k * k;
    if (!found_ || less(num, den, best_num_, best_den_) ||
        (!less(best_num_, best_den_, num, den) && lex_less(set, best_set_))) {
      found_ = true;
      best_num_ = num;
      best_den_ = den;
      best_set_ = set;
    }
  }

  // true when no completion of `set` using vertices >= next can be strictly better
  bool prunable(std::uint32_t set, int next, long long edges) const {
    if (!found_) return false;
    int have = std::popcount(set);
    int free = n_ - next;
    int need = std::max(0, s_ - have);
    if (need > free) return true;
    int gains[32];
    for (int w = next; w < n_; ++w) gains[w - next] = std::popcount(adj_[w] & set);
    std::sort(gains, gains + free);
    long long added = 0;
    for (int a = 0; a <= free; ++a) {
      if (a > 0) added += gains[a - 1];
      if (a < need) continue;
      long long k = have + a;
      if (k == 0) continue;
      // lower bound on 2 e(X) / |X|^2 for every completion of size k
      if (!less(best_num_, best_den_, 2 * (edges + added), k * k)) return false;
    }
    return true;
  }

  void search(std::uint32_t set, int next, long long edges) {
    if (next == n_) {
      if (std::popcount(set) >= s_) offer(set, edges);
      return;
    }
    if (prunable(set, next, edges)) return;
    search(set | (1u << next), next + 1, edges + std::popcount(adj_[next] & set));
    search(set, next + 1, edges);
  }

  int n_;
  int s_;
  std::vector<std::uint32_t> adj_;
  bool found_ = false;
  long long best_num_ = 0, best_den_ = 1;
  std::uint32_t best_set_ = 0;
};

}  // namespace detail

/// Exact min over |X| >= ceil(rho n) of 2 e(X)/|X|^2: the largest d for which G is
/// (rho, d)-dense. Branch and bound over include/exclude decisions; the bound adds the
/// smallest possible edge gains into the current set.
inline SubsetDensity min_subset_density(const Graph& g, const Rational& rho) {
  int n = g.vertex_count();
  if (n == 0) throw InputError("local density is undefined for an empty graph");
  if (n > kExactDenseLimit)
    throw LimitError("exact subset density is limited to " + std::to_string(kExactDenseLimit) +
                     " vertices; use the heuristic search");
  int s = min_qualifying_size(n, rho);
  return detail::SubsetBranchAndBound(g, s).solve();
}

inline DenseVerdict is_locally_dense(const Graph& g, const DensityParams& p) {
  if (p.d < 0 || p.d > 1) throw InputError("d must lie in [0,1]");
  auto best = min_subset_density(g, p.rho);
  DenseVerdict v;
  v.min_ratio = best.min_ratio;
  v.holds = best.min_ratio >= p.d;
  if (!v.holds) v.witness = best.argmin;
  return v;
}

/// Greedy peeling followed by randomized swap search for a subset of size >= rho n with
/// 2 e(X) < d |X|^2. Any candidate is re-certified exactly before it is returned.
/// Deterministic for a fixed seed; nullopt means nothing was found.
inline std::optional<VertexSet> heuristic_violator(const Graph& g, const DensityParams& p, std::uint64_t budget,
                                                   std::uint64_t seed) {
  int n = g.vertex_count();
  if (n == 0) return std::nullopt;
  int s = min_qualifying_size(n, p.rho);
  auto certify = [&](std::vector<char> const& in) -> std::optional<VertexSet> {
    VertexSet x;
    for (int v = 0; v < n; ++v)
      if (in[v]) x.push_back(v);
    if (static_cast<int>(x.size()) >= s && subset_ratio(g, x) < p.d) return x;
    return std::nullopt;
  };
  auto below = [&](long long edges, long long k) { return Rational(2 * edges, k * k) < p.d; };

  // Peel maximum-degree vertices from V.
  {
    std::vector<char> in(n, 1);
    std::vector<int> deg(n);
    long long edges = static_cast<long long>(g.edge_count());
    for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
    for (int k = n; k >= s; --k) {
      if (below(edges, k))
        if (auto x = certify(in)) return x;
      int worst = -1;
      for (int v = 0; v < n; ++v)
        if (in[v] && (worst < 0 || deg[v] > deg[worst])) worst = v;
      in[worst] = 0;
      edges -= deg[worst];
      for (Vertex w : g.neighbors(worst))
        if (in[w]) --deg[w];
    }
  }
  if (s >= n) return std::nullopt;

  std::mt19937_64 rng(seed);
  std::vector<char> in(n, 0);
  std::vector<int> inside, outside, deg_in(n, 0);
  long long edges = 0;
  auto reset = [&] {
    std::vector<int> perm(n);
    for (int v = 0; v < n; ++v) perm[v] = v;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::fill(in.begin(), in.end(), 0);
    std::fill(deg_in.begin(), deg_in.end(), 0);
    inside.assign(perm.begin(), perm.begin() + s);
    outside.assign(perm.begin() + s, perm.end());
    edges = 0;
    for (int v : inside) {
      in[v] = 1;
      for (Vertex w : g.neighbors(v)) {
        if (in[w]) ++edges;
        ++deg_in[w];
      }
    }
  };
  reset();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::uint64_t restart_every = std::max<std::uint64_t>(200, budget / 8);
  for (std::uint64_t it = 0; it < budget; ++it) {
    if (it > 0 && it % restart_every == 0) reset();
    if (below(edges, s))
      if (auto x = certify(in)) return x;
    std::size_t iu = rng() % inside.size(), iw = rng() % outside.size();
    int u = inside[iu], w = outside[iw];
    long long delta = deg_in[w] - deg_in[u] - (g.adjacent(u, w) ? 1 : 0);
    double temperature = 1.0 - static_cast<double>(it % restart_every) / restart_every;
    if (delta > 0 && unit(rng) >= std::exp(-static_cast<double>(delta) / (0.5 + 2.0 * temperature))) continue;
    in[u] = 0;
    for (Vertex x : g.neighbors(u)) --deg_in[x];
    in[w] = 1;
    for (Vertex x : g.neighbors(w)) ++deg_in[x];
    edges += delta;
    inside[iu] = w;
    outside[iw] = u;
  }
  if (below(edges, s)) return certify(in);
  return std::nullopt;
}

using WeightFunction = std::vector<Rational>;

enum class ReiherStatus { holds, fails, hypothesis_unmet };

struct ReiherReport {
  ReiherStatus status = ReiherStatus::hypothesis_unmet;
  Rational lhs;  // sum over edges uv of f(u) f(v)
  Rational rhs;  // (d/2) (sum f)^2 - n
  Rational weight_sum;
  bool density_certified = false;  // G was checked (rho, d)-dense exactly
  std::string note;
};

/// Weighted form of local density: sum_{uv in E} f(u)f(v) >= (d/2)(sum f)^2 - n whenever
/// sum f >= rho n and G is (rho, d)-dense.
inline ReiherReport reiher_check(const Graph& g, const WeightFunction& f, const DensityParams& p) {
  int n = g.vertex_count();
  if (static_cast<int>(f.size()) != n) throw InputError("weight function needs one value per vertex");
  for (const auto& w : f)
    if (w < 0 || w > 1) throw InputError("weight " + to_string(w) + " outside [0,1]");
  ReiherReport r;
  for (const auto& w : f) r.weight_sum += w;
  for (auto [u, v] : g.edges()) r.lhs += f[u] * f[v];
  r.rhs = p.d / 2 * r.weight_sum * r.weight_sum - n;
  if (r.weight_sum < p.rho * n) {
    r.note = "hypothesis unmet: sum of weights is below rho n";
    return r;
  }
  if (n <= kExactDenseLimit && n > 0) {
    auto verdict = is_locally_dense(g, p);
    if (!verdict.holds) {
      r.note = "hypothesis unmet: graph is not (rho,d)-dense, min ratio " + to_string(verdict.min_ratio);
      return r;
    }
    r.density_certified = true;
  } else {
    r.note = "local density taken on trust (graph above the exact limit)";
  }
  r.status = r.lhs >= r.rhs ? ReiherStatus::holds : ReiherStatus::fails;
  return r;
}

}  // namespace locdense
