#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locdense/decomposition.hpp"
#include "locdense/error.hpp"
#include "locdense/graph.hpp"
#include "locdense/rational.hpp"
#include "locdense/treewidth.hpp"

namespace locdense {

inline constexpr int kBruteVertexLimit = 10;
inline constexpr std::uint64_t kBruteMapLimit = 1'000'000'000ULL;
inline constexpr std::uint64_t kDefaultTableBudget = 1ULL << 30;

namespace detail {

/// n^k, saturating at UINT64_MAX.
inline std::uint64_t saturating_pow(std::uint64_t n, int k) {
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (n != 0 && r > std::numeric_limits<std::uint64_t>::max() / n) return std::numeric_limits<std::uint64_t>::max();
    r *= n;
  }
  return r;
}

/// Backtracking over unassigned vertices of h in increasing order. `image[v] < 0` marks v
/// free. Candidates for v are restricted to common neighbours of its assigned neighbours.
class HomSearch {
public:
  HomSearch(const Graph& h, const Graph& g, std::vector<Vertex> image)
      : h_(h), g_(g), image_(std::move(image)) {}

  template <class Visit>
  void run(Visit&& visit) {
    extend(0, visit);
  }

  std::uint64_t count() {
    std::uint64_t total = 0;
    run([&](std::span<const Vertex>) { ++total; });
    return total;
  }

private:
  bool fits(Vertex v, Vertex x) const {
    for (Vertex u : h_.neighbors(v))
      if (image_[u] >= 0 && !g_.adjacent(image_[u], x)) return false;
    return true;
  }

  template <class Visit>
  void extend(Vertex v, Visit& visit) {
    int k = h_.vertex_count();
    while (v < k && image_[v] >= 0) ++v;
    if (v == k) {
      visit(std::span<const Vertex>(image_));
      return;
    }
    Vertex anchor = -1;
    for (Vertex u : h_.neighbors(v))
      if (image_[u] >= 0) {
        anchor = u;
        break;
      }
    if (anchor >= 0) {
      for (Vertex x : g_.neighbors(image_[anchor]))
        if (fits(v, x)) {
          image_[v] = x;
          extend(v + 1, visit);
        }
    } else {
      for (Vertex x = 0; x < g_.vertex_count(); ++x)
        if (fits(v, x)) {
          image_[v] = x;
          extend(v + 1, visit);
        }
    }
    image_[v] = -1;
  }

  const Graph& h_;
  const Graph& g_;
  std::vector<Vertex> image_;
};

inline void check_brute_limits(int free_vertices, int n, const char* who) {
  if (free_vertices > kBruteVertexLimit)
    throw LimitError(std::string(who) + ": more than " + std::to_string(kBruteVertexLimit) +
                     " pattern vertices to enumerate");
  if (saturating_pow(static_cast<std::uint64_t>(n), free_vertices) > kBruteMapLimit)
    throw LimitError(std::string(who) + ": |V(G)|^|V(H)| exceeds 10^9 candidate maps");
}

}  // namespace detail

/// Calls visit(image) for every homomorphism h -> g, in lexicographic order of images.
template <class Visit>
void for_each_homomorphism(const Graph& h, const Graph& g, Visit&& visit) {
  detail::check_brute_limits(h.vertex_count(), g.vertex_count(), "homomorphism enumeration");
  detail::HomSearch(h, g, std::vector<Vertex>(h.vertex_count(), -1)).run(visit);
}

/// |Hom(h, g)| by backtracking over vertex maps with edge pruning.
inline Integer hom_count_brute(const Graph& h, const Graph& g) {
  detail::check_brute_limits(h.vertex_count(), g.vertex_count(), "hom_count_brute");
  return Integer(detail::HomSearch(h, g, std::vector<Vertex>(h.vertex_count(), -1)).count());
}

struct ExtensionCount {
  Integer count;
  bool pre_violated = false;
};

/// Homomorphisms h -> g agreeing with `fixed`. When `fixed` already breaks an edge of h
/// the count is 0 and pre_violated is set.
inline ExtensionCount hom_extensions(const Graph& h, const Graph& g, const PartialMap& fixed) {
  std::vector<Vertex> image(h.vertex_count(), -1);
  for (auto [u, x] : fixed) {
    if (u < 0 || u >= h.vertex_count() || x < 0 || x >= g.vertex_count())
      throw InputError("fixed pair (" + std::to_string(u) + "->" + std::to_string(x) + ") out of range");
    image[u] = x;
  }
  for (auto [u, v] : h.edges())
    if (image[u] >= 0 && image[v] >= 0 && !g.adjacent(image[u], image[v])) return {Integer(0), true};
  int free_vertices = h.vertex_count() - static_cast<int>(fixed.size());
  detail::check_brute_limits(free_vertices, g.vertex_count(), "hom_extensions");
  return {Integer(detail::HomSearch(h, g, std::move(image)).count()), false};
}

/// Tree decomposition in introduce/forget/join form. Every node's bag is sorted; the root
/// has an empty bag.
struct NiceNode {
  enum class Kind { leaf, introduce, forget, join };
  Kind kind = Kind::leaf;
  Vertex vertex = -1;
  VertexSet bag;
  std::vector<int> children;
};

struct NiceDecomposition {
  std::vector<NiceNode> nodes;
  int root = -1;
};

/// Normalizes a valid decomposition rooted at bag 0. Children of a bag are reached by
/// forgetting then introducing one vertex at a time, in ascending vertex order.
inline NiceDecomposition make_nice(const TreeDecomposition& d) {
  NiceDecomposition nice;
  auto add = [&](NiceNode node) {
    nice.nodes.push_back(std::move(node));
    return static_cast<int>(nice.nodes.size()) - 1;
  };
  auto step = [&](int child, NiceNode::Kind kind, Vertex v) {
    VertexSet bag = nice.nodes[child].bag;
    if (kind == NiceNode::Kind::introduce) {
      bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
    } else {
      bag.erase(std::find(bag.begin(), bag.end(), v));
    }
    return add({kind, v, std::move(bag), {child}});
  };
  auto morph = [&](int node, const VertexSet& target) {
    VertexSet from = nice.nodes[node].bag;
    for (Vertex v : from)
      if (!std::binary_search(target.begin(), target.end(), v)) node = step(node, NiceNode::Kind::forget, v);
    for (Vertex v : target)
      if (!std::binary_search(from.begin(), from.end(), v)) node = step(node, NiceNode::Kind::introduce, v);
    return node;
  };

  int k = static_cast<int>(d.bags.size());
  if (k == 0) {
    nice.root = add({});
    return nice;
  }
  std::vector<VertexSet> sorted = d.bags;
  for (auto& b : sorted) std::sort(b.begin(), b.end());
  auto adj = tree_adjacency(k, d.tree_edges);

  std::function<int(int, int)> build = [&](int bag, int parent) {
    int top = -1;
    for (int c : adj[bag]) {
      if (c == parent) continue;
      int chain = morph(build(c, bag), sorted[bag]);
      top = top < 0 ? chain : add({NiceNode::Kind::join, -1, sorted[bag], {top, chain}});
    }
    if (top < 0) top = morph(add({}), sorted[bag]);
    return top;
  };
  nice.root = morph(build(0, -1), {});
  return nice;
}

namespace detail {

template <class Count>
struct Table {
  VertexSet bag;
  std::vector<Count> values;
};

template <class Count>
Table<Count> evaluate_nice(const NiceDecomposition& nice, const Graph& h, const Graph& g) {
  const std::uint64_t n = static_cast<std::uint64_t>(g.vertex_count());
  std::vector<std::uint64_t> power{1};
  for (int i = 0; i < h.vertex_count() + 1; ++i) power.push_back(power.back() * n);

  std::function<Table<Count>(int)> eval = [&](int id) -> Table<Count> {
    const NiceNode& node = nice.nodes[id];
    switch (node.kind) {
      case NiceNode::Kind::leaf:
        return {{}, {Count(1)}};
      case NiceNode::Kind::join: {
        Table<Count> left = eval(node.children[0]);
        Table<Count> right = eval(node.children[1]);
        for (std::size_t i = 0; i < left.values.size(); ++i) {
          if (left.values[i] == 0) continue;
          left.values[i] *= right.values[i];
        }
        return left;
      }
      case NiceNode::Kind::introduce: {
        Table<Count> child = eval(node.children[0]);
        const VertexSet& old = child.bag;
        std::size_t p = std::upper_bound(old.begin(), old.end(), node.vertex) - old.begin();
        std::vector<std::size_t> linked;
        for (std::size_t j = 0; j < old.size(); ++j)
          if (h.adjacent(node.vertex, old[j])) linked.push_back(j);
        Table<Count> out{node.bag, std::vector<Count>(child.values.size() * n, Count(0))};
        std::uint64_t low_span = power[p];
        for (std::uint64_t o = 0; o < child.values.size(); ++o) {
          if (child.values[o] == 0) continue;
          std::uint64_t low = o % low_span, high = o / low_span;
          for (Vertex x = 0; x < static_cast<Vertex>(n); ++x) {
            bool ok = true;
            for (std::size_t j : linked) {
              Vertex y = static_cast<Vertex>((o / power[j]) % n);
              if (!g.adjacent(x, y)) {
                ok = false;
                break;
              }
            }
            if (ok) out.values[low + x * low_span + high * low_span * n] = child.values[o];
          }
        }
        return out;
      }
      case NiceNode::Kind::forget: {
        Table<Count> child = eval(node.children[0]);
        const VertexSet& old = child.bag;
        std::size_t p = std::find(old.begin(), old.end(), node.vertex) - old.begin();
        std::uint64_t low_span = power[p];
        Table<Count> out{node.bag, std::vector<Count>(child.values.size() / n, Count(0))};
        for (std::uint64_t o = 0; o < child.values.size(); ++o) {
          if (child.values[o] == 0) continue;
          std::uint64_t low = o % low_span, high = o / (low_span * n);
          out.values[low + high * low_span] += child.values[o];
        }
        return out;
      }
    }
    throw Error("internal: unknown nice node kind");
  };
  return eval(nice.root);
}

}  // namespace detail

/// |Hom(h, g)| by dynamic programming over the introduce/forget/join form of `d`.
/// Table entries count homomorphisms of the already-forgotten part of h consistent with
/// the bag assignment. Refuses when |V(G)|^(width+1) exceeds `table_budget`.
inline Integer hom_count_td(const Graph& h, const Graph& g, const TreeDecomposition& d,
                            std::uint64_t table_budget = kDefaultTableBudget) {
  auto report = validate_tree_decomposition(h, d);
  if (!report.valid)
    throw InputError("hom_count_td: invalid tree decomposition: " + report.violations.front().message);
  std::uint64_t need = detail::saturating_pow(static_cast<std::uint64_t>(g.vertex_count()), report.width + 1);
  if (need > table_budget)
    throw LimitError("hom_count_td: |V(G)|^(width+1) = " +
                     (need == std::numeric_limits<std::uint64_t>::max() ? std::string("> 2^64") : std::to_string(need)) +
                     " table entries exceeds the budget of " + std::to_string(table_budget));
  if (h.vertex_count() == 0) return Integer(1);
  if (g.vertex_count() == 0) return Integer(0);
  NiceDecomposition nice = make_nice(d);
  // Every table entry is at most |V(G)|^|V(H)|, so 64-bit counts are exact below 2^63.
  if (detail::saturating_pow(static_cast<std::uint64_t>(g.vertex_count()), h.vertex_count()) < (1ULL << 63))
    return Integer(detail::evaluate_nice<std::uint64_t>(nice, h, g).values.at(0));
  return detail::evaluate_nice<Integer>(nice, h, g).values.at(0);
}

enum class HomMethod { automatic, brute, td };

struct DensityResult {
  Integer hom_count;
  Rational density;
  HomMethod method = HomMethod::automatic;
};

inline constexpr int kAutoTreewidthCutoff = 4;

/// t_H(G) = |Hom(H,G)| / |V(G)|^|V(H)| as a reduced rational.
/// `automatic` uses the tree-decomposition DP when `d` (or, for |V(H)| <= 12, an exact
/// treewidth witness) has width <= 4, and brute force otherwise.
inline DensityResult hom_density_detailed(const Graph& h, const Graph& g, HomMethod method = HomMethod::automatic,
                                          const TreeDecomposition* d = nullptr) {
  if (g.vertex_count() == 0) throw InputError("homomorphism density is undefined for an empty target graph");
  DensityResult out;
  out.method = method;
  if (method == HomMethod::automatic) {
    std::optional<TreeDecomposition> found;
    if (d == nullptr && h.vertex_count() <= kTreewidthVertexLimit) {
      found = treewidth_exact(h).witness;
      d = &*found;
    }
    bool use_td = d != nullptr && d->width() <= kAutoTreewidthCutoff;
    if (!use_td) {
      try {
        out.hom_count = hom_count_brute(h, g);
        out.method = HomMethod::brute;
      } catch (const LimitError&) {
        if (d == nullptr) throw;
        use_td = true;
      }
    }
    if (use_td) {
      out.hom_count = hom_count_td(h, g, *d);
      out.method = HomMethod::td;
    }
  } else if (method == HomMethod::brute) {
    out.hom_count = hom_count_brute(h, g);
  } else {
    if (d == nullptr) {
      if (h.vertex_count() > kTreewidthVertexLimit)
        throw InputError("td method needs a decomposition for patterns above 12 vertices");
      out.hom_count = hom_count_td(h, g, treewidth_exact(h).witness);
    } else {
      out.hom_count = hom_count_td(h, g, *d);
    }
  }
  out.density = Rational(out.hom_count, ipow(Integer(g.vertex_count()), static_cast<unsigned>(h.vertex_count())));
  return out;
}

inline Rational hom_density(const Graph& h, const Graph& g, HomMethod method = HomMethod::automatic,
                            const TreeDecomposition* d = nullptr) {
  return hom_density_detailed(h, g, method, d).density;
}

}  // namespace locdense
