#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "locdense/error.hpp"
#include "locdense/graph.hpp"
#include "locdense/named_graphs.hpp"

namespace locdense {

/// The tree on the bags is not a tree. Distinct from a failed decomposition axiom.
class StructureError : public InputError {
public:
  using InputError::InputError;
};

using TreeEdge = std::pair<int, int>;

struct TreeDecomposition {
  std::vector<VertexSet> bags;
  std::vector<TreeEdge> tree_edges;

  int width() const {
    int w = -1;
    for (const auto& bag : bags) w = std::max(w, static_cast<int>(bag.size()) - 1);
    return w;
  }

  friend bool operator==(const TreeDecomposition&, const TreeDecomposition&) = default;
};

enum class Axiom { vertex_coverage, edge_coverage, running_intersection, bag_pattern, separator_symmetry };

inline const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::vertex_coverage: return "vertex_coverage";
    case Axiom::edge_coverage: return "edge_coverage";
    case Axiom::running_intersection: return "running_intersection";
    case Axiom::bag_pattern: return "bag_pattern";
    case Axiom::separator_symmetry: return "separator_symmetry";
  }
  return "unknown";
}

struct Violation {
  Axiom axiom;
  std::vector<int> bags;       // offending bag indices (a tree edge lists both ends)
  std::vector<Vertex> vertices;  // offending vertex or edge of H
  std::string message;
};

struct ValidationReport {
  bool valid = true;
  int width = -1;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  void add(Violation v) {
    violations.push_back(std::move(v));
    valid = false;
  }
};

/// Tree decomposition whose bags all induce copies of `pattern`.
struct JDecomposition {
  TreeDecomposition base;
  Graph pattern;
  /// bag_isomorphisms[i][j] is the H-vertex that pattern vertex j maps to in bag i.
  std::vector<std::vector<Vertex>> bag_isomorphisms;
  /// One per tree edge (X, Y): an isomorphism H[X] -> H[Y] in H labels fixing X ∩ Y.
  std::vector<PartialMap> separator_witnesses;
};

struct JValidation {
  ValidationReport report;
  std::optional<JDecomposition> decomposition;
};

/// Throws StructureError unless `edges` form a spanning tree on nodes 0..k-1.
inline void check_tree(int k, std::span<const TreeEdge> edges) {
  if (k == 0 && edges.empty()) return;
  if (static_cast<int>(edges.size()) != k - 1)
    throw StructureError("a tree on " + std::to_string(k) + " nodes needs " + std::to_string(k - 1) +
                         " edges, got " + std::to_string(edges.size()));
  std::vector<int> parent(k);
  for (int i = 0; i < k; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= k || b >= k)
      throw StructureError("tree edge (" + std::to_string(a) + "," + std::to_string(b) +
                           ") references a missing node");
    if (a == b) throw StructureError("tree edge is a loop at node " + std::to_string(a));
    int ra = find(a), rb = find(b);
    if (ra == rb)
      throw StructureError("tree edge (" + std::to_string(a) + "," + std::to_string(b) +
                           ") closes a cycle");
    parent[ra] = rb;
  }
}

inline std::vector<std::vector<int>> tree_adjacency(int k, std::span<const TreeEdge> edges) {
  std::vector<std::vector<int>> adj(k);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

/// Sorted intersection of two vertex sets.
inline VertexSet intersect(std::span<const Vertex> a, std::span<const Vertex> b) {
  VertexSet sa(a.begin(), a.end()), sb(b.begin(), b.end()), out;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(std::span<const Vertex> a, std::span<const Vertex> b) {
  return intersect(a, b).size() == a.size();
}

/// Checks vertex coverage, edge coverage and running intersection (the bags containing
/// each vertex must be connected in the tree). Redundant or repeated bags are warnings.
inline ValidationReport validate_tree_decomposition(const Graph& h, const TreeDecomposition& d) {
  int k = static_cast<int>(d.bags.size());
  check_tree(k, d.tree_edges);
  for (const auto& bag : d.bags) check_vertex_set(h, bag);

  ValidationReport report;
  report.width = d.width();
  int n = h.vertex_count();

  std::vector<std::vector<int>> holders(n);
  for (int i = 0; i < k; ++i)
    for (Vertex v : d.bags[i]) holders[v].push_back(i);

  for (Vertex v = 0; v < n; ++v)
    if (holders[v].empty())
      report.add({Axiom::vertex_coverage, {}, {v}, "vertex " + std::to_string(v) + " is in no bag"});

  for (auto [u, v] : h.edges()) {
    bool covered = false;
    for (int i : holders[u])
      if (std::find(d.bags[i].begin(), d.bags[i].end(), v) != d.bags[i].end()) {
        covered = true;
        break;
      }
    if (!covered)
      report.add({Axiom::edge_coverage, {}, {u, v},
                  "edge {" + std::to_string(u) + "," + std::to_string(v) + "} is in no bag"});
  }

  auto adj = tree_adjacency(k, d.tree_edges);
  std::vector<char> holds(k), seen(k);
  for (Vertex v = 0; v < n; ++v) {
    if (holders[v].size() < 2) continue;
    std::fill(holds.begin(), holds.end(), 0);
    std::fill(seen.begin(), seen.end(), 0);
    for (int i : holders[v]) holds[i] = 1;
    std::vector<int> stack{holders[v][0]};
    seen[holders[v][0]] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : adj[x])
        if (holds[y] && !seen[y]) {
          seen[y] = 1;
          ++reached;
          stack.push_back(y);
        }
    }
    if (reached != holders[v].size()) {
      std::vector<int> cut;
      for (int i : holders[v])
        if (!seen[i]) cut.push_back(i);
      report.add({Axiom::running_intersection, cut, {v},
                  "bags containing vertex " + std::to_string(v) + " are not connected in the tree"});
    }
  }

  for (auto [a, b] : d.tree_edges) {
    if (is_subset(d.bags[a], d.bags[b]) && is_subset(d.bags[b], d.bags[a]))
      report.warnings.push_back("bags " + std::to_string(a) + " and " + std::to_string(b) +
                                " are equal");
    else if (is_subset(d.bags[a], d.bags[b]))
      report.warnings.push_back("bag " + std::to_string(a) + " is redundant (contained in bag " +
                                std::to_string(b) + ")");
    else if (is_subset(d.bags[b], d.bags[a]))
      report.warnings.push_back("bag " + std::to_string(b) + " is redundant (contained in bag " +
                                std::to_string(a) + ")");
  }
  return report;
}

/// Positions of the shared vertices of x and y: position in x -> position in y.
inline PartialMap shared_positions(std::span<const Vertex> x, std::span<const Vertex> y) {
  PartialMap fixed;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      if (x[i] == y[j]) fixed[static_cast<Vertex>(i)] = static_cast<Vertex>(j);
  return fixed;
}

/// Tree-decomposition axioms plus: every bag induces a copy of j, and every tree edge XY
/// admits an isomorphism H[X] -> H[Y] fixing X ∩ Y pointwise.
inline JValidation validate_j_decomposition(const Graph& h, const Graph& j, const TreeDecomposition& d) {
  JValidation out;
  out.report = validate_tree_decomposition(h, d);

  std::vector<std::vector<Vertex>> bag_iso(d.bags.size());
  for (std::size_t i = 0; i < d.bags.size(); ++i) {
    Graph local = induced_subgraph(h, d.bags[i]);
    auto iso = find_isomorphism_fixing(j, local);
    if (!iso) {
      out.report.add({Axiom::bag_pattern, {static_cast<int>(i)}, d.bags[i],
                      "bag " + std::to_string(i) + " does not induce a copy of the pattern"});
      continue;
    }
    for (Vertex& x : *iso) x = d.bags[i][x];
    bag_iso[i] = std::move(*iso);
  }

  std::vector<PartialMap> witnesses;
  for (auto [a, b] : d.tree_edges) {
    const auto& x = d.bags[a];
    const auto& y = d.bags[b];
    auto iso = find_isomorphism_fixing(induced_subgraph(h, x), induced_subgraph(h, y),
                                       shared_positions(x, y));
    if (!iso) {
      out.report.add({Axiom::separator_symmetry, {a, b}, intersect(x, y),
                      "no isomorphism between bags " + std::to_string(a) + " and " +
                          std::to_string(b) + " fixes their intersection"});
      witnesses.emplace_back();
      continue;
    }
    PartialMap w;
    for (std::size_t p = 0; p < x.size(); ++p) w[x[p]] = y[(*iso)[p]];
    witnesses.push_back(std::move(w));
  }

  if (out.report.valid) out.decomposition = JDecomposition{d, j, std::move(bag_iso), std::move(witnesses)};
  return out;
}

struct Separator {
  TreeEdge edge;
  VertexSet common;
  Graph induced;
};

/// One entry per tree edge: X ∩ Y (sorted) and H[X ∩ Y].
inline std::vector<Separator> separators(const TreeDecomposition& d, const Graph& h) {
  std::vector<Separator> out;
  for (auto edge : d.tree_edges) {
    VertexSet common = intersect(d.bags[edge.first], d.bags[edge.second]);
    Graph induced = induced_subgraph(h, common);
    out.push_back({edge, std::move(common), std::move(induced)});
  }
  return out;
}

/// Contracts tree edges whose one end is contained in the other until none is left.
inline TreeDecomposition compress_decomposition(TreeDecomposition d) {
  for (;;) {
    int k = static_cast<int>(d.bags.size());
    int drop = -1, keep = -1;
    for (auto [a, b] : d.tree_edges) {
      if (is_subset(d.bags[a], d.bags[b])) { drop = a; keep = b; break; }
      if (is_subset(d.bags[b], d.bags[a])) { drop = b; keep = a; break; }
    }
    if (drop < 0) return d;
    std::vector<TreeEdge> edges;
    for (auto [a, b] : d.tree_edges) {
      if ((a == drop && b == keep) || (a == keep && b == drop)) continue;
      if (a == drop) a = keep;
      if (b == drop) b = keep;
      edges.emplace_back(a, b);
    }
    auto renumber = [drop](int x) { return x > drop ? x - 1 : x; };
    TreeDecomposition next;
    for (int i = 0; i < k; ++i)
      if (i != drop) next.bags.push_back(std::move(d.bags[i]));
    for (auto [a, b] : edges) next.tree_edges.emplace_back(renumber(a), renumber(b));
    d = std::move(next);
  }
}

/// Decomposition induced by eliminating vertices in `order`: bag i is the i-th eliminated
/// vertex plus its not-yet-eliminated neighbours in the fill-in graph. Not compressed.
inline TreeDecomposition decomposition_from_elimination_order(const Graph& h,
                                                              std::span<const Vertex> order) {
  int n = h.vertex_count();
  if (static_cast<int>(order.size()) != n) throw InputError("elimination order must list every vertex");
  check_vertex_set(h, order);
  std::vector<int> position(n);
  for (int i = 0; i < n; ++i) position[order[i]] = i;
  std::vector<std::set<Vertex>> fill(n);
  for (auto [u, v] : h.edges()) {
    fill[u].insert(v);
    fill[v].insert(u);
  }
  TreeDecomposition d;
  std::vector<int> bag_of(n);
  std::vector<std::set<Vertex>> later(n);
  for (int i = 0; i < n; ++i) {
    Vertex v = order[i];
    for (Vertex w : fill[v])
      if (position[w] > i) later[v].insert(w);
    for (Vertex a : later[v])
      for (Vertex b : later[v])
        if (a != b) fill[a].insert(b);
    VertexSet bag{v};
    bag.insert(bag.end(), later[v].begin(), later[v].end());
    std::sort(bag.begin(), bag.end());
    bag_of[v] = i;
    d.bags.push_back(std::move(bag));
  }
  for (int i = 0; i + 1 < n; ++i) {
    Vertex v = order[i];
    int parent = i + 1;
    if (!later[v].empty()) {
      parent = n;
      for (Vertex w : later[v]) parent = std::min(parent, position[w]);
    }
    d.tree_edges.emplace_back(i, parent);
  }
  return d;
}

/// Maximal-clique decomposition of a chordal graph via repeated elimination of the
/// lowest-labelled simplicial vertex. Throws PreconditionError when h is not chordal.
inline TreeDecomposition simplicial_decomposition(const Graph& h) {
  int n = h.vertex_count();
  std::vector<char> gone(n, 0);
  std::vector<Vertex> order;
  for (int step = 0; step < n; ++step) {
    Vertex pick = -1;
    for (Vertex v = 0; v < n && pick < 0; ++v) {
      if (gone[v]) continue;
      std::vector<Vertex> nb;
      for (Vertex w : h.neighbors(v))
        if (!gone[w]) nb.push_back(w);
      bool clique = true;
      for (std::size_t a = 0; a < nb.size() && clique; ++a)
        for (std::size_t b = a + 1; b < nb.size() && clique; ++b) clique = h.adjacent(nb[a], nb[b]);
      if (clique) pick = v;
    }
    if (pick < 0) throw PreconditionError("graph is not chordal: no simplicial vertex remains");
    gone[pick] = 1;
    order.push_back(pick);
  }
  if (n == 0) return {};
  return compress_decomposition(decomposition_from_elimination_order(h, order));
}

struct RTree {
  Graph graph;
  JDecomposition decomposition;
};

/// Starts from K_{r+1} on 0..r; step i adds vertex r+1+i adjacent to the r-clique script[i].
inline RTree build_r_tree(int r, std::span<const VertexSet> script) {
  if (r < 1) throw InputError("r-tree needs r >= 1");
  int n = r + 1;
  std::vector<Edge> edges = complete_graph(r + 1).edges();
  std::vector<std::vector<char>> adj(r + 1 + script.size(), std::vector<char>(r + 1 + script.size(), 0));
  for (auto [u, v] : edges) adj[u][v] = adj[v][u] = 1;
  TreeDecomposition d;
  VertexSet first(r + 1);
  for (int i = 0; i <= r; ++i) first[i] = i;
  d.bags.push_back(first);

  for (std::size_t step = 0; step < script.size(); ++step) {
    VertexSet attach = script[step];
    std::string where = "r-tree step " + std::to_string(step) + ": ";
    if (static_cast<int>(attach.size()) != r)
      throw InputError(where + "attach set must have exactly r=" + std::to_string(r) + " vertices");
    std::sort(attach.begin(), attach.end());
    for (std::size_t a = 0; a < attach.size(); ++a) {
      if (attach[a] < 0 || attach[a] >= n) throw InputError(where + "attach vertex does not exist yet");
      if (a > 0 && attach[a] == attach[a - 1]) throw InputError(where + "attach set repeats a vertex");
    }
    for (std::size_t a = 0; a < attach.size(); ++a)
      for (std::size_t b = a + 1; b < attach.size(); ++b)
        if (!adj[attach[a]][attach[b]]) throw InputError(where + "attach set is not a clique");
    int host = -1;
    for (std::size_t i = 0; i < d.bags.size() && host < 0; ++i)
      if (is_subset(attach, d.bags[i])) host = static_cast<int>(i);
    if (host < 0) throw InputError(where + "attach clique lies in no bag");
    Vertex fresh = n++;
    for (Vertex a : attach) {
      edges.emplace_back(a, fresh);
      adj[a][fresh] = adj[fresh][a] = 1;
    }
    VertexSet bag = attach;
    bag.push_back(fresh);
    d.bags.push_back(std::move(bag));
    d.tree_edges.emplace_back(host, static_cast<int>(d.bags.size()) - 1);
  }

  Graph g = Graph::from_edges(n, edges);
  auto checked = validate_j_decomposition(g, complete_graph(r + 1), d);
  if (!checked.decomposition) throw Error("internal: r-tree construction produced an invalid decomposition");
  return {std::move(g), std::move(*checked.decomposition)};
}

inline RTree build_r_tree(int r, std::initializer_list<VertexSet> script) {
  return build_r_tree(r, std::span<const VertexSet>(script.begin(), script.size()));
}

/// Text form: "bags k", then k lines of space-separated vertices, then "tree" and one
/// "a b" line per tree edge.
inline std::string emit_tree_decomposition(const TreeDecomposition& d) {
  std::ostringstream out;
  out << "bags " << d.bags.size() << '\n';
  for (const auto& bag : d.bags) {
    for (std::size_t i = 0; i < bag.size(); ++i) out << (i ? " " : "") << bag[i];
    out << '\n';
  }
  out << "tree\n";
  for (auto [a, b] : d.tree_edges) out << a << ' ' << b << '\n';
  return out.str();
}

inline TreeDecomposition parse_tree_decomposition(std::string_view text) {
  std::vector<std::string_view> lines;
  std::vector<std::size_t> offsets;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    offsets.push_back(pos);
    pos = end + 1;
  }
  auto ints = [&](std::size_t idx) {
    std::vector<int> values;
    std::istringstream in{std::string(lines[idx])};
    std::string tok;
    while (in >> tok) {
      std::size_t used = 0;
      int v = -1;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || v < 0)
        throw ParseError("expected nonnegative integer, got '" + tok + "'", idx + 1, offsets[idx]);
      values.push_back(v);
    }
    return values;
  };
  if (lines.empty() || lines[0].substr(0, 5) != "bags ") throw ParseError("expected 'bags k'", 1, 0);
  std::size_t k = 0;
  try {
    std::size_t used = 0;
    k = std::stoul(std::string(lines[0].substr(5)), &used);
    if (used != lines[0].size() - 5) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError("bad bag count", 1, 5);
  }
  if (lines.size() < k + 2) throw ParseError("file ends before all bags and 'tree' are read", lines.size(), text.size());
  TreeDecomposition d;
  for (std::size_t i = 1; i <= k; ++i) d.bags.push_back(ints(i));
  if (lines[k + 1] != "tree") throw ParseError("expected 'tree'", k + 2, offsets[k + 1]);
  for (std::size_t i = k + 2; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string_view::npos) continue;
    auto pair = ints(i);
    if (pair.size() != 2) throw ParseError("tree edge line must be 'a b'", i + 1, offsets[i]);
    d.tree_edges.emplace_back(pair[0], pair[1]);
  }
  return d;
}

}  // namespace locdense
