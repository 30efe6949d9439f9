#include <gtest/gtest.h>

#include <random>

#include "locdense/decomposition.hpp"
#include "locdense/enumeration.hpp"
#include "locdense/named_graphs.hpp"
#include "locdense/treewidth.hpp"

using namespace locdense;

namespace {

RTree goldner_harary_tree() {
  // Letters C, D, H, K are 0..3; E, J, I, B, G, F, A follow as 4..10.
  return build_r_tree(3, {{0, 1, 2}, {1, 4, 2}, {0, 4, 2}, {0, 1, 4}, {7, 1, 4}, {7, 0, 4}, {7, 0, 1}});
}

bool has_violation(const ValidationReport& r, Axiom a) {
  for (const auto& v : r.violations)
    if (v.axiom == a) return true;
  return false;
}

}  // namespace

TEST(TreeDecomposition, PathOfEdgesIsValid) {
  TreeDecomposition d{{{0, 1}, {1, 2}, {2, 3}}, {{0, 1}, {1, 2}}};
  auto r = validate_tree_decomposition(path_graph(3), d);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.width, 1);
}

TEST(TreeDecomposition, ReportsEachAxiom) {
  Graph c4 = cycle_graph(4);
  TreeDecomposition missing_vertex{{{0, 1}, {1, 2}}, {{0, 1}}};
  EXPECT_TRUE(has_violation(validate_tree_decomposition(c4, missing_vertex), Axiom::vertex_coverage));

  TreeDecomposition missing_edge{{{0, 1, 2}, {2, 3}}, {{0, 1}}};
  auto r = validate_tree_decomposition(c4, missing_edge);
  EXPECT_TRUE(has_violation(r, Axiom::edge_coverage));
  EXPECT_FALSE(has_violation(r, Axiom::vertex_coverage));

  // Vertex 0 lies in bags 0 and 2 but not in bag 1 between them.
  TreeDecomposition broken{{{0, 1, 3}, {1, 2, 3}, {0, 3}}, {{0, 1}, {1, 2}}};
  auto b = validate_tree_decomposition(c4, broken);
  EXPECT_TRUE(has_violation(b, Axiom::running_intersection));
  ASSERT_FALSE(b.violations.empty());
  EXPECT_EQ(b.violations.front().vertices, (std::vector<Vertex>{0}));
}

TEST(TreeDecomposition, NonTreeIsStructureError) {
  Graph k3 = complete_graph(3);
  TreeDecomposition cyc{{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}, {{0, 1}, {1, 2}, {2, 0}}};
  EXPECT_THROW(validate_tree_decomposition(k3, cyc), StructureError);
  TreeDecomposition forest{{{0, 1, 2}, {0, 1, 2}}, {}};
  EXPECT_THROW(validate_tree_decomposition(k3, forest), StructureError);
}

TEST(TreeDecomposition, RedundantBagIsOnlyAWarning) {
  TreeDecomposition d{{{0, 1, 2}, {1, 2}}, {{0, 1}}};
  auto r = validate_tree_decomposition(complete_graph(3), d);
  EXPECT_TRUE(r.valid);
  EXPECT_FALSE(r.warnings.empty());
  auto c = compress_decomposition(d);
  EXPECT_EQ(c.bags.size(), 1u);
  EXPECT_TRUE(validate_tree_decomposition(complete_graph(3), c).valid);
}

TEST(TreeDecomposition, TextRoundTrip) {
  auto t = goldner_harary_tree();
  auto text = emit_tree_decomposition(t.decomposition.base);
  EXPECT_EQ(parse_tree_decomposition(text), t.decomposition.base);
  EXPECT_THROW(parse_tree_decomposition("bags 2\n0 1\n"), ParseError);
  EXPECT_THROW(parse_tree_decomposition("bags 1\n0 x\ntree\n"), ParseError);
}

TEST(JDecomposition, GoldnerHararyIsAThreeTree) {
  auto t = goldner_harary_tree();
  EXPECT_EQ(t.graph.vertex_count(), 11);
  EXPECT_EQ(t.graph.edge_count(), 27u);
  EXPECT_EQ(t.decomposition.base.bags.size(), 8u);
  for (const auto& sep : separators(t.decomposition.base, t.graph)) {
    EXPECT_EQ(sep.common.size(), 3u);
    EXPECT_TRUE(sep.induced.is_complete());
  }
  // The script reproduces the named graph up to the letter relabelling.
  const Vertex letter_of[] = {2, 3, 7, 10, 4, 9, 8, 1, 6, 5, 0};  // C D H K E J I B G F A
  std::vector<Edge> relabeled;
  for (auto [u, v] : t.graph.edges()) relabeled.emplace_back(letter_of[u], letter_of[v]);
  EXPECT_EQ(Graph::from_edge_set(11, relabeled), goldner_harary());
  auto check = validate_j_decomposition(t.graph, complete_graph(4), t.decomposition.base);
  EXPECT_TRUE(check.report.valid);
}

TEST(JDecomposition, WitnessesFixSeparators) {
  Graph h = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 3}});
  TreeDecomposition d{{{0, 1, 3}, {1, 2, 3}}, {{0, 1}}};
  auto ok = validate_j_decomposition(h, complete_graph(3), d);
  ASSERT_TRUE(ok.decomposition);
  const auto& w = ok.decomposition->separator_witnesses.at(0);
  EXPECT_EQ(w.at(1), 1);
  EXPECT_EQ(w.at(3), 3);
  EXPECT_EQ(w.at(0), 2);
}

TEST(JDecomposition, RejectsWrongPatternAndAsymmetricSeparator) {
  // Bag {0,2,3} of C_5 induces one edge plus an isolated vertex, not P(2).
  Graph c5 = cycle_graph(5);
  TreeDecomposition d{{{0, 1, 2}, {0, 2, 3}, {0, 3, 4}}, {{0, 1}, {1, 2}}};
  auto r = validate_j_decomposition(c5, path_graph(2), d);
  EXPECT_TRUE(has_violation(r.report, Axiom::bag_pattern));
  EXPECT_FALSE(r.decomposition);

  // Both bags induce P(2) but the shared vertex 2 is an end in one and the centre in the other.
  Graph h = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {2, 4}});
  TreeDecomposition e{{{0, 1, 2}, {2, 3, 4}}, {{0, 1}}};
  auto s = validate_j_decomposition(h, path_graph(2), e);
  EXPECT_TRUE(has_violation(s.report, Axiom::separator_symmetry));
  EXPECT_FALSE(has_violation(s.report, Axiom::bag_pattern));
}

TEST(RTree, RejectsBadScripts) {
  EXPECT_THROW(build_r_tree(2, {{0, 1, 2}}), InputError);
  EXPECT_THROW(build_r_tree(2, {{0, 5}}), InputError);
  EXPECT_THROW(build_r_tree(2, {{0, 0}}), InputError);
  // 1 and 3 are not adjacent after the first step.
  EXPECT_THROW(build_r_tree(2, {{0, 2}, {1, 3}}), InputError);
}

TEST(RTree, RandomTreesValidate) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    int r = 1 + static_cast<int>(rng() % 3);
    int n = r + 1 + static_cast<int>(rng() % 7);
    auto t = random_r_tree(r, n, rng);
    EXPECT_EQ(t.graph.vertex_count(), n);
    // An r-tree on n vertices has r(r+1)/2 + (n-r-1) r edges.
    EXPECT_EQ(static_cast<int>(t.graph.edge_count()), r * (r + 1) / 2 + (n - r - 1) * r);
    EXPECT_TRUE(validate_j_decomposition(t.graph, complete_graph(r + 1), t.decomposition.base).report.valid);
    EXPECT_EQ(treewidth_exact(t.graph).width, r);
  }
}

TEST(Treewidth, KnownValues) {
  EXPECT_EQ(treewidth_exact(Graph(0)).width, -1);
  EXPECT_EQ(treewidth_exact(Graph(3)).width, 0);
  EXPECT_EQ(treewidth_exact(path_graph(6)).width, 1);
  EXPECT_EQ(treewidth_exact(cycle_graph(7)).width, 2);
  EXPECT_EQ(treewidth_exact(complete_graph(6)).width, 5);
  EXPECT_EQ(treewidth_exact(complete_multipartite({3, 3})).width, 3);
  EXPECT_EQ(treewidth_exact(goldner_harary()).width, 3);
  // 3x3 grid
  std::vector<Edge> grid;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      if (c < 2) grid.emplace_back(3 * r + c, 3 * r + c + 1);
      if (r < 2) grid.emplace_back(3 * r + c, 3 * r + c + 3);
    }
  EXPECT_EQ(treewidth_exact(Graph::from_edges(9, grid)).width, 3);
  EXPECT_THROW(treewidth_exact(Graph(13)), LimitError);
}

TEST(Treewidth, WitnessIsValidAndTight) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 60; ++i) {
    Graph g = random_graph(1 + static_cast<int>(rng() % 9), 0.4, rng);
    auto tw = treewidth_exact(g);
    auto r = validate_tree_decomposition(g, tw.witness);
    EXPECT_TRUE(r.valid);
    EXPECT_EQ(r.width, tw.width);
    EXPECT_TRUE(r.warnings.empty());
  }
}

TEST(Decomposition, SimplicialOnChordalOnly) {
  auto t = goldner_harary_tree();
  auto d = simplicial_decomposition(t.graph);
  auto r = validate_tree_decomposition(t.graph, d);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.width, 3);
  EXPECT_THROW(simplicial_decomposition(cycle_graph(4)), PreconditionError);
}
