#include <gtest/gtest.h>

#include <random>

#include "locdense/enumeration.hpp"
#include "locdense/graph_io.hpp"
#include "locdense/named_graphs.hpp"

using namespace locdense;

TEST(Graph, BuildsAndQueries) {
  Graph g = Graph::from_edges(4, {{0, 1}, {2, 1}, {3, 2}});
  EXPECT_EQ(g.vertex_count(), 4);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_TRUE(g.adjacent(2, 1));
  EXPECT_FALSE(g.adjacent(0, 3));
  EXPECT_EQ(g.degree(1), 2);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}}));
}

TEST(Graph, RejectsMalformedEdges) {
  EXPECT_THROW(Graph::from_edges(3, {{0, 0}}), InputError);
  EXPECT_THROW(Graph::from_edges(3, {{0, 1}, {1, 0}}), InputError);
  EXPECT_THROW(Graph::from_edges(3, {{0, 3}}), InputError);
  EXPECT_THROW(Graph(-1), InputError);
}

TEST(Graph, InducedSubgraphRelabelsInOrder) {
  Graph c = cycle_graph(5);
  Graph sub = induced_subgraph(c, VertexSet{4, 0, 1});
  EXPECT_EQ(sub, path_graph(2));
  EXPECT_THROW(induced_subgraph(c, VertexSet{0, 0}), InputError);
  EXPECT_THROW(induced_subgraph(c, VertexSet{5}), InputError);
}

TEST(Graph, IsomorphismFixingRespectsPins) {
  Graph p = path_graph(2);
  auto any = find_isomorphism_fixing(p, p, {});
  ASSERT_TRUE(any);
  EXPECT_TRUE(is_isomorphism(p, p, *any));
  auto swapped = find_isomorphism_fixing(p, p, {{0, 2}});
  ASSERT_TRUE(swapped);
  EXPECT_EQ(*swapped, (std::vector<Vertex>{2, 1, 0}));
  EXPECT_FALSE(find_isomorphism_fixing(p, p, {{1, 0}}));
  EXPECT_FALSE(find_isomorphism_fixing(p, complete_graph(3), {}));
}

TEST(NamedGraphs, Constructors) {
  EXPECT_EQ(complete_graph(5).edge_count(), 10u);
  EXPECT_EQ(complete_multipartite({2, 1, 1}).edge_count(), 5u);
  EXPECT_EQ(complete_multipartite({3, 0}).edge_count(), 0u);
  EXPECT_EQ(complete_multipartite({3, 0}).vertex_count(), 3);
  EXPECT_EQ(path_graph(0).vertex_count(), 1);
  EXPECT_EQ(path_graph(4).edge_count(), 4u);
  EXPECT_EQ(cycle_graph(7).edge_count(), 7u);
  EXPECT_THROW(cycle_graph(2), InputError);
  Graph paley = paley_graph(13);
  EXPECT_EQ(paley.edge_count(), 39u);
  EXPECT_TRUE(is_regular(paley));
  EXPECT_THROW(paley_graph(7), InputError);
  EXPECT_EQ(apex(cycle_graph(5)).edge_count(), 10u);
  EXPECT_EQ(disjoint_union(complete_graph(3), path_graph(1)).vertex_count(), 5);
}

TEST(NamedGraphs, GoldnerHarary) {
  Graph gh = goldner_harary();
  EXPECT_EQ(gh.vertex_count(), 11);
  EXPECT_EQ(gh.edge_count(), 27u);
}

TEST(NamedGraphs, Expressions) {
  EXPECT_EQ(make_named_graph("K(4)"), complete_graph(4));
  EXPECT_EQ(make_named_graph("K(2,1,1)"), complete_multipartite({2, 1, 1}));
  EXPECT_EQ(make_named_graph("multipartite(3)").edge_count(), 0u);
  EXPECT_EQ(make_named_graph(" apex( C(5) ) "), apex(cycle_graph(5)));
  EXPECT_EQ(make_named_graph("disjoint_union(K(3),P(2),P(0))").vertex_count(), 7);
  EXPECT_EQ(make_named_graph("goldner_harary"), goldner_harary());
  EXPECT_THROW(make_named_graph("Q(3)"), ParseError);
  EXPECT_THROW(make_named_graph("K(3"), ParseError);
  EXPECT_THROW(make_named_graph("C(2)"), InputError);
}

TEST(GraphIO, EdgeListRoundTrip) {
  Graph gh = goldner_harary();
  EXPECT_EQ(parse_edge_list(emit_edge_list(gh)), gh);
  Graph g = parse_edge_list("# triangle\n3 3\n0 1\n1 2 # closing\n2 0\n");
  EXPECT_EQ(g, complete_graph(3));
  EXPECT_EQ(parse_edge_list("0 0\n").vertex_count(), 0);
}

TEST(GraphIO, EdgeListErrorsCarryLocation) {
  try {
    parse_edge_list("3 2\n0 1\n1 1\n");
    FAIL() << "self-loop accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.offset(), 8u);
  }
  try {
    parse_edge_list("3 2\n0 1\n1 0\n");
    FAIL() << "duplicate accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_edge_list("3 1\n0 3\n"), ParseError);
  EXPECT_THROW(parse_edge_list("3 2\n0 1\n"), ParseError);
  EXPECT_THROW(parse_edge_list("3 x\n"), ParseError);
  EXPECT_THROW(parse_edge_list(""), ParseError);
}

TEST(GraphIO, Graph6KnownStrings) {
  EXPECT_EQ(emit_graph6(complete_graph(4)), "C~");
  EXPECT_EQ(emit_graph6(cycle_graph(5)), "Dhc");
  EXPECT_EQ(emit_graph6(Graph(0)), "?");
  EXPECT_EQ(parse_graph6(">>graph6<<C~\n"), complete_graph(4));
  EXPECT_THROW(parse_graph6("B}"), ParseError);  // nonzero padding bit
  EXPECT_THROW(parse_graph6("C~~"), ParseError);
  EXPECT_THROW(parse_graph6("C"), ParseError);
}

TEST(GraphIO, Graph6RandomRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    int n = static_cast<int>(rng() % 70);
    Graph g = random_graph(n, 0.3, rng);
    EXPECT_EQ(parse_graph6(emit_graph6(g)), g);
    EXPECT_EQ(parse_edge_list(emit_edge_list(g)), g);
  }
}

TEST(Enumeration, ClassCounts) {
  // Number of graphs on n unlabeled vertices, n = 0..6.
  const std::size_t expected[] = {1, 1, 2, 4, 11, 34, 156};
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(nonisomorphic_graphs(n).size(), expected[n]) << n;
  EXPECT_EQ(nonisomorphic_graphs_up_to(6).size(), 208u);
}

TEST(Enumeration, CanonicalMaskIsInvariant) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    Graph g = random_graph(6, 0.5, rng);
    std::vector<int> perm{0, 1, 2, 3, 4, 5};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> edges;
    for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
    EXPECT_EQ(canonical_mask(g), canonical_mask(Graph::from_edge_set(6, edges)));
  }
}
