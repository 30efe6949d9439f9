// Builds the Goldner-Harary graph as a 3-tree and compares both sides of the tree
// homomorphism bound against a few target graphs.

#include <iostream>

#include "locdense/locdense.hpp"

using namespace locdense;

int main() {
  auto gh = build_r_tree(3, {{0, 1, 2}, {1, 4, 2}, {0, 4, 2}, {0, 1, 4}, {7, 1, 4}, {7, 0, 4}, {7, 0, 1}});
  std::cout << "H: " << gh.graph.vertex_count() << " vertices, " << gh.graph.edge_count() << " edges, "
            << gh.decomposition.base.bags.size() << " K4 bags\n";

  for (const char* target : {"K(5)", "K(6)", "K(2,2,2,2)", "apex(apex(C(5)))"}) {
    Graph g = make_named_graph(target);
    auto r = check_tree_hom(gh.graph, gh.decomposition, g);
    std::cout << target << ": t_H = " << to_string(r.lhs) << ", bound = " << to_string(r.rhs)
              << (r.holds ? "  holds" : "  FAILS") << (r.slack() == 0 ? " (equality)" : "") << '\n';
  }
}
