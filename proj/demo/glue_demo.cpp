// Glues uniform edge homomorphisms of C(5) into a distribution on 2-edge walks and prints
// the entropy bookkeeping.

#include <cstdio>

#include "locdense/locdense.hpp"

using namespace locdense;

int main() {
  auto edge = uniform_hom_distribution(complete_graph(2), cycle_graph(5));
  MarkovTree tree{{{0, 1}, {1, 2}}, {{0, 1}}};
  auto glued = glue_markov_tree(tree, std::vector<RationalDistribution>{edge, edge.relabeled({1, 2})});

  std::printf("support %zu\n", glued.joint.support_size());
  std::printf("H(joint)            = %.15f\n", glued.audit.lhs);
  std::printf("sum H(sets) - H(sep) = %.15f\n", glued.audit.rhs);
  std::printf("gap                 = %.3g\n", glued.audit.gap);
  std::printf("first tuples:\n%s", emit_distribution(glued.joint).substr(0, 60).c_str());
}
