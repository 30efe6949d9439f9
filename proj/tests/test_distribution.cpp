#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "locdense/decomposition.hpp"
#include "locdense/distribution.hpp"
#include "locdense/enumeration.hpp"
#include "locdense/named_graphs.hpp"
#include "oracles.hpp"

using namespace locdense;

namespace {

/// Random distribution on `coords` over a small alphabet with integer weights.
/// With `full` every tuple gets positive mass.
RationalDistribution random_distribution(const CoordinateSet& coords, int alphabet, std::mt19937_64& rng,
                                         bool full = false) {
  RationalDistribution::Mass mass;
  std::vector<Tuple> tuples{Tuple{}};
  for (std::size_t i = 0; i < coords.size(); ++i) {
    std::vector<Tuple> next;
    for (const auto& t : tuples)
      for (int x = 0; x < alphabet; ++x) {
        Tuple u = t;
        u.push_back(x);
        next.push_back(u);
      }
    tuples = next;
  }
  long long total = 0;
  std::vector<long long> w;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    w.push_back(!full && rng() % 3 == 0 ? 0 : 1 + static_cast<long long>(rng() % 5));
    total += w.back();
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  for (std::size_t i = 0; i < tuples.size(); ++i)
    if (w[i]) mass[tuples[i]] = Rational(w[i], total);
  return RationalDistribution(coords, alphabet, mass);
}

}  // namespace

TEST(Distribution, ValidatesNormalization) {
  EXPECT_THROW(RationalDistribution({0}, 2, {{{0}, Rational(1, 2)}}), InputError);
  EXPECT_THROW(RationalDistribution({0}, 2, {{{2}, Rational(1)}}), InputError);
  EXPECT_THROW(RationalDistribution({0, 0}, 2, {{{0, 0}, Rational(1)}}), InputError);
  EXPECT_NO_THROW(RealDistribution({0}, 2, {{{0}, 0.5}, {{1}, 0.5 + 1e-13}}));
  EXPECT_THROW(RealDistribution({0}, 2, {{{0}, 0.5}, {{1}, 0.5001}}), InputError);
}

TEST(Distribution, MarginalAndEntropyMatchOracle) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 30; ++i) {
    auto d = random_distribution({3, 1, 7}, 3, rng);
    auto m = marginal(d, {7, 3});
    std::map<Tuple, Rational> expected;
    for (const auto& [t, w] : d.mass()) expected[{t[2], t[0]}] += w;
    for (const auto& [t, w] : expected) EXPECT_EQ(m.probability(t), w);
    EXPECT_NEAR(entropy_bits(d), oracle::entropy(d.mass()), 1e-12);
    EXPECT_NEAR(entropy_bits(m), oracle::entropy(expected), 1e-12);
  }
}

TEST(Distribution, UniformHomDistribution) {
  auto d = uniform_hom_distribution(complete_graph(2), cycle_graph(5));
  EXPECT_EQ(d.support_size(), 10u);
  EXPECT_NEAR(entropy_bits(d), std::log2(10.0), 1e-12);
  EXPECT_THROW(uniform_hom_distribution(complete_graph(3), cycle_graph(4)), PreconditionError);
}

TEST(Distribution, ConditionalMutualInformation) {
  // X = Y uniform bit, Z independent: I(X;Y|Z) = 1 and I(X;Z|Y) = 0.
  RationalDistribution d({0, 1, 2}, 2,
                         {{{0, 0, 0}, Rational(1, 4)}, {{0, 0, 1}, Rational(1, 4)}, {{1, 1, 0}, Rational(1, 4)},
                          {{1, 1, 1}, Rational(1, 4)}});
  EXPECT_NEAR(conditional_mutual_information(d, {0}, {1}, {2}), 1.0, 1e-12);
  EXPECT_NEAR(conditional_mutual_information(d, {0}, {2}, {1}), 0.0, 1e-12);
}

TEST(Glue, CyclePathExampleIsExact) {
  // Two edge marginals of C_5 glued at their shared vertex.
  auto edge = uniform_hom_distribution(complete_graph(2), cycle_graph(5));
  MarkovTree m{{{0, 1}, {1, 2}}, {{0, 1}}};
  auto glued = glue_markov_tree(m, std::vector<RationalDistribution>{edge, edge.relabeled({1, 2})});
  EXPECT_EQ(glued.joint.support_size(), 20u);
  EXPECT_NEAR(glued.audit.lhs, std::log2(20.0), 1e-12);
  EXPECT_NEAR(glued.audit.rhs, 2 * std::log2(10.0) - std::log2(5.0), 1e-12);
  EXPECT_LE(glued.audit.gap, 1e-12);
}

TEST(Glue, MarginalsAndConditionalIndependence) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 25; ++i) {
    // Star of three sets sharing coordinate 0, then a path extension.
    MarkovTree m{{{0, 1}, {0, 2}, {0, 3}, {3, 4}}, {{0, 1}, {0, 2}, {2, 3}}};
    auto base = random_distribution({0, 1}, 3, rng);
    auto sep0 = marginal(base, {0});
    std::vector<RationalDistribution> locals{base};
    // Locals 1 and 2 must agree with local 0 on coordinate 0.
    for (int c : {2, 3}) {
      RationalDistribution cond = random_distribution({9, c}, 3, rng, true);
      RationalDistribution::Mass mass;
      for (const auto& [t, w] : cond.mass()) {
        Rational row = marginal(cond, {9}).probability({t[0]});
        mass[{t[0], t[1]}] += w / row * sep0.probability({t[0]});
      }
      locals.push_back(RationalDistribution({0, c}, 3, mass));
    }
    auto sep3 = marginal(locals[2], {3});
    RationalDistribution cond = random_distribution({9, 4}, 3, rng, true);
    RationalDistribution::Mass mass;
    for (const auto& [t, w] : cond.mass()) mass[{t[0], t[1]}] += w / marginal(cond, {9}).probability({t[0]}) * sep3.probability({t[0]});
    locals.push_back(RationalDistribution({3, 4}, 3, mass));

    auto glued = glue_markov_tree(m, locals);
    EXPECT_EQ(glued.joint.coords(), (CoordinateSet{0, 1, 2, 3, 4}));
    for (std::size_t s = 0; s < m.sets.size(); ++s) {
      auto mg = marginal(glued.joint, locals[s].coords());
      for (const auto& [t, w] : locals[s].mass()) EXPECT_EQ(mg.probability(t), w);
      EXPECT_EQ(mg.support_size(), locals[s].support_size());
    }
    EXPECT_NEAR(conditional_mutual_information(glued.joint, {1}, {2, 3, 4}, {0}), 0.0, 1e-9);
    EXPECT_NEAR(conditional_mutual_information(glued.joint, {0, 1, 2}, {4}, {3}), 0.0, 1e-9);
    EXPECT_LE(glued.audit.gap, 1e-9);
  }
}

TEST(Glue, RejectsInconsistentMarginalsNamingTheEdge) {
  RationalDistribution a({0, 1}, 2, {{{0, 0}, Rational(1, 2)}, {{1, 1}, Rational(1, 2)}});
  RationalDistribution b({1, 2}, 2, {{{0, 0}, Rational(1, 4)}, {{1, 1}, Rational(3, 4)}});
  MarkovTree m{{{0, 1}, {1, 2}}, {{0, 1}}};
  try {
    glue_markov_tree(m, std::vector<RationalDistribution>{a, b});
    FAIL() << "mismatch accepted";
  } catch (const MarginalMismatch& e) {
    EXPECT_EQ(e.edge(), (TreeEdge{0, 1}));
    EXPECT_NEAR(e.deviation(), 0.25, 1e-15);
    EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos);
  }
}

TEST(Glue, RejectsBadTrees) {
  RationalDistribution a({0, 1}, 2, {{{0, 0}, Rational(1)}});
  RationalDistribution c({0, 2}, 2, {{{0, 0}, Rational(1)}});
  RationalDistribution b({1, 2}, 2, {{{0, 0}, Rational(1)}});
  // 0 sits in sets 0 and 2, which are not adjacent.
  MarkovTree broken{{{0, 1}, {1, 2}, {0, 2}}, {{0, 1}, {1, 2}}};
  EXPECT_THROW(glue_markov_tree(broken, std::vector<RationalDistribution>{a, b, c}), InputError);
  MarkovTree cyclic{{{0, 1}, {1, 2}}, {{0, 1}, {1, 0}}};
  EXPECT_THROW(glue_markov_tree(cyclic, std::vector<RationalDistribution>{a, b}), StructureError);
}

TEST(Glue, RealWeightsWithinTolerance) {
  RealDistribution a({0, 1}, 2, {{{0, 0}, 0.3}, {{1, 1}, 0.7}});
  RealDistribution b({1, 2}, 2, {{{0, 1}, 0.3}, {{1, 0}, 0.7 - 1e-14}, {{1, 1}, 1e-14}});
  MarkovTree m{{{0, 1}, {1, 2}}, {{0, 1}}};
  auto glued = glue_markov_tree(m, std::vector<RealDistribution>{a, b});
  EXPECT_NEAR(glued.audit.gap, 0.0, 1e-9);
}

TEST(TreeHomSupport, GluedHomomorphismIsRandomHomomorphism) {
  auto t = build_r_tree(2, {{0, 1}, {1, 3}, {0, 2}});
  for (const Graph& g : {complete_graph(4), paley_graph(13), complete_multipartite({1, 2, 2})}) {
    auto r = verify_tree_hom_support(t.graph, t.decomposition, g);
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.support_in_hom);
    EXPECT_LE(Integer(r.support_size), r.hom_count);
  }
}

TEST(DistributionIO, RoundTrip) {
  std::mt19937_64 rng(33);
  auto d = random_distribution({0, 1}, 3, rng);
  auto text = emit_distribution(d);
  auto back = parse_distribution(text, {0, 1}, 3);
  EXPECT_EQ(back.mass(), d.mass());
  EXPECT_THROW(parse_distribution("0 1/2\n", {0, 1}, 2), ParseError);
  EXPECT_THROW(parse_distribution("0 0 x\n", {0, 1}, 2), ParseError);
  EXPECT_THROW(parse_distribution("0 0 1/2\n", {0, 1}, 2), InputError);
}
