#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "locdense/error.hpp"
#include "locdense/graph.hpp"
#include "locdense/homcount.hpp"
#include "locdense/rational.hpp"

namespace locdense {

/// Coordinate labels of a distribution: vertices of H or abstract indices.
using CoordinateSet = std::vector<int>;
using Tuple = std::vector<Vertex>;

inline constexpr double kRealMassTolerance = 1e-12;
inline constexpr std::size_t kSupportLimit = 10'000'000;

namespace detail {

template <class W>
bool is_unit_sum(const W& sum) {
  if constexpr (std::is_floating_point_v<W>) {
    return std::abs(sum - 1.0) <= kRealMassTolerance;
  } else {
    return sum == 1;
  }
}

template <class W>
double as_double(const W& w) {
  if constexpr (std::is_floating_point_v<W>) {
    return w;
  } else {
    return to_double(w);
  }
}

inline void check_coordinates(const CoordinateSet& coords) {
  auto sorted = coords;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("coordinate set repeats a label");
}

}  // namespace detail

/// Probability mass over tuples in V^coords with V = {0, ..., alphabet-1}.
/// Weight is Rational (exact) or double (mass sums to 1 within 1e-12).
template <class Weight>
class Distribution {
public:
  using Mass = std::map<Tuple, Weight>;

  Distribution() = default;

  Distribution(CoordinateSet coords, int alphabet, Mass mass)
      : coords_(std::move(coords)), alphabet_(alphabet) {
    detail::check_coordinates(coords_);
    if (alphabet_ < 0) throw InputError("negative alphabet size");
    Weight total = 0;
    for (auto& [tuple, w] : mass) {
      if (tuple.size() != coords_.size())
        throw InputError("tuple length does not match the coordinate count");
      for (Vertex x : tuple)
        if (x < 0 || x >= alphabet_) throw InputError("tuple value outside the alphabet");
      if (w < 0) throw InputError("negative probability mass");
      total += w;
      if (w != 0) mass_.emplace(tuple, w);
    }
    if (!detail::is_unit_sum(total)) throw InputError("distribution is not normalized");
  }

  const CoordinateSet& coords() const noexcept { return coords_; }
  int alphabet() const noexcept { return alphabet_; }
  const Mass& mass() const noexcept { return mass_; }
  std::size_t support_size() const noexcept { return mass_.size(); }

  Weight probability(const Tuple& t) const {
    auto it = mass_.find(t);
    return it == mass_.end() ? Weight(0) : it->second;
  }

  /// Same mass with coordinate labels replaced position by position.
  Distribution relabeled(CoordinateSet coords) const {
    if (coords.size() != coords_.size()) throw InputError("relabel needs one label per coordinate");
    Distribution out = *this;
    detail::check_coordinates(coords);
    out.coords_ = std::move(coords);
    return out;
  }

private:
  struct Unchecked {};
  Distribution(Unchecked, CoordinateSet coords, int alphabet, Mass mass)
      : coords_(std::move(coords)), alphabet_(alphabet), mass_(std::move(mass)) {}

  template <class W>
  friend Distribution<W> make_unchecked(CoordinateSet, int, typename Distribution<W>::Mass);

  CoordinateSet coords_;
  int alphabet_ = 0;
  Mass mass_;
};

using RationalDistribution = Distribution<Rational>;
using RealDistribution = Distribution<double>;

/// Internal constructor for results whose normalization follows from construction.
template <class W>
Distribution<W> make_unchecked(CoordinateSet coords, int alphabet, typename Distribution<W>::Mass mass) {
  return Distribution<W>(typename Distribution<W>::Unchecked{}, std::move(coords), alphabet, std::move(mass));
}

inline RealDistribution to_real(const RationalDistribution& d) {
  RealDistribution::Mass mass;
  for (const auto& [t, w] : d.mass()) mass.emplace(t, to_double(w));
  return make_unchecked<double>(d.coords(), d.alphabet(), std::move(mass));
}

/// Uniform distribution on Hom(j, g); coordinates are the vertices 0..|V(j)|-1 of j.
inline RationalDistribution uniform_hom_distribution(const Graph& j, const Graph& g) {
  std::vector<Tuple> homs;
  for_each_homomorphism(j, g, [&](std::span<const Vertex> image) {
    homs.emplace_back(image.begin(), image.end());
    if (homs.size() > kSupportLimit) throw LimitError("more than 10^7 homomorphisms to materialize");
  });
  if (homs.empty())
    throw PreconditionError("uniform homomorphism distribution needs Hom(J,G) to be non-empty");
  Rational each(1, static_cast<long long>(homs.size()));
  RationalDistribution::Mass mass;
  for (auto& t : homs) mass.emplace(std::move(t), each);
  CoordinateSet coords(j.vertex_count());
  for (int i = 0; i < j.vertex_count(); ++i) coords[i] = i;
  return make_unchecked<Rational>(std::move(coords), g.vertex_count(), std::move(mass));
}

namespace detail {

template <class W>
std::vector<std::size_t> positions_of(const Distribution<W>& d, const CoordinateSet& subset) {
  std::vector<std::size_t> pos;
  for (int c : subset) {
    auto it = std::find(d.coords().begin(), d.coords().end(), c);
    if (it == d.coords().end())
      throw InputError("coordinate " + std::to_string(c) + " is not a coordinate of the distribution");
    pos.push_back(static_cast<std::size_t>(it - d.coords().begin()));
  }
  return pos;
}

inline Tuple project(const Tuple& t, const std::vector<std::size_t>& pos) {
  Tuple out;
  out.reserve(pos.size());
  for (std::size_t p : pos) out.push_back(t[p]);
  return out;
}

}  // namespace detail

/// Marginal on `subset`, with coordinates in the order given.
template <class W>
Distribution<W> marginal(const Distribution<W>& d, const CoordinateSet& subset) {
  detail::check_coordinates(subset);
  auto pos = detail::positions_of(d, subset);
  typename Distribution<W>::Mass mass;
  for (const auto& [t, w] : d.mass()) mass[detail::project(t, pos)] += w;
  return make_unchecked<W>(subset, d.alphabet(), std::move(mass));
}

/// Shannon entropy in bits, Neumaier-compensated. Terms with p = 0 contribute 0.
template <class W>
double entropy_bits(const Distribution<W>& d) {
  W total = 0;
  for (const auto& [t, w] : d.mass()) total += w;
  if (!detail::is_unit_sum(total)) throw InputError("entropy of an unnormalized distribution");
  double sum = 0.0, compensation = 0.0;
  for (const auto& [t, w] : d.mass()) {
    double p = detail::as_double(w);
    if (p <= 0.0) continue;
    double term = -p * std::log2(p);
    double next = sum + term;
    if (std::abs(sum) >= std::abs(term))
      compensation += (sum - next) + term;
    else
      compensation += (term - next) + sum;
    sum = next;
  }
  return sum + compensation;
}

/// I(A; B | C) = H(A,C) + H(B,C) - H(A,B,C) - H(C), in bits.
template <class W>
double conditional_mutual_information(const Distribution<W>& d, const CoordinateSet& a, const CoordinateSet& b,
                                      const CoordinateSet& c) {
  auto join = [](CoordinateSet x, const CoordinateSet& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  return entropy_bits(marginal(d, join(a, c))) + entropy_bits(marginal(d, join(b, c))) -
         entropy_bits(marginal(d, join(join(a, b), c))) - entropy_bits(marginal(d, c));
}

/// Sets of coordinates joined by a tree with the running-intersection property.
struct MarkovTree {
  std::vector<CoordinateSet> sets;
  std::vector<TreeEdge> tree_edges;
};

/// Throws StructureError for a non-tree, InputError for repeated labels or a failed
/// running intersection.
inline void validate_markov_tree(const MarkovTree& m) {
  check_tree(static_cast<int>(m.sets.size()), m.tree_edges);
  std::map<int, std::vector<std::size_t>> holders;
  for (std::size_t i = 0; i < m.sets.size(); ++i) {
    detail::check_coordinates(m.sets[i]);
    for (int c : m.sets[i]) holders[c].push_back(i);
  }
  auto adj = tree_adjacency(static_cast<int>(m.sets.size()), m.tree_edges);
  for (const auto& [c, list] : holders) {
    std::vector<char> holds(m.sets.size(), 0), seen(m.sets.size(), 0);
    for (auto i : list) holds[i] = 1;
    std::vector<std::size_t> stack{list[0]};
    seen[list[0]] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (int y : adj[x])
        if (holds[y] && !seen[y]) {
          seen[y] = 1;
          ++reached;
          stack.push_back(y);
        }
    }
    if (reached != list.size())
      throw InputError("Markov tree violates running intersection at coordinate " + std::to_string(c));
  }
}

/// Locals on adjacent sets disagree on their shared coordinates.
class MarginalMismatch : public PreconditionError {
public:
  MarginalMismatch(TreeEdge edge, Tuple worst, double deviation)
      : PreconditionError("marginals disagree on tree edge (" + std::to_string(edge.first) + "," +
                          std::to_string(edge.second) + "); max deviation " + std::to_string(deviation) +
                          " at separator tuple " + describe(worst)),
        edge_(edge), worst_(std::move(worst)), deviation_(deviation) {}

  TreeEdge edge() const noexcept { return edge_; }
  const Tuple& worst_tuple() const noexcept { return worst_; }
  double deviation() const noexcept { return deviation_; }

private:
  static std::string describe(const Tuple& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + std::to_string(t[i]);
    return s + ")";
  }

  TreeEdge edge_;
  Tuple worst_;
  double deviation_;
};

struct GlueStep {
  int set = -1;
  int attached_to = -1;  // -1 for the starting set
  CoordinateSet separator;
  CoordinateSet added;
};

struct EntropyAudit {
  std::vector<double> set_entropies;        // one per set
  std::vector<double> separator_entropies;  // one per tree edge
  double lhs = 0.0;  // entropy of the glued joint
  double rhs = 0.0;  // sum of set entropies minus sum of separator entropies
  double gap = 0.0;  // |lhs - rhs|
};

template <class W>
struct GluedJoint {
  Distribution<W> joint;  // coordinates in ascending label order
  EntropyAudit audit;
  std::vector<GlueStep> steps;
};

/// Glues local distributions along a Markov tree. The tree is peeled by repeatedly removing
/// the lowest-indexed leaf; the joint is then grown in reverse peel order, each new set's
/// fresh coordinates drawn conditionally independent of everything so far given the
/// separator. Separator values of zero mass receive zero mass.
template <class W>
GluedJoint<W> glue_markov_tree(const MarkovTree& m, const std::vector<Distribution<W>>& locals) {
  validate_markov_tree(m);
  int k = static_cast<int>(m.sets.size());
  if (static_cast<int>(locals.size()) != k) throw InputError("glue needs exactly one local distribution per set");
  if (k == 0) throw InputError("glue needs at least one set");
  int alphabet = locals[0].alphabet();
  for (int i = 0; i < k; ++i) {
    auto a = locals[i].coords(), b = m.sets[i];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw InputError("local " + std::to_string(i) + " does not have the coordinates of its set");
    if (locals[i].alphabet() != alphabet) throw InputError("locals use different alphabets");
  }

  GluedJoint<W> out;
  for (std::size_t e = 0; e < m.tree_edges.size(); ++e) {
    auto [a, b] = m.tree_edges[e];
    CoordinateSet sep = intersect(m.sets[a], m.sets[b]);
    auto ma = marginal(locals[a], sep), mb = marginal(locals[b], sep);
    double worst = 0.0;
    Tuple worst_tuple;
    bool mismatch = false;
    auto consider = [&](const Tuple& t) {
      W diff = ma.probability(t) - mb.probability(t);
      if (diff < 0) diff = -diff;
      double dd = detail::as_double(diff);
      bool bad;
      if constexpr (std::is_floating_point_v<W>)
        bad = dd > kRealMassTolerance;
      else
        bad = diff != 0;
      if (bad) mismatch = true;
      if (bad && (worst_tuple.empty() || dd > worst)) {
        worst = dd;
        worst_tuple = t;
      }
    };
    for (const auto& [t, w] : ma.mass()) consider(t);
    for (const auto& [t, w] : mb.mass()) consider(t);
    if (mismatch) throw MarginalMismatch(m.tree_edges[e], worst_tuple, worst);
    out.audit.separator_entropies.push_back(entropy_bits(ma));
  }
  for (const auto& local : locals) out.audit.set_entropies.push_back(entropy_bits(local));

  // Peel leaves in ascending index order.
  auto adj = tree_adjacency(k, m.tree_edges);
  std::vector<int> degree(k);
  std::vector<char> removed(k, 0);
  for (int i = 0; i < k; ++i) degree[i] = static_cast<int>(adj[i].size());
  std::vector<std::pair<int, int>> peeled;
  for (int remaining = k; remaining > 1; --remaining) {
    int leaf = 0;
    while (removed[leaf] || degree[leaf] != 1) ++leaf;
    int parent = -1;
    for (int y : adj[leaf])
      if (!removed[y]) parent = y;
    removed[leaf] = 1;
    --degree[parent];
    peeled.emplace_back(leaf, parent);
  }
  int root = 0;
  while (removed[root]) ++root;

  CoordinateSet covered = locals[root].coords();
  typename Distribution<W>::Mass joint = locals[root].mass();
  out.steps.push_back({root, -1, {}, covered});

  for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) {
    auto [set, parent] = *it;
    const auto& local = locals[set];
    CoordinateSet sep, added;
    for (int c : local.coords())
      (std::find(covered.begin(), covered.end(), c) != covered.end() ? sep : added).push_back(c);
    std::vector<std::size_t> sep_in_local, added_in_local, sep_in_joint;
    for (int c : sep) {
      sep_in_local.push_back(std::find(local.coords().begin(), local.coords().end(), c) - local.coords().begin());
      sep_in_joint.push_back(std::find(covered.begin(), covered.end(), c) - covered.begin());
    }
    for (int c : added)
      added_in_local.push_back(std::find(local.coords().begin(), local.coords().end(), c) - local.coords().begin());

    std::map<Tuple, std::pair<W, std::vector<std::pair<Tuple, W>>>> groups;
    for (const auto& [t, w] : local.mass()) {
      auto& g = groups[detail::project(t, sep_in_local)];
      g.first += w;
      g.second.emplace_back(detail::project(t, added_in_local), w);
    }
    typename Distribution<W>::Mass next;
    for (const auto& [x, w] : joint) {
      auto g = groups.find(detail::project(x, sep_in_joint));
      if (g == groups.end() || g->second.first == 0) continue;
      for (const auto& [y, wl] : g->second.second) {
        Tuple t = x;
        t.insert(t.end(), y.begin(), y.end());
        next.emplace(std::move(t), w * wl / g->second.first);
      }
      if (next.size() > kSupportLimit) throw LimitError("glued joint support exceeds 10^7 tuples");
    }
    joint = std::move(next);
    covered.insert(covered.end(), added.begin(), added.end());
    out.steps.push_back({set, parent, sep, added});
  }

  CoordinateSet sorted = covered;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> order;
  for (int c : sorted) order.push_back(std::find(covered.begin(), covered.end(), c) - covered.begin());
  typename Distribution<W>::Mass reordered;
  for (auto& [t, w] : joint) reordered.emplace(detail::project(t, order), w);
  out.joint = make_unchecked<W>(sorted, alphabet, std::move(reordered));

  out.audit.lhs = entropy_bits(out.joint);
  double rhs = 0.0;
  for (double h : out.audit.set_entropies) rhs += h;
  for (double h : out.audit.separator_entropies) rhs -= h;
  out.audit.rhs = rhs;
  out.audit.gap = std::abs(out.audit.lhs - rhs);
  return out;
}

struct TreeHomSupport {
  std::size_t support_size = 0;
  bool support_in_hom = false;
  Integer hom_count;           // |Hom(H,G)|
  Integer pattern_hom_count;   // |Hom(J,G)|
  std::vector<Integer> separator_hom_counts;
  double entropy = 0.0;        // entropy of the glued random homomorphism
  double entropy_rhs = 0.0;    // |F| log|Hom(J,G)| - sum of separator entropies
  double counting_rhs = 0.0;   // |F| log|Hom(J,G)| - sum of log|Hom(H[X∩Y],G)|
  double log2_hom_count = 0.0;
  EntropyAudit audit;
  /// support_in_hom, support_size <= hom_count, entropy <= log2 support (+1e-9),
  /// and counting_rhs <= entropy_rhs <= log2_hom_count (+1e-9).
  bool holds = false;
};

inline double log2_integer(const Integer& x) {
  if (x <= 0) return -INFINITY;
  std::size_t bits = boost::multiprecision::msb(x);
  if (bits < 1000) return std::log2(x.convert_to<double>());
  Integer shifted = x >> (bits - 60);
  return std::log2(shifted.convert_to<double>()) + static_cast<double>(bits - 60);
}

/// Pushes the uniform distribution on Hom(J,G) into every bag, glues along the
/// decomposition and checks that the result is a random homomorphism H -> G.
inline TreeHomSupport verify_tree_hom_support(const Graph& h, const JDecomposition& jd, const Graph& g) {
  RationalDistribution base = uniform_hom_distribution(jd.pattern, g);
  std::vector<RationalDistribution> locals;
  for (const auto& iso : jd.bag_isomorphisms) locals.push_back(base.relabeled(iso));
  MarkovTree m{jd.base.bags, jd.base.tree_edges};
  auto glued = glue_markov_tree(m, locals);

  TreeHomSupport r;
  r.audit = glued.audit;
  r.support_size = glued.joint.support_size();
  r.entropy = glued.audit.lhs;
  bool in_hom = static_cast<int>(glued.joint.coords().size()) == h.vertex_count();
  auto edges = h.edges();
  for (const auto& [t, w] : glued.joint.mass()) {
    if (!in_hom) break;
    for (auto [u, v] : edges)
      if (!g.adjacent(t[u], t[v])) {
        in_hom = false;
        break;
      }
  }
  r.support_in_hom = in_hom;
  r.hom_count = hom_count_td(h, g, jd.base);
  r.pattern_hom_count = Integer(base.support_size());
  r.log2_hom_count = log2_integer(r.hom_count);

  double f = static_cast<double>(jd.base.bags.size());
  double log_j = log2_integer(r.pattern_hom_count);
  r.entropy_rhs = f * log_j;
  for (double s : glued.audit.separator_entropies) r.entropy_rhs -= s;
  r.counting_rhs = f * log_j;
  for (const auto& sep : separators(jd.base, h)) {
    Integer c = hom_density_detailed(sep.induced, g).hom_count;
    r.separator_hom_counts.push_back(c);
    r.counting_rhs -= log2_integer(c);
  }
  constexpr double tol = 1e-9;
  r.holds = r.support_in_hom && Integer(r.support_size) <= r.hom_count &&
            r.entropy <= std::log2(static_cast<double>(r.support_size)) + tol &&
            r.counting_rhs <= r.entropy_rhs + tol && r.entropy_rhs <= r.log2_hom_count + tol;
  return r;
}

/// "v_1 ... v_m p/q" per support tuple in lexicographic order.
template <class W>
std::string emit_distribution(const Distribution<W>& d) {
  std::ostringstream out;
  if constexpr (std::is_floating_point_v<W>) out.precision(17);
  for (const auto& [t, w] : d.mass()) {
    for (Vertex x : t) out << x << ' ';
    if constexpr (std::is_floating_point_v<W>)
      out << w;
    else
      out << to_string(w);
    out << '\n';
  }
  return out.str();
}

/// Reads the dump format; weights may be "p/q", integers or decimals.
inline RationalDistribution parse_distribution(std::string_view text, CoordinateSet coords, int alphabet) {
  RationalDistribution::Mass mass;
  std::size_t pos = 0, line = 1;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::istringstream in{std::string(text.substr(pos, end - pos))};
    std::vector<std::string> toks;
    for (std::string tok; in >> tok;) toks.push_back(tok);
    if (!toks.empty() && toks[0][0] != '#') {
      if (toks.size() != coords.size() + 1)
        throw ParseError("expected " + std::to_string(coords.size()) + " values and a weight", line, pos);
      Tuple t;
      for (std::size_t i = 0; i < coords.size(); ++i) {
        try {
          t.push_back(std::stoi(toks[i]));
        } catch (const std::exception&) {
          throw ParseError("bad tuple value '" + toks[i] + "'", line, pos);
        }
      }
      Rational w;
      try {
        w = parse_rational(toks.back());
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line, pos);
      }
      if (!mass.emplace(std::move(t), w).second) throw ParseError("repeated tuple", line, pos);
    }
    pos = end + 1;
    ++line;
  }
  return RationalDistribution(std::move(coords), alphabet, std::move(mass));
}

}  // namespace locdense
