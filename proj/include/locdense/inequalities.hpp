#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "locdense/decomposition.hpp"
#include "locdense/dense.hpp"
#include "locdense/error.hpp"
#include "locdense/graph.hpp"
#include "locdense/graph_io.hpp"
#include "locdense/homcount.hpp"
#include "locdense/named_graphs.hpp"
#include "locdense/rational.hpp"
#include "locdense/treewidth.hpp"

namespace locdense {

using json = nlohmann::json;

/// One inequality check, always stated as lhs >= rhs.
struct IneqReport {
  std::string check;
  json inputs = json::object();
  std::string digest;
  Rational lhs;
  Rational rhs;
  bool holds = false;
  /// A failure of a theorem-backed check is a bug; other checks are informational.
  bool theorem_backed = false;
  std::vector<std::string> notes;
  json witnesses = json::object();

  Rational slack() const { return lhs - rhs; }
};

/// Parameters shared by the checks; each check reads only the fields it uses.
struct CheckRequest {
  Rational eta = 0;
  Rational delta = 0;
  std::optional<Rational> d;
  std::optional<Rational> rho;
  std::optional<int> r;
  std::optional<int> ell;
  std::optional<int> t;
  std::optional<int> m;
  std::vector<int> parts;
  std::vector<int> sparts;
};

inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json to_json(const IneqReport& r) {
  return {{"check", r.check},     {"inputs", r.inputs},      {"digest", r.digest},
          {"lhs", to_string(r.lhs)}, {"rhs", to_string(r.rhs)}, {"slack", to_string(r.slack())},
          {"holds", r.holds},     {"theorem_backed", r.theorem_backed},
          {"notes", r.notes},     {"witnesses", r.witnesses}};
}

namespace detail {

inline IneqReport start(std::string check, json inputs, bool theorem_backed) {
  IneqReport r;
  r.check = std::move(check);
  r.inputs = std::move(inputs);
  r.theorem_backed = theorem_backed;
  return r;
}

inline IneqReport finish(IneqReport r) {
  r.digest = fnv1a_hex(r.inputs.dump());
  r.holds = r.slack() >= 0;
  return r;
}

inline const Rational& require(const std::optional<Rational>& v, const char* name) {
  if (!v) throw InputError(std::string("missing parameter ") + name);
  return *v;
}

inline int require(const std::optional<int>& v, const char* name) {
  if (!v) throw InputError(std::string("missing parameter ") + name);
  return *v;
}

/// Records whether G is exactly certified (rho, d)-dense when rho is supplied.
inline void certify_density(IneqReport& r, const Graph& g, const CheckRequest& req, const Rational& d) {
  if (!req.rho) {
    r.notes.push_back("local density not certified (no rho supplied)");
    return;
  }
  r.inputs["rho"] = to_string(*req.rho);
  if (g.vertex_count() > kExactDenseLimit || g.vertex_count() == 0) {
    r.notes.push_back("local density not certified (graph above the exact limit)");
    return;
  }
  auto verdict = is_locally_dense(g, {*req.rho, d});
  r.witnesses["min_subset_ratio"] = to_string(verdict.min_ratio);
  r.witnesses["density_certified"] = verdict.holds;
  if (verdict.holds) {
    r.notes.push_back("hypothesis certified: G is (rho,d)-dense");
  } else {
    r.notes.push_back("hypothesis violated: G is not (rho,d)-dense for this d (min ratio " +
                      to_string(verdict.min_ratio) + ")");
    r.witnesses["density_witness"] = *verdict.witness;
  }
}

}  // namespace detail

/// Path decomposition of P(l) with bags {i, i+1}.
inline TreeDecomposition path_decomposition(int length) {
  TreeDecomposition d;
  if (length == 0) {
    d.bags.push_back({0});
    return d;
  }
  for (int i = 0; i < length; ++i) d.bags.push_back({i, i + 1});
  for (int i = 0; i + 1 < length; ++i) d.tree_edges.emplace_back(i, i + 1);
  return d;
}

inline Rational path_density(const Graph& g, int length) {
  auto d = path_decomposition(length);
  return Rational(hom_count_td(path_graph(length), g, d),
                  ipow(Integer(g.vertex_count()), static_cast<unsigned>(length + 1)));
}

/// t_H(G) >= t_J(G)^|F| / prod over tree edges XY of t_{H[X∩Y]}(G).
inline IneqReport check_tree_hom(const Graph& h, const JDecomposition& jd, const Graph& g) {
  auto r = detail::start("tree-hom",
                         {{"H", emit_graph6(h)}, {"J", emit_graph6(jd.pattern)}, {"G", emit_graph6(g)},
                          {"bags", jd.base.bags}, {"tree", jd.base.tree_edges}},
                         true);
  auto pattern = hom_density_detailed(jd.pattern, g);
  if (pattern.hom_count == 0) throw PreconditionError("tree-hom check needs Hom(J,G) to be non-empty");
  Integer count = hom_count_td(h, g, jd.base);
  r.lhs = Rational(count, ipow(Integer(g.vertex_count()), static_cast<unsigned>(h.vertex_count())));
  Rational rhs = rpow(pattern.density, static_cast<unsigned>(jd.base.bags.size()));
  json seps = json::array();
  for (const auto& sep : separators(jd.base, h)) {
    Rational t = hom_density(sep.induced, g);
    rhs /= t;
    seps.push_back({{"edge", sep.edge}, {"common", sep.common}, {"density", to_string(t)}});
  }
  r.rhs = rhs;
  r.witnesses = {{"hom_count", count.str()}, {"pattern_density", to_string(pattern.density)}, {"separators", seps}};
  return detail::finish(std::move(r));
}

enum class KnrsExponent { edge_count, treewidth_corollary };

/// t_H(G) >= d^e - eta with e = |E(H)|, or e = (t(t+1)/2 + 1) m for tree-width t and m edges.
inline IneqReport check_knrs_instance(const Graph& h, const Graph& g, const CheckRequest& req,
                                      KnrsExponent mode = KnrsExponent::edge_count) {
  const Rational& d = detail::require(req.d, "d");
  auto r = detail::start("knrs",
                         {{"H", emit_graph6(h)}, {"G", emit_graph6(g)}, {"d", to_string(d)}, {"eta", to_string(req.eta)},
                          {"mode", mode == KnrsExponent::edge_count ? "edges" : "treewidth"}},
                         false);
  unsigned exponent = static_cast<unsigned>(h.edge_count());
  if (mode == KnrsExponent::treewidth_corollary) {
    int t = req.t ? *req.t : treewidth_exact(h).width;
    int m = req.m ? *req.m : static_cast<int>(h.edge_count());
    if (t < 0 || m < 0) throw InputError("tree-width and edge count must be nonnegative");
    exponent = static_cast<unsigned>((t * (t + 1) / 2 + 1) * m);
    r.inputs["t"] = t;
    r.inputs["m"] = m;
  }
  r.witnesses["exponent"] = exponent;
  detail::certify_density(r, g, req, d);
  r.lhs = hom_density(h, g);
  r.rhs = rpow(d, exponent) - req.eta;
  r.notes.push_back("informational: the bound is only asserted for sufficiently large dense graphs");
  return detail::finish(std::move(r));
}

/// t_{K(parts)}(G) >= (d^e - delta) t_{K(smaller)}(G). Without sparts the smaller graph
/// drops one vertex of the first part and e = sum(parts) - parts[0]; with sparts
/// (componentwise <= parts) e is the difference of edge counts.
inline IneqReport check_multipartite_ratio(const Graph& g, const CheckRequest& req) {
  const Rational& d = detail::require(req.d, "d");
  if (req.parts.empty()) throw InputError("multipartite check needs parts");
  for (int p : req.parts)
    if (p < 0) throw InputError("negative part size");
  std::vector<int> smaller;
  unsigned exponent = 0;
  Graph big = complete_multipartite(req.parts);
  if (req.sparts.empty()) {
    if (req.parts[0] < 1) throw InputError("the first part must be positive");
    smaller = req.parts;
    --smaller[0];
    int total = 0;
    for (int p : req.parts) total += p;
    exponent = static_cast<unsigned>(total - req.parts[0]);
  } else {
    if (req.sparts.size() != req.parts.size()) throw InputError("parts and sparts differ in length");
    for (std::size_t i = 0; i < req.parts.size(); ++i) {
      if (req.sparts[i] < 0) throw InputError("negative part size");
      if (req.sparts[i] > req.parts[i]) throw InputError("sparts must be componentwise at most parts");
    }
    smaller = req.sparts;
    exponent = static_cast<unsigned>(big.edge_count() - complete_multipartite(smaller).edge_count());
  }
  auto r = detail::start("multi",
                         {{"G", emit_graph6(g)}, {"parts", req.parts}, {"sparts", req.sparts}, {"d", to_string(d)},
                          {"delta", to_string(req.delta)}},
                         false);
  detail::certify_density(r, g, req, d);
  Rational small_density = hom_density(complete_multipartite(smaller), g);
  r.lhs = hom_density(big, g);
  r.rhs = (rpow(d, exponent) - req.delta) * small_density;
  r.witnesses = {{"exponent", exponent}, {"smaller_parts", smaller}, {"smaller_density", to_string(small_density)}};
  r.notes.push_back("informational: the bound is only asserted for sufficiently large dense graphs");
  return detail::finish(std::move(r));
}

inline constexpr int kMaxLogconvexK = 6;

/// Squared Cauchy-Schwarz forms over even paths up to P(2 kmax):
///   t_{P(2k+2)} t_{P(2k-2)} >= t_{P(2k)}^2   for 1 <= k < kmax
///   t_{P(2k)} t_{P(2s)} >= t_{P(k+s)}^2      for 0 <= s < k <= kmax
inline std::vector<IneqReport> check_logconvex_paths(const Graph& g, int kmax) {
  if (kmax < 1 || kmax > kMaxLogconvexK) throw InputError("kmax must lie in 1..6");
  if (g.vertex_count() == 0) throw InputError("path densities are undefined for an empty graph");
  std::vector<Rational> t;
  for (int len = 0; len <= 2 * kmax; ++len) t.push_back(path_density(g, len));
  std::vector<IneqReport> out;
  std::string g6 = emit_graph6(g);
  for (int k = 1; k < kmax; ++k) {
    auto r = detail::start("logconvex", {{"G", g6}, {"form", "adjacent"}, {"k", k}}, true);
    r.lhs = t[2 * k + 2] * t[2 * k - 2];
    r.rhs = t[2 * k] * t[2 * k];
    out.push_back(detail::finish(std::move(r)));
  }
  for (int k = 1; k <= kmax; ++k)
    for (int s = 0; s < k; ++s) {
      auto r = detail::start("logconvex", {{"G", g6}, {"form", "cauchy-schwarz"}, {"k", k}, {"t", s}}, true);
      r.lhs = t[2 * k] * t[2 * s];
      r.rhs = t[k + s] * t[k + s];
      out.push_back(detail::finish(std::move(r)));
    }
  return out;
}

/// t_{P(2r)}(G)^l >= t_{P(l)}(G)^{2r}, the integer-power form of t_{P(l)} <= t_{P(2r)}^{l/2r}.
inline IneqReport check_path_domination(const Graph& g, int ell, int r) {
  if (ell < 1 || ell >= 2 * r) throw InputError("path domination needs positive integers l < 2r");
  if (2 * r > 12) throw InputError("path domination is limited to 2r <= 12");
  if (g.vertex_count() == 0) throw InputError("path densities are undefined for an empty graph");
  auto rep = detail::start("paths", {{"G", emit_graph6(g)}, {"ell", ell}, {"r", r}}, true);
  Rational shorter = path_density(g, ell), longer = path_density(g, 2 * r);
  rep.lhs = rpow(longer, static_cast<unsigned>(ell));
  rep.rhs = rpow(shorter, static_cast<unsigned>(2 * r));
  rep.witnesses = {{"t_short", to_string(shorter)}, {"t_long", to_string(longer)}};
  return detail::finish(std::move(rep));
}

/// t_{C(2r+1)}(G)^l >= (d - delta)^l t_{P(l)}(G)^{2r}, the power form of
/// t_{C(2r+1)} >= (d - delta) t_{P(l)}^{2r/l}. With d <= delta the right side is
/// nonpositive and the check holds trivially.
inline IneqReport check_cycle_path(const Graph& g, const CheckRequest& req) {
  const Rational& d = detail::require(req.d, "d");
  int r = detail::require(req.r, "r");
  int ell = detail::require(req.ell, "ell");
  if (r < 1 || 2 * r + 1 > 11) throw InputError("cycle-path needs 1 <= r and 2r+1 <= 11");
  if (ell < 1 || ell > 2 * r) throw InputError("cycle-path needs 1 <= l <= 2r");
  auto rep = detail::start("cycle-path",
                           {{"G", emit_graph6(g)}, {"r", r}, {"ell", ell}, {"d", to_string(d)},
                            {"delta", to_string(req.delta)}},
                           false);
  detail::certify_density(rep, g, req, d);
  Rational cycle = hom_density(cycle_graph(2 * r + 1), g);
  Rational path = path_density(g, ell);
  rep.lhs = rpow(cycle, static_cast<unsigned>(ell));
  if (d - req.delta <= 0) {
    rep.rhs = 0;
    rep.notes.push_back("degenerate: d - delta <= 0, so the right side is nonpositive and the bound is trivial");
  } else {
    rep.rhs = rpow(d - req.delta, static_cast<unsigned>(ell)) * rpow(path, static_cast<unsigned>(2 * r));
  }
  rep.witnesses = {{"t_cycle", to_string(cycle)}, {"t_path", to_string(path)}};
  rep.notes.push_back("informational: the bound is only asserted for sufficiently large dense graphs");
  return detail::finish(std::move(rep));
}

/// Compares a homomorphism density against a constant; used for explicit claims in corpora.
inline IneqReport check_density_claim(const Graph& h, const Graph& g, const std::string& op, const Rational& value) {
  if (op != ">=" && op != "<=") throw InputError("claim operator must be >= or <=");
  auto r = detail::start("claim", {{"H", emit_graph6(h)}, {"G", emit_graph6(g)}, {"op", op}, {"value", to_string(value)}},
                         true);
  Rational t = hom_density(h, g);
  r.lhs = op == ">=" ? t : value;
  r.rhs = op == ">=" ? value : t;
  r.witnesses["density"] = to_string(t);
  return detail::finish(std::move(r));
}

/// Exact solution of a square system by Gauss-Jordan elimination.
inline std::vector<Rational> solve_linear_system(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw InputError("singular linear system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      Rational factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

struct ChainResult {
  int r = 0;
  int ell = 0;
  std::vector<Rational> state;     // iterated distribution on states 1..r (index 0 is state 1)
  std::uint64_t steps = 0;         // iterations performed
  bool converged = false;          // both absorbing masses within tolerance of the closed form
  bool interior_monotone = true;   // interior mass never increased
  Rational deviation;              // max |iterated - closed form| over the absorbing states
  std::vector<double> interior_tail;  // interior mass over the last few steps
  Rational solved_first, solved_last;  // absorption probabilities by linear elimination
  Rational closed_first, closed_last;  // (r-l)/(r-1) and (l-1)/(r-1)
};

/// Exponent-vector chain on 1..r: interior mass moves half to each neighbour, 1 and r
/// absorb. Iterates exactly from a point mass at l until both absorbing masses are within
/// `tolerance` of the closed form or `max_steps` is reached, and separately solves the
/// absorption probabilities exactly.
inline ChainResult absorbing_chain(int r, int ell, std::uint64_t max_steps, const Rational& tolerance = Rational(1, 10'000'000'000LL)) {
  if (r < 2) throw InputError("absorbing chain needs r >= 2");
  if (ell < 1 || ell > r) throw InputError("absorbing chain needs 1 <= l <= r");
  ChainResult out;
  out.r = r;
  out.ell = ell;
  out.closed_first = Rational(r - ell, r - 1);
  out.closed_last = Rational(ell - 1, r - 1);

  // Probabilities of absorption at r (h) and at 1 (g) from every start.
  std::vector<std::vector<Rational>> a(r, std::vector<Rational>(r, 0));
  std::vector<Rational> to_last(r, 0), to_first(r, 0);
  a[0][0] = 1;
  a[r - 1][r - 1] = 1;
  to_last[r - 1] = 1;
  to_first[0] = 1;
  for (int k = 1; k + 1 < r; ++k) {
    a[k][k] = 1;
    a[k][k - 1] = Rational(-1, 2);
    a[k][k + 1] = Rational(-1, 2);
  }
  out.solved_last = solve_linear_system(a, to_last)[ell - 1];
  out.solved_first = solve_linear_system(a, to_first)[ell - 1];

  // State is numer[k] / 2^steps.
  std::vector<Integer> numer(r, 0), next(r);
  numer[ell - 1] = 1;
  Integer scale = 1;
  auto interior = [&](const std::vector<Integer>& v) {
    Integer s = 0;
    for (int k = 1; k + 1 < r; ++k) s += v[k];
    return s;
  };
  auto is_interior = [&](int k) { return k > 0 && k < r - 1; };
  auto deviation = [&] {
    Rational first = Rational(numer[0], scale) - out.closed_first;
    Rational last = Rational(numer[r - 1], scale) - out.closed_last;
    if (first < 0) first = -first;
    if (last < 0) last = -last;
    return first > last ? first : last;
  };
  out.deviation = deviation();
  while (out.deviation > tolerance && out.steps < max_steps) {
    for (int k = 0; k < r; ++k) {
      Integer v = (k == 0 || k == r - 1) ? Integer(2 * numer[k]) : Integer(0);
      if (k > 0 && is_interior(k - 1)) v += numer[k - 1];
      if (k + 1 < r && is_interior(k + 1)) v += numer[k + 1];
      next[k] = v;
    }
    if (interior(next) > 2 * interior(numer)) out.interior_monotone = false;
    numer.swap(next);
    scale *= 2;
    ++out.steps;
    out.deviation = deviation();
    out.interior_tail.push_back(to_double(Rational(interior(numer), scale)));
    if (out.interior_tail.size() > 8) out.interior_tail.erase(out.interior_tail.begin());
  }
  out.converged = out.deviation <= tolerance;
  for (int k = 0; k < r; ++k) out.state.push_back(Rational(numer[k], scale));
  return out;
}

inline json to_json(const ChainResult& c) {
  std::vector<double> state;
  for (const auto& s : c.state) state.push_back(to_double(s));
  return {{"r", c.r},
          {"ell", c.ell},
          {"steps", c.steps},
          {"converged", c.converged},
          {"interior_monotone", c.interior_monotone},
          {"deviation", to_double(c.deviation)},
          {"state", state},
          {"interior_tail", c.interior_tail},
          {"solved", {to_string(c.solved_first), to_string(c.solved_last)}},
          {"closed_form", {to_string(c.closed_first), to_string(c.closed_last)}}};
}

/// Report form of the chain: holds when the iterated state is within `tolerance` and the
/// linear solve reproduces the closed form exactly.
inline IneqReport check_absorbing_chain(int r, int ell, std::uint64_t max_steps,
                                        const Rational& tolerance = Rational(1, 10'000'000'000LL)) {
  auto c = absorbing_chain(r, ell, max_steps, tolerance);
  auto rep = detail::start("chain", {{"r", r}, {"ell", ell}, {"steps", max_steps}}, true);
  bool exact = c.solved_first == c.closed_first && c.solved_last == c.closed_last;
  rep.lhs = tolerance;
  rep.rhs = c.deviation + (exact ? Rational(0) : Rational(1));  // an inexact solve forces failure
  rep.witnesses = to_json(c);
  if (!exact) rep.notes.push_back("linear solve disagrees with the closed form");
  if (!c.converged) rep.notes.push_back("iteration did not reach the tolerance within the step budget");
  return detail::finish(std::move(rep));
}

}  // namespace locdense
