// Command-line front end. Every subcommand prints one JSON document, or with --quiet only
// its verdict line. Exit status: 0 success, 1 negative verdict, 2 bad input or limits.

#include <climits>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "locdense/locdense.hpp"

using namespace locdense;

namespace {

struct Outcome {
  json body;
  std::string verdict;
  int status = 0;
};

/// Graph arguments are file paths (".g6" means graph6, anything else an edge list) or
/// constructor expressions such as "C(5)".
Graph load_graph(const std::string& arg) {
  std::filesystem::path p(arg);
  if (std::filesystem::is_regular_file(p)) {
    auto text = read_text_file(p);
    return parse_graph(text, p.extension() == ".g6" ? GraphFormat::graph6 : GraphFormat::edge_list);
  }
  try {
    return make_named_graph(arg);
  } catch (const ParseError&) {
    throw InputError("'" + arg + "' is neither a readable file nor a graph expression");
  }
}

std::optional<Rational> rational_opt(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_rational(text);
}

json violation_json(const Violation& v) {
  return {{"axiom", axiom_name(v.axiom)}, {"bags", v.bags}, {"vertices", v.vertices}, {"message", v.message}};
}

json validation_json(const ValidationReport& r) {
  json out = {{"valid", r.valid}, {"width", r.width}, {"warnings", r.warnings}, {"violations", json::array()}};
  for (const auto& v : r.violations) out["violations"].push_back(violation_json(v));
  return out;
}

/// Long exact values are shortened to decimals in the verdict line; the JSON keeps them exact.
std::string short_form(const Rational& x) {
  std::string exact = to_string(x);
  if (exact.size() <= 40) return exact;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", to_double(x));
  return buf;
}

Outcome report_outcome(const IneqReport& r) {
  return {to_json(r),
          r.check + (r.holds ? " holds" : " fails") + ": lhs=" + short_form(r.lhs) + " rhs=" + short_form(r.rhs),
          r.holds ? 0 : 1};
}

/// Infers the alphabet as one more than the largest tuple value in the dump files.
int infer_alphabet(const std::vector<std::string>& texts) {
  int top = 0;
  for (const auto& text : texts) {
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
      std::istringstream in(line);
      std::vector<std::string> toks;
      for (std::string t; in >> t;) toks.push_back(t);
      if (toks.empty() || toks[0][0] == '#') continue;
      for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        try {
          top = std::max(top, std::stoi(toks[i]) + 1);
        } catch (const std::exception&) {
        }
      }
    }
  }
  return std::max(top, 1);
}

json error_json(const std::exception& e, const char* kind) {
  json out = {{"error", kind}, {"message", e.what()}};
  if (auto p = dynamic_cast<const ParseError*>(&e)) out["line"] = p->line(), out["offset"] = p->offset();
  if (auto c = dynamic_cast<const ConfigError*>(&e)) out["pointer"] = c->pointer();
  if (auto m = dynamic_cast<const MarginalMismatch*>(&e)) out["edge"] = {m->edge().first, m->edge().second};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact homomorphism densities, decompositions and locally dense graph checks"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "print only the verdict line");
  std::function<Outcome()> action;

  // density
  auto density = app.add_subcommand("density", "homomorphism count and density t_H(G)");
  std::string dh, dg, method = "auto";
  density->add_option("H", dh, "pattern graph")->required();
  density->add_option("G", dg, "target graph")->required();
  density->add_option("--method", method, "auto, brute or td")->check(CLI::IsMember({"auto", "brute", "td"}));
  density->callback([&] {
    action = [&] {
      Graph h = load_graph(dh), g = load_graph(dg);
      auto m = method == "brute" ? HomMethod::brute : method == "td" ? HomMethod::td : HomMethod::automatic;
      auto r = hom_density_detailed(h, g, m);
      const char* used = r.method == HomMethod::brute ? "brute" : "td";
      return Outcome{{{"H", emit_graph6(h)},
                      {"G", emit_graph6(g)},
                      {"hom_count", r.hom_count.str()},
                      {"density", to_string(r.density)},
                      {"method", used}},
                     "t_H(G) = " + to_string(r.density),
                     0};
    };
  });

  // decomp validate
  auto decomp = app.add_subcommand("decomp", "tree decomposition tools");
  decomp->require_subcommand(1);
  auto validate = decomp->add_subcommand("validate", "check the decomposition axioms");
  std::string vh, vd, vj;
  validate->add_option("H", vh, "graph")->required();
  validate->add_option("D", vd, "decomposition file")->required()->check(CLI::ExistingFile);
  validate->add_option("--pattern", vj, "pattern J for a J-decomposition");
  validate->callback([&] {
    action = [&] {
      Graph h = load_graph(vh);
      auto d = parse_tree_decomposition(read_text_file(vd));
      ValidationReport rep;
      json body;
      if (vj.empty()) {
        rep = validate_tree_decomposition(h, d);
      } else {
        auto jv = validate_j_decomposition(h, load_graph(vj), d);
        rep = jv.report;
        if (jv.decomposition) body["bag_isomorphisms"] = jv.decomposition->bag_isomorphisms;
      }
      body.update(validation_json(rep));
      return Outcome{body, rep.valid ? "valid (width " + std::to_string(rep.width) + ")" : "invalid", rep.valid ? 0 : 1};
    };
  });

  // glue
  auto glue = app.add_subcommand("glue", "glue local distributions along a Markov tree");
  std::string tree_file;
  std::vector<std::string> local_files;
  int alphabet = 0;
  glue->add_option("M", tree_file, "Markov tree in decomposition format (bags are coordinate sets)")
      ->required()
      ->check(CLI::ExistingFile);
  glue->add_option("locals", local_files, "one distribution dump per set")->required()->check(CLI::ExistingFile);
  glue->add_option("--alphabet", alphabet, "alphabet size (default: inferred)");
  glue->callback([&] {
    action = [&] {
      auto d = parse_tree_decomposition(read_text_file(tree_file));
      if (local_files.size() != d.bags.size())
        throw InputError("expected " + std::to_string(d.bags.size()) + " local distributions, got " +
                         std::to_string(local_files.size()));
      std::vector<std::string> texts;
      for (const auto& f : local_files) texts.push_back(read_text_file(f));
      int k = alphabet > 0 ? alphabet : infer_alphabet(texts);
      std::vector<RationalDistribution> locals;
      for (std::size_t i = 0; i < texts.size(); ++i) locals.push_back(parse_distribution(texts[i], d.bags[i], k));
      auto glued = glue_markov_tree(MarkovTree{d.bags, d.tree_edges}, locals);
      json joint = json::array();
      for (const auto& [t, w] : glued.joint.mass()) joint.push_back({{"tuple", t}, {"p", to_string(w)}});
      const auto& a = glued.audit;
      bool ok = a.gap <= 1e-9;
      char line[160];
      std::snprintf(line, sizeof line, "glued: support %zu, H=%.12g, gap %.3g", glued.joint.support_size(), a.lhs, a.gap);
      return Outcome{{{"coords", glued.joint.coords()},
                      {"alphabet", k},
                      {"joint", joint},
                      {"audit",
                       {{"lhs", a.lhs},
                        {"rhs", a.rhs},
                        {"gap", a.gap},
                        {"set_entropies", a.set_entropies},
                        {"separator_entropies", a.separator_entropies}}}},
                     line, ok ? 0 : 1};
    };
  });

  // dense
  auto dense = app.add_subcommand("dense", "decide (rho, d)-density");
  std::string dense_g, rho_text, d_text;
  bool exact = false, heuristic = false;
  std::uint64_t seed = 1, budget = 100000;
  dense->add_option("G", dense_g, "graph")->required();
  dense->add_option("--rho", rho_text, "rho as p/q")->required();
  dense->add_option("--d", d_text, "d as p/q")->required();
  auto exact_flag = dense->add_flag("--exact", exact, "exhaustive search (default)");
  dense->add_flag("--heuristic", heuristic, "randomized search for a violator")->excludes(exact_flag);
  dense->add_option("--seed", seed, "heuristic seed");
  dense->add_option("--budget", budget, "heuristic step budget");
  dense->callback([&] {
    action = [&] {
      Graph g = load_graph(dense_g);
      DensityParams p{parse_rational(rho_text), parse_rational(d_text)};
      json body = {{"G", emit_graph6(g)}, {"rho", to_string(p.rho)}, {"d", to_string(p.d)}};
      if (heuristic) {
        auto found = heuristic_violator(g, p, budget, seed);
        body.update({{"mode", "heuristic"}, {"seed", seed}, {"budget", budget}});
        if (found) {
          body.update({{"holds", false}, {"witness", *found}, {"witness_ratio", to_string(subset_ratio(g, *found))}});
          return Outcome{body, "not dense: certified violating subset", 1};
        }
        body["holds"] = nullptr;
        return Outcome{body, "inconclusive: no violator found", 0};
      }
      auto v = is_locally_dense(g, p);
      body.update({{"mode", "exact"}, {"holds", v.holds}, {"min_ratio", to_string(v.min_ratio)}});
      if (v.witness) body["witness"] = *v.witness;
      return Outcome{body, (v.holds ? "dense: min ratio " : "not dense: min ratio ") + to_string(v.min_ratio),
                     v.holds ? 0 : 1};
    };
  });

  // check
  auto check = app.add_subcommand("check", "inequality checks");
  check->require_subcommand(1);
  CheckRequest req;
  std::string c_h, c_j, c_d, c_g, c_rho, c_dval, c_eta, c_delta, mode = "edges";
  int c_r = 0, c_ell = 0, c_t = -1, c_m = -1, kmax = 3;
  std::uint64_t steps = 100000;
  std::vector<int> parts, sparts;
  auto numbers = [&](CLI::App* sub) {
    sub->add_option("--d", c_dval, "d as p/q");
    sub->add_option("--rho", c_rho, "rho as p/q; certifies density when given");
  };
  auto fill = [&] {
    req.d = rational_opt(c_dval);
    req.rho = rational_opt(c_rho);
    if (!c_eta.empty()) req.eta = parse_rational(c_eta);
    if (!c_delta.empty()) req.delta = parse_rational(c_delta);
    if (c_r) req.r = c_r;
    if (c_ell) req.ell = c_ell;
    if (c_t >= 0) req.t = c_t;
    if (c_m >= 0) req.m = c_m;
    req.parts = parts;
    req.sparts = sparts;
  };

  auto tree_hom = check->add_subcommand("tree-hom", "t_H >= t_J^|F| / prod of separator densities");
  tree_hom->add_option("H", c_h)->required();
  tree_hom->add_option("J", c_j)->required();
  tree_hom->add_option("D", c_d, "J-decomposition file")->required()->check(CLI::ExistingFile);
  tree_hom->add_option("G", c_g)->required();
  tree_hom->callback([&] {
    action = [&] {
      Graph h = load_graph(c_h);
      auto jv = validate_j_decomposition(h, load_graph(c_j), parse_tree_decomposition(read_text_file(c_d)));
      if (!jv.decomposition) return Outcome{validation_json(jv.report), "invalid J-decomposition", 2};
      return report_outcome(check_tree_hom(h, *jv.decomposition, load_graph(c_g)));
    };
  });

  auto knrs = check->add_subcommand("knrs", "t_H >= d^e - eta");
  knrs->add_option("H", c_h)->required();
  knrs->add_option("G", c_g)->required();
  numbers(knrs);
  knrs->add_option("--eta", c_eta, "eta as p/q");
  knrs->add_option("--mode", mode, "edges or treewidth")->check(CLI::IsMember({"edges", "treewidth"}));
  knrs->add_option("--t", c_t, "tree-width (default: exact)");
  knrs->add_option("--m", c_m, "edge count (default: |E(H)|)");
  knrs->callback([&] {
    action = [&] {
      fill();
      Graph g = load_graph(c_g);
      if (!req.d) {
        if (!req.rho) throw InputError("knrs needs --d or --rho");
        req.d = min_subset_density(g, *req.rho).min_ratio;
      }
      auto m = mode == "treewidth" ? KnrsExponent::treewidth_corollary : KnrsExponent::edge_count;
      return report_outcome(check_knrs_instance(load_graph(c_h), g, req, m));
    };
  });

  auto multi = check->add_subcommand("multi", "complete multipartite ratio bound");
  multi->add_option("G", c_g)->required();
  multi->add_option("--parts", parts, "part sizes")->required()->delimiter(',');
  multi->add_option("--sparts", sparts, "smaller part sizes (edge-count form)")->delimiter(',');
  numbers(multi);
  multi->add_option("--delta", c_delta, "delta as p/q");
  multi->callback([&] {
    action = [&] {
      fill();
      return report_outcome(check_multipartite_ratio(load_graph(c_g), req));
    };
  });

  auto paths = check->add_subcommand("paths", "t_{P(2r)}^l >= t_{P(l)}^{2r}");
  paths->add_option("G", c_g)->required();
  paths->add_option("--ell", c_ell)->required();
  paths->add_option("--r", c_r)->required();
  paths->callback([&] { action = [&] { return report_outcome(check_path_domination(load_graph(c_g), c_ell, c_r)); }; });

  auto logconvex = check->add_subcommand("logconvex", "log-convexity of even path densities");
  logconvex->add_option("G", c_g)->required();
  logconvex->add_option("--kmax", kmax, "largest half path length")->check(CLI::Range(1, kMaxLogconvexK));
  logconvex->callback([&] {
    action = [&] {
      auto reports = check_logconvex_paths(load_graph(c_g), kmax);
      json list = json::array();
      int failed = 0;
      for (const auto& r : reports) list.push_back(to_json(r)), failed += !r.holds;
      return Outcome{{{"check", "logconvex"}, {"holds", failed == 0}, {"reports", list}},
                     "logconvex " + std::string(failed ? "fails" : "holds") + ": " + std::to_string(reports.size()) +
                         " checks, " + std::to_string(failed) + " failed",
                     failed ? 1 : 0};
    };
  });

  auto cycle = check->add_subcommand("cycle-path", "t_{C(2r+1)}^l >= (d - delta)^l t_{P(l)}^{2r}");
  cycle->add_option("G", c_g)->required();
  cycle->add_option("--r", c_r)->required();
  cycle->add_option("--ell", c_ell)->required();
  numbers(cycle);
  cycle->add_option("--delta", c_delta, "delta as p/q");
  cycle->callback([&] {
    action = [&] {
      fill();
      return report_outcome(check_cycle_path(load_graph(c_g), req));
    };
  });

  auto chain = check->add_subcommand("chain", "absorbing chain on [r] started at l");
  std::string tol_text = "1/10000000000";
  chain->add_option("--r", c_r)->required();
  chain->add_option("--ell", c_ell)->required();
  chain->add_option("--steps", steps, "step budget");
  chain->add_option("--tol", tol_text, "tolerance as p/q");
  chain->callback([&] {
    action = [&] { return report_outcome(check_absorbing_chain(c_r, c_ell, steps, parse_rational(tol_text))); };
  });

  // corpus
  auto corpus = app.add_subcommand("corpus", "run a JSON corpus configuration");
  std::string config;
  corpus->add_option("config", config)->required()->check(CLI::ExistingFile);
  corpus->callback([&] {
    action = [&] {
      auto r = run_corpus_file(config);
      const auto& c = r.report["counts"];
      std::string line = "corpus: " + c["checks"].dump() + " checks, " + c["failed"].dump() + " failed, " +
                         c["theorem_backed_failures"].dump() + " theorem-backed failures, " + c["skipped"].dump() +
                         " skipped, " + c["errors"].dump() + " errors";
      return Outcome{r.report, line, r.theorem_failure ? 1 : 0};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  Outcome out;
  try {
    out = action();
  } catch (const ParseError& e) {
    out = {error_json(e, "parse"), std::string("error: ") + e.what(), 2};
  } catch (const ConfigError& e) {
    out = {error_json(e, "config"), std::string("error: ") + e.what(), 2};
  } catch (const InputError& e) {
    out = {error_json(e, "input"), std::string("error: ") + e.what(), 2};
  } catch (const LimitError& e) {
    out = {error_json(e, "limit"), std::string("error: ") + e.what(), 2};
  } catch (const PreconditionError& e) {
    out = {error_json(e, "precondition"), std::string("rejected: ") + e.what(), 1};
  } catch (const Error& e) {
    out = {error_json(e, "error"), std::string("error: ") + e.what(), 2};
  }
  if (quiet) {
    std::cout << out.verdict << '\n';
  } else {
    out.body["verdict"] = out.verdict;
    std::cout << out.body.dump(2) << '\n';
  }
  return out.status;
}
