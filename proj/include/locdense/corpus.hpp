#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "locdense/decomposition.hpp"
#include "locdense/dense.hpp"
#include "locdense/enumeration.hpp"
#include "locdense/error.hpp"
#include "locdense/graph_io.hpp"
#include "locdense/inequalities.hpp"
#include "locdense/named_graphs.hpp"

namespace locdense {

/// Invalid corpus configuration; `pointer` is the JSON pointer of the offending value.
class ConfigError : public InputError {
public:
  ConfigError(const std::string& pointer, const std::string& what)
      : InputError("config " + (pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const noexcept { return pointer_; }

private:
  std::string pointer_;
};

struct CorpusGraph {
  std::string label;
  Graph graph;
};

struct CorpusPattern {
  std::string label;
  Graph h;
  JDecomposition jd;
};

struct CorpusResult {
  json report;           // aggregate JSON
  bool theorem_failure;  // some theorem-backed check or claim failed
};

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Parses JSON text, reporting syntax errors with line and byte offset.
inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + std::min(e.byte, text.size()), '\n'));
    throw ParseError(std::string("invalid JSON: ") + e.what(), line, e.byte);
  }
}

namespace detail {

class CorpusRunner {
public:
  CorpusRunner(const json& config, std::filesystem::path base) : config_(config), base_(std::move(base)) {}

  CorpusResult run() {
    if (config_.is_null()) config_ = json::object();
    if (!config_.is_object()) throw ConfigError("", "top level must be an object");
    for (auto it = config_.begin(); it != config_.end(); ++it)
      if (it.key() != "seed" && it.key() != "graphs" && it.key() != "checks" && it.key() != "table_budget")
        throw ConfigError("/" + it.key(), "unknown key");
    seed_ = config_.contains("seed") ? as_uint("/seed", config_["seed"]) : 1;
    load_graphs();
    if (config_.contains("checks")) {
      const json& checks = config_["checks"];
      if (!checks.is_array()) throw ConfigError("/checks", "expected an array");
      for (std::size_t i = 0; i < checks.size(); ++i) run_check("/checks/" + std::to_string(i), checks[i]);
    }
    std::sort(results_.begin(), results_.end(), [](const json& a, const json& b) {
      return std::tie(a["check"].get_ref<const std::string&>(), a["digest"].get_ref<const std::string&>()) <
             std::tie(b["check"].get_ref<const std::string&>(), b["digest"].get_ref<const std::string&>());
    });
    json failures = json::array();
    std::size_t held = 0, theorem_failures = 0;
    for (const auto& r : results_) {
      if (r["holds"].get<bool>()) {
        ++held;
        continue;
      }
      failures.push_back(r);
      if (r["theorem_backed"].get<bool>()) ++theorem_failures;
    }
    json out = {{"seed", seed_},
                {"sources", sources_},
                {"counts",
                 {{"graphs", graphs_.size()},
                  {"checks", results_.size()},
                  {"holds", held},
                  {"failed", failures.size()},
                  {"theorem_backed_failures", theorem_failures},
                  {"skipped", skipped_.size()},
                  {"errors", errors_.size()}}},
                {"failures", failures},
                {"skipped", skipped_},
                {"errors", errors_},
                {"results", results_}};
    return {std::move(out), theorem_failures > 0};
  }

private:
  static std::uint64_t as_uint(const std::string& ptr, const json& v) {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(ptr, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  static int as_int(const std::string& ptr, const json& v) {
    if (!v.is_number_integer()) throw ConfigError(ptr, "expected an integer");
    return v.get<int>();
  }

  static Rational as_rational(const std::string& ptr, const json& v) {
    try {
      if (v.is_string()) return parse_rational(v.get<std::string>());
      if (v.is_number()) return parse_rational(v.dump());
    } catch (const ParseError& e) {
      throw ConfigError(ptr, e.what());
    }
    throw ConfigError(ptr, "expected a rational as \"p/q\" or a number");
  }

  static std::vector<int> as_int_list(const std::string& ptr, const json& v) {
    if (!v.is_array()) throw ConfigError(ptr, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_int(ptr + "/" + std::to_string(i), v[i]));
    return out;
  }

  static std::pair<int, int> as_range(const std::string& ptr, const json& v) {
    if (v.is_number_integer()) return {v.get<int>(), v.get<int>()};
    auto list = as_int_list(ptr, v);
    if (list.size() != 2 || list[0] > list[1]) throw ConfigError(ptr, "expected n or [lo, hi]");
    return {list[0], list[1]};
  }

  static const json& field(const std::string& ptr, const json& obj, const char* key) {
    if (!obj.contains(key)) throw ConfigError(ptr, std::string("missing \"") + key + "\"");
    return obj[key];
  }

  template <class F>
  static auto wrap(const std::string& ptr, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const ConfigError&) {
      throw;
    } catch (const ParseError& e) {
      throw ConfigError(ptr, e.what());
    } catch (const InputError& e) {
      throw ConfigError(ptr, e.what());
    }
  }

  Graph single_graph(const std::string& ptr, const json& src) {
    if (src.is_string()) return wrap(ptr, [&] { return make_named_graph(src.get<std::string>()); });
    if (!src.is_object()) throw ConfigError(ptr, "expected a graph source");
    if (src.contains("constructor"))
      return wrap(ptr + "/constructor", [&] { return make_named_graph(src["constructor"].get<std::string>()); });
    if (src.contains("graph6")) return wrap(ptr + "/graph6", [&] { return parse_graph6(src["graph6"].get<std::string>()); });
    if (src.contains("file")) {
      std::string format = src.value("format", std::string("edge_list"));
      if (format != "edge_list" && format != "graph6") throw ConfigError(ptr + "/format", "expected edge_list or graph6");
      return wrap(ptr + "/file", [&] {
        auto text = read_text_file(base_ / src["file"].get<std::string>());
        return parse_graph(text, format == "graph6" ? GraphFormat::graph6 : GraphFormat::edge_list);
      });
    }
    throw ConfigError(ptr, "graph source needs constructor, graph6 or file");
  }

  void load_graphs() {
    if (!config_.contains("graphs")) return;
    const json& list = config_["graphs"];
    if (!list.is_array()) throw ConfigError("/graphs", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string ptr = "/graphs/" + std::to_string(i);
      const json& src = list[i];
      if (src.is_object() && src.contains("random")) {
        const json& entry = src["random"];
        std::string rp = ptr + "/random";
        auto count = as_uint(rp + "/count", field(rp, entry, "count"));
        auto [lo, hi] = as_range(rp + "/n", field(rp, entry, "n"));
        if (lo < 1 || hi > 64) throw ConfigError(rp + "/n", "vertex counts must lie in 1..64");
        double p = entry.contains("p") ? entry["p"].get<double>() : 0.5;
        if (!(p >= 0 && p <= 1)) throw ConfigError(rp + "/p", "edge probability must lie in [0,1]");
        std::uint64_t seed = entry.contains("seed") ? as_uint(rp + "/seed", entry["seed"]) : seed_ + i;
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> size(lo, hi);
        for (std::uint64_t k = 0; k < count; ++k)
          graphs_.push_back({"random#" + std::to_string(i) + "." + std::to_string(k), random_graph(size(rng), p, rng)});
        sources_.push_back({{"pointer", ptr}, {"kind", "random"}, {"seed", seed}, {"count", count}});
      } else if (src.is_object() && src.contains("all")) {
        int max_n = as_int(ptr + "/all/max_n", field(ptr + "/all", src["all"], "max_n"));
        if (max_n < 1 || max_n > kEnumerationVertexLimit) throw ConfigError(ptr + "/all/max_n", "expected 1..7");
        for (const auto& g : nonisomorphic_graphs_up_to(max_n)) graphs_.push_back({"all:" + emit_graph6(g), g});
        sources_.push_back({{"pointer", ptr}, {"kind", "all"}, {"max_n", max_n}});
      } else {
        std::string label = src.is_object() && src.contains("name") ? src["name"].get<std::string>()
                            : src.is_string()                       ? src.get<std::string>()
                                                                    : "graph#" + std::to_string(i);
        graphs_.push_back({label, single_graph(ptr, src)});
        sources_.push_back({{"pointer", ptr}, {"kind", "single"}, {"label", label}});
      }
    }
  }

  TreeDecomposition decomposition_source(const std::string& ptr, const json& src) {
    if (src.is_object() && src.contains("file"))
      return wrap(ptr, [&] { return parse_tree_decomposition(read_text_file(base_ / src["file"].get<std::string>())); });
    if (src.is_object() && src.contains("bags")) {
      TreeDecomposition d;
      const json& bags = src["bags"];
      if (!bags.is_array()) throw ConfigError(ptr + "/bags", "expected an array of bags");
      for (std::size_t i = 0; i < bags.size(); ++i) d.bags.push_back(as_int_list(ptr + "/bags/" + std::to_string(i), bags[i]));
      if (src.contains("tree")) {
        const json& tree = src["tree"];
        if (!tree.is_array()) throw ConfigError(ptr + "/tree", "expected an array of edges");
        for (std::size_t i = 0; i < tree.size(); ++i) {
          auto e = as_int_list(ptr + "/tree/" + std::to_string(i), tree[i]);
          if (e.size() != 2) throw ConfigError(ptr + "/tree/" + std::to_string(i), "expected [a, b]");
          d.tree_edges.emplace_back(e[0], e[1]);
        }
      }
      return d;
    }
    throw ConfigError(ptr, "decomposition needs file or bags");
  }

  std::vector<CorpusPattern> patterns(const std::string& ptr, const json& list) {
    if (!list.is_array()) throw ConfigError(ptr, "expected an array of patterns");
    std::vector<CorpusPattern> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string pp = ptr + "/" + std::to_string(i);
      const json& p = list[i];
      if (p.contains("r_tree")) {
        const json& entry = p["r_tree"];
        int r = as_int(pp + "/r_tree/r", field(pp + "/r_tree", entry, "r"));
        std::vector<VertexSet> script;
        if (entry.contains("script")) {
          const json& s = entry["script"];
          if (!s.is_array()) throw ConfigError(pp + "/r_tree/script", "expected an array of cliques");
          for (std::size_t k = 0; k < s.size(); ++k)
            script.push_back(as_int_list(pp + "/r_tree/script/" + std::to_string(k), s[k]));
        }
        auto t = wrap(pp + "/r_tree", [&] { return build_r_tree(r, script); });
        out.push_back({"r_tree#" + std::to_string(i), t.graph, t.decomposition});
      } else if (p.contains("random_r_trees")) {
        const json& entry = p["random_r_trees"];
        std::string rp = pp + "/random_r_trees";
        auto count = as_uint(rp + "/count", field(rp, entry, "count"));
        auto [rlo, rhi] = as_range(rp + "/r", field(rp, entry, "r"));
        auto [lo, hi] = as_range(rp + "/n", field(rp, entry, "n"));
        if (rlo < 1 || lo < rlo + 1 || hi > 12) throw ConfigError(rp, "need 1 <= r, r+1 <= n <= 12");
        std::uint64_t seed = entry.contains("seed") ? as_uint(rp + "/seed", entry["seed"]) : seed_ + 1000 + i;
        std::mt19937_64 rng(seed);
        for (std::uint64_t k = 0; k < count; ++k) {
          int r = std::uniform_int_distribution<int>(rlo, rhi)(rng);
          int n = std::uniform_int_distribution<int>(std::max(lo, r + 1), std::max(hi, r + 1))(rng);
          auto t = random_r_tree(r, n, rng);
          out.push_back({"random_r_tree#" + std::to_string(i) + "." + std::to_string(k), t.graph, t.decomposition});
        }
        sources_.push_back({{"pointer", rp}, {"kind", "random_r_trees"}, {"seed", seed}, {"count", count}});
      } else {
        Graph h = single_graph(pp + "/H", field(pp, p, "H"));
        Graph j = single_graph(pp + "/J", field(pp, p, "J"));
        TreeDecomposition d = decomposition_source(pp + "/decomposition", field(pp, p, "decomposition"));
        auto checked = wrap(pp, [&] { return validate_j_decomposition(h, j, d); });
        if (!checked.decomposition)
          throw ConfigError(pp + "/decomposition", "not a J-decomposition: " + checked.report.violations.front().message);
        out.push_back({p.value("name", "pattern#" + std::to_string(i)), h, *checked.decomposition});
      }
    }
    return out;
  }

  CheckRequest request(const std::string& ptr, const json& entry) {
    CheckRequest req;
    if (entry.contains("eta")) req.eta = as_rational(ptr + "/eta", entry["eta"]);
    if (entry.contains("delta")) req.delta = as_rational(ptr + "/delta", entry["delta"]);
    if (entry.contains("d")) req.d = as_rational(ptr + "/d", entry["d"]);
    if (entry.contains("rho")) req.rho = as_rational(ptr + "/rho", entry["rho"]);
    if (entry.contains("r") && entry["r"].is_number_integer()) req.r = entry["r"].get<int>();
    if (entry.contains("ell") && entry["ell"].is_number_integer()) req.ell = entry["ell"].get<int>();
    if (entry.contains("t")) req.t = as_int(ptr + "/t", entry["t"]);
    if (entry.contains("m")) req.m = as_int(ptr + "/m", entry["m"]);
    if (entry.contains("parts")) req.parts = as_int_list(ptr + "/parts", entry["parts"]);
    if (entry.contains("sparts")) req.sparts = as_int_list(ptr + "/sparts", entry["sparts"]);
    if (req.eta < 0) throw ConfigError(ptr + "/eta", "must be nonnegative");
    if (req.delta < 0) throw ConfigError(ptr + "/delta", "must be nonnegative");
    if (req.d && (*req.d < 0 || *req.d > 1)) throw ConfigError(ptr + "/d", "must lie in [0,1]");
    return req;
  }

  void record(const IneqReport& rep, const std::string& graph_label) {
    json j = to_json(rep);
    if (!graph_label.empty()) j["graph"] = graph_label;
    results_.push_back(std::move(j));
  }

  /// Runs f on each corpus graph; limit and precondition failures are logged, not fatal.
  template <class F>
  void per_graph(const std::string& ptr, const std::string& check, F&& f) {
    for (const auto& g : graphs_) {
      try {
        f(g);
      } catch (const PreconditionError& e) {
        skipped_.push_back({{"check", check}, {"pointer", ptr}, {"graph", g.label}, {"reason", e.what()}});
      } catch (const LimitError& e) {
        errors_.push_back({{"check", check}, {"pointer", ptr}, {"graph", g.label}, {"error", e.what()}});
      } catch (const ConfigError&) {
        throw;
      } catch (const InputError& e) {
        throw ConfigError(ptr, e.what());
      }
    }
  }

  void run_check(const std::string& ptr, const json& entry) {
    if (!entry.is_object()) throw ConfigError(ptr, "expected a check object");
    std::string check = field(ptr, entry, "check").get<std::string>();
    if (check == "paths") {
      std::vector<std::pair<int, int>> pairs;
      if (entry.contains("ell") || entry.contains("r")) {
        pairs.emplace_back(as_int(ptr + "/ell", field(ptr, entry, "ell")), as_int(ptr + "/r", field(ptr, entry, "r")));
      } else {
        int max_r = entry.contains("max_r") ? as_int(ptr + "/max_r", entry["max_r"]) : 5;
        for (int r = 1; r <= max_r; ++r)
          for (int ell = 1; ell < 2 * r; ++ell) pairs.emplace_back(ell, r);
      }
      per_graph(ptr, check, [&](const CorpusGraph& g) {
        for (auto [ell, r] : pairs) record(check_path_domination(g.graph, ell, r), g.label);
      });
    } else if (check == "logconvex") {
      int kmax = entry.contains("kmax") ? as_int(ptr + "/kmax", entry["kmax"]) : 3;
      per_graph(ptr, check, [&](const CorpusGraph& g) {
        for (const auto& rep : check_logconvex_paths(g.graph, kmax)) record(rep, g.label);
      });
    } else if (check == "tree-hom") {
      auto list = patterns(ptr + "/patterns", field(ptr, entry, "patterns"));
      per_graph(ptr, check, [&](const CorpusGraph& g) {
        for (const auto& p : list) {
          try {
            auto rep = check_tree_hom(p.h, p.jd, g.graph);
            rep.witnesses["pattern"] = p.label;
            record(rep, g.label);
          } catch (const PreconditionError& e) {
            skipped_.push_back({{"check", check}, {"pointer", ptr}, {"graph", g.label}, {"pattern", p.label}, {"reason", e.what()}});
          }
        }
      });
    } else if (check == "knrs") {
      Graph h = single_graph(ptr + "/H", field(ptr, entry, "H"));
      CheckRequest base = request(ptr, entry);
      std::string mode = entry.value("mode", std::string("edges"));
      if (mode != "edges" && mode != "treewidth") throw ConfigError(ptr + "/mode", "expected edges or treewidth");
      if (!base.d && !base.rho) throw ConfigError(ptr, "knrs needs d or rho");
      per_graph(ptr, check, [&](const CorpusGraph& g) {
        CheckRequest req = base;
        if (!req.d) req.d = min_subset_density(g.graph, *req.rho).min_ratio;
        record(check_knrs_instance(h, g.graph, req, mode == "edges" ? KnrsExponent::edge_count : KnrsExponent::treewidth_corollary),
               g.label);
      });
    } else if (check == "multi") {
      CheckRequest req = request(ptr, entry);
      per_graph(ptr, check, [&](const CorpusGraph& g) { record(check_multipartite_ratio(g.graph, req), g.label); });
    } else if (check == "cycle-path") {
      CheckRequest req = request(ptr, entry);
      per_graph(ptr, check, [&](const CorpusGraph& g) { record(check_cycle_path(g.graph, req), g.label); });
    } else if (check == "claim") {
      Graph h = single_graph(ptr + "/H", field(ptr, entry, "H"));
      std::string op = entry.value("op", std::string(">="));
      Rational value = as_rational(ptr + "/value", field(ptr, entry, "value"));
      if (entry.contains("G")) {
        Graph g = single_graph(ptr + "/G", entry["G"]);
        wrap(ptr, [&] { record(check_density_claim(h, g, op, value), ""); return 0; });
      } else {
        per_graph(ptr, check, [&](const CorpusGraph& g) { record(check_density_claim(h, g.graph, op, value), g.label); });
      }
    } else if (check == "chain") {
      int r = as_int(ptr + "/r", field(ptr, entry, "r"));
      std::vector<int> ells;
      if (entry.contains("ell")) ells.push_back(as_int(ptr + "/ell", entry["ell"]));
      else
        for (int ell = 1; ell <= r; ++ell) ells.push_back(ell);
      std::uint64_t steps = entry.contains("steps") ? as_uint(ptr + "/steps", entry["steps"]) : 100000;
      for (int ell : ells) wrap(ptr, [&] { record(check_absorbing_chain(r, ell, steps), ""); return 0; });
    } else {
      throw ConfigError(ptr + "/check", "unknown check '" + check + "'");
    }
  }

  json config_;
  std::filesystem::path base_;
  std::uint64_t seed_ = 1;
  std::vector<CorpusGraph> graphs_;
  json sources_ = json::array();
  json results_ = json::array();
  json skipped_ = json::array();
  json errors_ = json::array();
};

}  // namespace detail

/// Executes every check in `config` over its graph sources. Results are ordered by
/// (check, input digest); relative file paths resolve against `base`.
inline CorpusResult run_corpus(const json& config, const std::filesystem::path& base = ".") {
  return detail::CorpusRunner(config, base).run();
}

inline CorpusResult run_corpus_file(const std::filesystem::path& path) {
  return run_corpus(parse_json_text(read_text_file(path)), path.parent_path());
}

}  // namespace locdense
