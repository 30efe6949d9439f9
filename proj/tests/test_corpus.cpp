#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "locdense/corpus.hpp"

using namespace locdense;

namespace {

CorpusResult run_text(const std::string& text) { return run_corpus(parse_json_text(text)); }

}  // namespace

TEST(Corpus, EmptyConfigSucceeds) {
  auto r = run_text("{}");
  EXPECT_FALSE(r.theorem_failure);
  EXPECT_EQ(r.report["counts"]["checks"], 0);
  EXPECT_TRUE(r.report["results"].empty());
}

TEST(Corpus, PathDominationOverSmallGraphs) {
  auto r = run_text(R"J({"graphs": [{"all": {"max_n": 5}}, "K(6)", "C(6)", "paley(5)"],
                       "checks": [{"check": "paths", "max_r": 3}]})J");
  EXPECT_FALSE(r.theorem_failure);
  EXPECT_EQ(r.report["counts"]["failed"], 0);
  EXPECT_EQ(r.report["counts"]["graphs"], 1 + 2 + 4 + 11 + 34 + 3);
  EXPECT_EQ(r.report["counts"]["checks"], (1 + 2 + 4 + 11 + 34 + 3) * (1 + 3 + 5));
}

TEST(Corpus, FalseClaimFails) {
  auto r = run_text(R"J({"checks": [{"check": "claim", "H": "K(3)", "G": "C(5)", "op": ">=", "value": 0.01}]})J");
  EXPECT_TRUE(r.theorem_failure);
  EXPECT_EQ(r.report["counts"]["failed"], 1);
  EXPECT_EQ(r.report["failures"][0]["inputs"]["value"], "1/100");
}

TEST(Corpus, InformationalFailuresDoNotSetExit) {
  auto r = run_text(R"J({"graphs": ["C(4)"],
                       "checks": [{"check": "cycle-path", "r": 1, "ell": 2, "d": "1/2", "rho": "1/2"}]})J");
  EXPECT_EQ(r.report["counts"]["failed"], 1);
  EXPECT_FALSE(r.theorem_failure);
}

TEST(Corpus, DeterministicOrderAndSeeds) {
  const char* text = R"J({"seed": 5, "graphs": [{"random": {"count": 6, "n": [3, 6], "p": 0.5}}],
                         "checks": [{"check": "logconvex", "kmax": 2}, {"check": "paths", "r": 2, "ell": 3}]})J";
  auto a = run_text(text), b = run_text(text);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  const auto& results = a.report["results"];
  for (std::size_t i = 1; i < results.size(); ++i) {
    auto key = [&](std::size_t k) {
      return std::make_pair(results[k]["check"].get<std::string>(), results[k]["digest"].get<std::string>());
    };
    EXPECT_LE(key(i - 1), key(i));
  }
  EXPECT_EQ(a.report["sources"][0]["seed"], 5);
}

TEST(Corpus, TreeHomPatterns) {
  auto r = run_text(R"J({"graphs": ["K(5)", "C(5)", "K(2,2)"],
    "checks": [{"check": "tree-hom", "patterns": [
      {"r_tree": {"r": 3, "script": [[0,1,2],[1,4,2],[0,4,2],[0,1,4],[7,1,4],[7,0,4],[7,0,1]]}},
      {"random_r_trees": {"count": 4, "r": [1, 2], "n": [3, 6], "seed": 3}},
      {"H": "C(4)", "J": "P(2)", "decomposition": {"bags": [[0,1,2],[2,3,0]], "tree": [[0,1]]}}]}]})J");
  EXPECT_FALSE(r.theorem_failure);
  EXPECT_GT(r.report["counts"]["checks"].get<int>(), 0);
  // K_4 patterns cannot map into C_5 or K(2,2).
  EXPECT_GT(r.report["counts"]["skipped"].get<int>(), 0);
}

TEST(Corpus, KnrsDerivesDFromRho) {
  auto r = run_text(R"J({"graphs": ["paley(13)"],
    "checks": [{"check": "knrs", "H": "C(5)", "rho": "1/2", "mode": "treewidth", "t": 2, "m": 5}]})J");
  ASSERT_EQ(r.report["results"].size(), 1u);
  EXPECT_EQ(r.report["results"][0]["witnesses"]["exponent"], 20);
}

TEST(Corpus, ChainWithoutGraphs) {
  auto r = run_text(R"J({"checks": [{"check": "chain", "r": 8}]})J");
  EXPECT_EQ(r.report["counts"]["checks"], 8);
  EXPECT_FALSE(r.theorem_failure);
}

TEST(Corpus, ConfigErrorsCarryLocation) {
  try {
    run_text(R"J({"checks": [{"check": "paths"}, {"check": "nope"}]})J");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer(), "/checks/1/check");
  }
  try {
    run_text(R"J({"graphs": ["K(3)", {"constructor": "Q(1)"}]})J");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer(), "/graphs/1/constructor");
  }
  try {
    run_text(R"J({"graphs": ["K(3)"], "checks": [{"check": "paths", "r": 1, "ell": 2}]})J");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer(), "/checks/0");
  }
  try {
    parse_json_text("{\n  \"checks\": [,]\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(run_text(R"J({"graph": []})J"), ConfigError);
}

TEST(Corpus, FileSources) {
  auto dir = std::filesystem::temp_directory_path() / "locdense_corpus_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "tri.edges") << "3 3\n0 1\n1 2\n0 2\n";
  std::ofstream(dir / "cfg.json") << R"J({"graphs": [{"file": "tri.edges"}],
                                         "checks": [{"check": "claim", "H": "K(2)", "op": ">=", "value": "2/3"}]})J";
  auto r = run_corpus_file(dir / "cfg.json");
  EXPECT_FALSE(r.theorem_failure);
  EXPECT_EQ(r.report["results"][0]["lhs"], "2/3");
  std::filesystem::remove_all(dir);
}
