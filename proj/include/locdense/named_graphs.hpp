#pragma once

#include <cctype>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "locdense/error.hpp"
#include "locdense/graph.hpp"

namespace locdense {

inline Graph complete_graph(int r) {
  if (r < 0) throw InputError("K(r) needs r >= 0");
  std::vector<Edge> edges;
  for (int u = 0; u < r; ++u)
    for (int v = u + 1; v < r; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(r, edges);
}

/// K(r_1,...,r_l): parts are consecutive label blocks; zero parts vanish and a single part
/// is edgeless.
inline Graph complete_multipartite(std::span<const int> parts) {
  std::vector<int> part_of;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 0) throw InputError("negative part size in K(r_1,...,r_l)");
    part_of.insert(part_of.end(), parts[i], static_cast<int>(i));
  }
  int n = static_cast<int>(part_of.size());
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (part_of[u] != part_of[v]) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

inline Graph complete_multipartite(std::initializer_list<int> parts) {
  return complete_multipartite(std::span<const int>(parts.begin(), parts.size()));
}

/// P(l): the path with l edges on vertices 0..l in order.
inline Graph path_graph(int length) {
  if (length < 0) throw InputError("P(l) needs l >= 0");
  std::vector<Edge> edges;
  for (int i = 0; i < length; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(length + 1, edges);
}

inline Graph cycle_graph(int k) {
  if (k < 3) throw InputError("C(k) needs k >= 3, got " + std::to_string(k));
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i) edges.emplace_back(std::min(i, (i + 1) % k), std::max(i, (i + 1) % k));
  return Graph::from_edges(k, edges);
}

/// The Goldner-Harary graph with vertices A..K labelled 0..10.
inline Graph goldner_harary() {
  static constexpr const char* kEdges[] = {"AB", "AC", "AD", "BC", "BD", "BE", "BF", "BG", "CD",
                                           "CE", "CF", "CI", "CH", "CK", "DE", "DG", "DJ", "DH",
                                           "DK", "EF", "EG", "EH", "EI", "EJ", "HI", "HJ", "HK"};
  std::vector<Edge> edges;
  for (const char* e : kEdges) edges.emplace_back(e[0] - 'A', e[1] - 'A');
  return Graph::from_edges(11, edges);
}

/// Paley graph on Z_q for a prime q = 1 (mod 4): x ~ y iff x - y is a nonzero square.
inline Graph paley_graph(int q) {
  auto prime = [](int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  };
  if (!prime(q) || q % 4 != 1)
    throw InputError("paley(q) needs a prime q = 1 mod 4, got " + std::to_string(q));
  std::vector<char> square(q, 0);
  for (long long x = 1; x < q; ++x) square[(x * x) % q] = 1;
  std::vector<Edge> edges;
  for (int u = 0; u < q; ++u)
    for (int v = u + 1; v < q; ++v)
      if (square[v - u]) edges.emplace_back(u, v);
  return Graph::from_edges(q, edges);
}

/// Adds vertex n adjacent to every vertex of g.
inline Graph apex(const Graph& g) {
  std::vector<Edge> edges = g.edges();
  int n = g.vertex_count();
  for (int v = 0; v < n; ++v) edges.emplace_back(v, n);
  return Graph::from_edges(n + 1, edges);
}

/// b's vertices are shifted by |V(a)|.
inline Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  int shift = a.vertex_count();
  for (auto [u, v] : b.edges()) edges.emplace_back(u + shift, v + shift);
  return Graph::from_edges(shift + b.vertex_count(), edges);
}

namespace detail {

class ExpressionParser {
public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  Graph parse() {
    Graph g = graph();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return g;
  }

private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("graph expression '" + std::string(text_) + "': " + why, 1, pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string name() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a constructor name");
    return std::string(text_.substr(start, pos_ - start));
  }

  int integer() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a nonnegative integer");
    if (pos_ - start > 6) fail("integer argument too large");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  std::vector<int> integer_args() {
    expect('(');
    std::vector<int> args{integer()};
    while (accept(',')) args.push_back(integer());
    expect(')');
    return args;
  }

  int single_integer_arg(const std::string& who) {
    auto args = integer_args();
    if (args.size() != 1) fail(who + " takes one argument");
    return args[0];
  }

  Graph graph() {
    std::string ctor = name();
    try {
      if (ctor == "K") {
        auto args = integer_args();
        return args.size() == 1 ? complete_graph(args[0]) : complete_multipartite(args);
      }
      if (ctor == "multipartite") return complete_multipartite(integer_args());
      if (ctor == "P") return path_graph(single_integer_arg("P"));
      if (ctor == "C") return cycle_graph(single_integer_arg("C"));
      if (ctor == "paley") return paley_graph(single_integer_arg("paley"));
      if (ctor == "goldner_harary") {
        if (accept('(')) expect(')');
        return goldner_harary();
      }
      if (ctor == "apex") {
        expect('(');
        Graph inner = graph();
        expect(')');
        return apex(inner);
      }
      if (ctor == "disjoint_union") {
        expect('(');
        Graph acc = graph();
        expect(',');
        acc = disjoint_union(acc, graph());
        while (accept(',')) acc = disjoint_union(acc, graph());
        expect(')');
        return acc;
      }
    } catch (const InputError& e) {
      throw InputError("graph expression '" + std::string(text_) + "': " + e.what());
    }
    fail("unknown constructor '" + ctor + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Builds a graph from an expression such as "K(4)", "K(2,1,1)", "P(3)", "C(5)",
/// "goldner_harary", "paley(13)", "apex(C(5))" or "disjoint_union(K(3),P(2))".
/// "K" with one argument is the complete graph; "multipartite(...)" accepts any number of
/// parts, so "multipartite(3)" is three isolated vertices.
inline Graph make_named_graph(std::string_view expression) {
  return detail::ExpressionParser(expression).parse();
}

}  // namespace locdense
