#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "locdense/error.hpp"
#include "locdense/graph.hpp"

namespace locdense {

enum class GraphFormat { edge_list, graph6 };

namespace detail {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t offset;
};

/// Whitespace-separated tokens with '#' comments stripped, grouped by line.
inline std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  std::size_t pos = 0, line_no = 1;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) tokens.push_back({line.substr(start, i - start), line_no, pos + start});
    }
    if (!tokens.empty()) lines.push_back(std::move(tokens));
    if (end == text.size()) break;
    pos = end + 1;
    ++line_no;
  }
  return lines;
}

inline long long parse_count(const Token& t, const char* what) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size() || value < 0)
    throw ParseError(std::string("expected nonnegative integer for ") + what + ", got '" +
                         std::string(t.text) + "'",
                     t.line, t.offset);
  return value;
}

}  // namespace detail

/// "n m" header followed by m lines "u v"; '#' starts a comment.
inline Graph parse_edge_list(std::string_view text) {
  auto lines = detail::tokenize_lines(text);
  if (lines.empty()) throw ParseError("missing 'n m' header", 1, 0);
  const auto& header = lines.front();
  if (header.size() != 2) throw ParseError("header must be 'n m'", header[0].line, header[0].offset);
  long long n = detail::parse_count(header[0], "n");
  long long m = detail::parse_count(header[1], "m");
  if (n > (1 << 20)) throw ParseError("vertex count too large", header[0].line, header[0].offset);
  if (static_cast<long long>(lines.size()) - 1 != m)
    throw ParseError("header announces " + std::to_string(m) + " edges but " +
                         std::to_string(lines.size() - 1) + " edge lines follow",
                     header[1].line, header[1].offset);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& toks = lines[i];
    if (toks.size() != 2) throw ParseError("edge line must be 'u v'", toks[0].line, toks[0].offset);
    long long u = detail::parse_count(toks[0], "u");
    long long v = detail::parse_count(toks[1], "v");
    if (u >= n || v >= n)
      throw ParseError("vertex index >= n=" + std::to_string(n), toks[0].line, toks[0].offset);
    if (u == v) throw ParseError("self-loop", toks[0].line, toks[0].offset);
    Edge e{static_cast<Vertex>(std::min(u, v)), static_cast<Vertex>(std::max(u, v))};
    edges.push_back(e);
  }
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) {
      std::size_t at = std::find(edges.begin(), edges.end(), sorted[i]) - edges.begin();
      // report the second occurrence
      at = std::find(edges.begin() + at + 1, edges.end(), sorted[i]) - edges.begin();
      const auto& tok = lines[at + 1][0];
      throw ParseError("duplicate edge", tok.line, tok.offset);
    }
  return Graph::from_edges(static_cast<int>(n), edges);
}

inline std::string emit_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

/// Standard graph6: size header then the upper triangle column by column, six bits per byte.
/// An optional ">>graph6<<" prefix and trailing newline are accepted.
inline Graph parse_graph6(std::string_view text) {
  constexpr std::string_view prefix = ">>graph6<<";
  std::size_t base = 0;
  if (text.substr(0, prefix.size()) == prefix) base = prefix.size();
  std::string_view body = text.substr(base);
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.remove_suffix(1);
  for (std::size_t i = 0; i < body.size(); ++i)
    if (body[i] < 63 || body[i] > 126)
      throw ParseError("graph6 byte out of range 63..126", 1, base + i);
  if (body.empty()) throw ParseError("empty graph6 string", 1, base);

  std::size_t pos = 0;
  long long n = 0;
  auto take = [&](std::size_t count) {
    if (pos + count > body.size()) throw ParseError("truncated graph6 size header", 1, base + pos);
    long long value = 0;
    for (std::size_t i = 0; i < count; ++i) value = (value << 6) | (body[pos++] - 63);
    return value;
  };
  if (body[0] != 126) {
    n = take(1);
  } else if (body.size() > 1 && body[1] != 126) {
    pos = 1;
    n = take(3);
  } else {
    pos = 2;
    n = take(6);
  }
  if (n > (1 << 20)) throw ParseError("graph6 vertex count too large", 1, base);
  std::size_t bits = static_cast<std::size_t>(n) * (n - 1) / 2;
  std::size_t need = (bits + 5) / 6;
  if (body.size() - pos != need)
    throw ParseError("graph6 body has " + std::to_string(body.size() - pos) + " bytes, expected " +
                         std::to_string(need),
                     1, base + pos);
  std::vector<Edge> edges;
  std::size_t k = 0;
  for (Vertex j = 1; j < n; ++j)
    for (Vertex i = 0; i < j; ++i, ++k) {
      int byte = body[pos + k / 6] - 63;
      if ((byte >> (5 - k % 6)) & 1) edges.emplace_back(i, j);
    }
  if (bits % 6 != 0) {
    int last = body.back() - 63;
    if (last & ((1 << (6 - bits % 6)) - 1))
      throw ParseError("nonzero graph6 padding bits", 1, base + body.size() - 1);
  }
  return Graph::from_edges(static_cast<int>(n), edges);
}

/// graph6 without prefix or newline.
inline std::string emit_graph6(const Graph& g) {
  std::string out;
  long long n = g.vertex_count();
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else if (n <= 258047) {
    out.push_back(126);
    for (int s = 12; s >= 0; s -= 6) out.push_back(static_cast<char>(((n >> s) & 63) + 63));
  } else {
    out.push_back(126);
    out.push_back(126);
    for (int s = 30; s >= 0; s -= 6) out.push_back(static_cast<char>(((n >> s) & 63) + 63));
  }
  int acc = 0, filled = 0;
  for (Vertex j = 1; j < n; ++j)
    for (Vertex i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
      if (++filled == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = filled = 0;
      }
    }
  if (filled > 0) out.push_back(static_cast<char>((acc << (6 - filled)) + 63));
  return out;
}

inline Graph parse_graph(std::string_view text, GraphFormat format) {
  return format == GraphFormat::graph6 ? parse_graph6(text) : parse_edge_list(text);
}

inline std::string emit_graph(const Graph& g, GraphFormat format) {
  return format == GraphFormat::graph6 ? emit_graph6(g) : emit_edge_list(g);
}

}  // namespace locdense
