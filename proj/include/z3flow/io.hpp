#pragma once

// Graph file formats, named graph families, and JSON documents.
//
// Edge-list format (multigraph capable):
//     n m
//     tail head      <- m lines, 0-indexed; line order gives edge ids
// Blank lines and text after '#' are ignored.
//
// graph6 (simple graphs only): the standard 6-bit encoding of the upper
// triangle, column by column. Edges are oriented from the lower to the higher
// vertex and numbered in encoding order.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "z3flow/criticality.hpp"
#include "z3flow/flow.hpp"
#include "z3flow/multigraph.hpp"
#include "z3flow/solver.hpp"

namespace z3flow {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back(Token{std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

inline std::size_t to_index(const Token& t, std::size_t line) {
  if (t.text.empty() || t.text.size() > 18 ||
      !std::all_of(t.text.begin(), t.text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ParseError(line, t.column, "expected a nonnegative integer, got '" + t.text + "'");
  return static_cast<std::size_t>(std::stoull(t.text));
}

}  // namespace detail

inline MultiGraph parse_edgelist(std::string_view text) {
  std::size_t n = 0, m = 0;
  bool have_header = false;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::size_t line_no = 0, last_line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    last_line = line_no;
    if (tokens.size() != 2)
      throw ParseError(line_no, tokens.size() > 2 ? tokens[2].column : tokens.back().column + tokens.back().text.size(),
                       have_header ? "expected 'tail head'" : "expected header 'n m'");
    if (!have_header) {
      n = detail::to_index(tokens[0], line_no);
      m = detail::to_index(tokens[1], line_no);
      have_header = true;
      continue;
    }
    if (edges.size() == m) throw ParseError(line_no, tokens[0].column, "more than " + std::to_string(m) + " edge lines");
    VertexId t = detail::to_index(tokens[0], line_no);
    VertexId h = detail::to_index(tokens[1], line_no);
    if (t >= n) throw ParseError(line_no, tokens[0].column, "vertex " + std::to_string(t) + " out of range for n=" + std::to_string(n));
    if (h >= n) throw ParseError(line_no, tokens[1].column, "vertex " + std::to_string(h) + " out of range for n=" + std::to_string(n));
    edges.emplace_back(t, h);
  }
  if (!have_header) throw ParseError(1, 1, "missing header 'n m'");
  if (edges.size() != m)
    throw ParseError(last_line + 1, 1, "expected " + std::to_string(m) + " edge lines, found " + std::to_string(edges.size()));
  return MultiGraph(n, edges);
}

/// Edges are written in position (= id) order; ids are implicitly renumbered 0..m-1.
inline std::string emit_edgelist(const MultiGraph& g) {
  std::ostringstream os;
  os << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) os << e.tail << ' ' << e.head << '\n';
  return os.str();
}

inline MultiGraph parse_graph6(std::string_view line) {
  constexpr std::string_view header = ">>graph6<<";
  std::size_t offset = 0;
  if (line.substr(0, header.size()) == header) offset = header.size();
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  auto byte = [&](std::size_t i) -> std::uint32_t {
    if (i >= line.size()) throw ParseError(1, i + 1, "graph6 string ends inside the vertex count");
    unsigned char c = static_cast<unsigned char>(line[i]);
    if (c < 63 || c > 126) throw ParseError(1, i + 1, std::string("invalid graph6 character '") + char(c) + "'");
    return c - 63u;
  };
  std::size_t i = offset;
  std::uint64_t n = 0;
  if (i < line.size() && line[i] == '~') {
    if (i + 1 < line.size() && line[i + 1] == '~') {
      i += 2;
      for (int k = 0; k < 6; ++k) n = (n << 6) | byte(i++);
    } else {
      i += 1;
      for (int k = 0; k < 3; ++k) n = (n << 6) | byte(i++);
    }
  } else {
    n = byte(i++);
  }
  const std::uint64_t bits = n * (n - (n ? 1 : 0)) / 2;
  const std::uint64_t expected = (bits + 5) / 6;
  if (line.size() - i != expected)
    throw ParseError(1, i + 1, "graph6 length mismatch: n=" + std::to_string(n) + " needs " + std::to_string(expected) +
                                   " data characters, found " + std::to_string(line.size() - i));
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::uint64_t k = 0;
  for (VertexId j = 1; j < n; ++j)
    for (VertexId a = 0; a < j; ++a, ++k) {
      std::uint32_t word = byte(i + k / 6);
      if (word & (1u << (5 - k % 6))) edges.emplace_back(a, j);
    }
  // padding bits must be zero
  for (; k < expected * 6; ++k)
    if (byte(i + k / 6) & (1u << (5 - k % 6))) throw ParseError(1, i + k / 6 + 1, "nonzero graph6 padding bit");
  return MultiGraph(static_cast<std::size_t>(n), edges);
}

/// Requires a simple graph. Orientation and edge ids are not representable.
inline std::string emit_graph6(const MultiGraph& g) {
  if (!g.is_simple()) throw GraphError("emit_graph6: graph6 cannot express loops or parallel edges");
  const std::uint64_t n = g.vertex_count();
  std::string out;
  if (n < 63) {
    out.push_back(static_cast<char>(63 + n));
  } else if (n < 258048) {
    out.push_back('~');
    for (int s = 12; s >= 0; s -= 6) out.push_back(static_cast<char>(63 + ((n >> s) & 63)));
  } else {
    out += "~~";
    for (int s = 30; s >= 0; s -= 6) out.push_back(static_cast<char>(63 + ((n >> s) & 63)));
  }
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const Edge& e : g.edges()) adj[e.tail][e.head] = adj[e.head][e.tail] = true;
  std::uint32_t word = 0;
  int filled = 0;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t a = 0; a < j; ++a) {
      word = (word << 1) | (adj[a][j] ? 1u : 0u);
      if (++filled == 6) {
        out.push_back(static_cast<char>(63 + word));
        word = 0;
        filled = 0;
      }
    }
  if (filled) out.push_back(static_cast<char>(63 + (word << (6 - filled))));
  return out;
}

enum class GraphFormat { Auto, EdgeList, Graph6 };

/// Auto: graph6 data never starts with a digit, edge lists always do.
/// Leading blank lines and '#' comment lines are skipped in both formats.
inline MultiGraph parse_graph(std::string_view text, GraphFormat format = GraphFormat::Auto) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else {
      break;
    }
  }
  if (format == GraphFormat::Auto)
    format = (i < text.size() && !std::isdigit(static_cast<unsigned char>(text[i]))) ? GraphFormat::Graph6 : GraphFormat::EdgeList;
  if (format == GraphFormat::EdgeList) return parse_edgelist(text);
  if (i == text.size()) throw ParseError(1, 1, "empty graph6 input");
  std::size_t end = text.find_first_of("\r\n", i);
  return parse_graph6(text.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i));
}

// ---------------------------------------------------------------------------
// Named families.

inline MultiGraph make_k2() { return build_graph(2, {{0, 1}}); }
inline MultiGraph make_k4() { return complete_graph(4); }

/// Hub 0 with spokes 0->i (edges 0..s-1), then rim i->i+1 and s->1.
inline MultiGraph make_wheel(std::size_t spokes) {
  if (spokes < 3) throw std::invalid_argument("wheel: needs at least 3 spokes");
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId i = 1; i <= spokes; ++i) e.emplace_back(0, i);
  for (VertexId i = 1; i <= spokes; ++i) e.emplace_back(i, i == spokes ? 1 : i + 1);
  return MultiGraph(spokes + 1, e);
}

inline MultiGraph make_complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId i = 0; i < a; ++i)
    for (VertexId j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return MultiGraph(a + b, e);
}

/// K_{3,n-3} (side {0,1,2} first) plus the edge 0->1 inside the 3-side.
inline MultiGraph make_k33e(std::size_t n) {
  if (n < 7) throw std::invalid_argument("k33e: needs n >= 7");
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId i = 0; i < 3; ++i)
    for (VertexId j = 3; j < n; ++j) e.emplace_back(i, j);
  e.emplace_back(0, 1);
  return MultiGraph(n, e);
}

inline MultiGraph make_petersen() {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId i = 0; i < 5; ++i) e.emplace_back(i, (i + 1) % 5);
  for (VertexId i = 0; i < 5; ++i) e.emplace_back(i, i + 5);
  for (VertexId i = 0; i < 5; ++i) e.emplace_back(5 + i, 5 + (i + 2) % 5);
  return MultiGraph(10, e);
}

namespace detail {

// Uniform in [0, bound) from the raw engine, so results do not depend on the
// standard library's distribution implementations.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

inline std::pair<VertexId, VertexId> random_orientation(std::mt19937_64& rng, VertexId a, VertexId b) {
  return uniform_below(rng, 2) ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace detail

/// Connected loopless multigraph: a random recursive spanning tree plus
/// m - (n - 1) uniformly random extra edges (parallel edges allowed).
inline MultiGraph make_random(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random: needs n >= 1");
  if (m + 1 < n) throw std::invalid_argument("random: m must be at least n-1 for a connected graph");
  if (n == 1 && m > 0) throw std::invalid_argument("random: a single vertex cannot carry loopless edges");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId v = 1; v < n; ++v) e.push_back(detail::random_orientation(rng, detail::uniform_below(rng, v), v));
  while (e.size() < m) {
    VertexId a = detail::uniform_below(rng, n);
    VertexId b = detail::uniform_below(rng, n - 1);
    if (b >= a) ++b;
    e.push_back(detail::random_orientation(rng, a, b));
  }
  return MultiGraph(n, e);
}

/// Connected loopless multigraph with minimum degree at least 3 and
/// max(m, edges needed) edges: a random tree, then edges joining random
/// vertices of degree below 3, then uniformly random extra edges.
inline MultiGraph make_random_min3(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random-min3: needs n >= 2");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<VertexId, VertexId>> e;
  std::vector<std::size_t> deg(n, 0);
  auto add = [&](VertexId a, VertexId b) {
    e.push_back(detail::random_orientation(rng, a, b));
    ++deg[a];
    ++deg[b];
  };
  for (VertexId v = 1; v < n; ++v) add(detail::uniform_below(rng, v), v);
  while (true) {
    std::vector<VertexId> low;
    for (VertexId v = 0; v < n; ++v)
      if (deg[v] < 3) low.push_back(v);
    if (low.empty()) break;
    VertexId a = low[detail::uniform_below(rng, low.size())];
    VertexId b;
    if (low.size() > 1) {
      do b = low[detail::uniform_below(rng, low.size())];
      while (b == a);
    } else {
      b = detail::uniform_below(rng, n - 1);
      if (b >= a) ++b;
    }
    add(a, b);
  }
  while (e.size() < m) {
    VertexId a = detail::uniform_below(rng, n);
    VertexId b = detail::uniform_below(rng, n - 1);
    if (b >= a) ++b;
    add(a, b);
  }
  return MultiGraph(n, e);
}

/// Builds a named family member: k2; k4; petersen; wheel S; k33e N; kab A B;
/// random N M; random-min3 N M. `seed` is used by the random families.
inline MultiGraph generate(const std::string& name, const std::vector<std::size_t>& params, std::uint64_t seed = 1) {
  auto need = [&](std::size_t k) {
    if (params.size() != k)
      throw std::invalid_argument("gen " + name + ": expected " + std::to_string(k) + " parameter(s), got " +
                                  std::to_string(params.size()));
  };
  if (name == "k2") return need(0), make_k2();
  if (name == "k4") return need(0), make_k4();
  if (name == "petersen") return need(0), make_petersen();
  if (name == "wheel") return need(1), make_wheel(params[0]);
  if (name == "k33e") return need(1), make_k33e(params[0]);
  if (name == "kab") return need(2), make_complete_bipartite(params[0], params[1]);
  if (name == "random") return need(2), make_random(params[0], params[1], seed);
  if (name == "random-min3") return need(2), make_random_min3(params[0], params[1], seed);
  throw std::invalid_argument("unknown graph family '" + name + "'");
}

// ---------------------------------------------------------------------------
// JSON documents.

using nlohmann::json;

inline json flow_json(const MultiGraph& g, const Flow& f) {
  json arr = json::array();
  for (std::size_t p = 0; p < g.edge_count(); ++p) {
    const Edge& e = g.edge_at(p);
    arr.push_back({{"edge", e.id}, {"tail", e.tail}, {"head", e.head}, {"value", f.values()[p].value()}});
  }
  return arr;
}

inline json budget_json(const SparsityBudget& b) {
  return {{"n", b.n},
          {"m", b.m},
          {"three_k", b.three_k},
          {"k", std::to_string(b.three_k) + "/3"},
          {"independent_branch", b.independent_branch},
          {"b", b.b},
          {"bound", b.bound()},
          {"enumerated", b.enumerated},
          {"nowhere_zero_assignments", b.nowhere_zero}};
}

/// Document for one solver outcome on g.
inline json outcome_json(const MultiGraph& g, const SolveOutcome& o) {
  json doc = {{"n", g.vertex_count()}, {"m", g.edge_count()}};
  if (const auto* ff = std::get_if<FlowFound>(&o)) {
    doc["outcome"] = "flow";
    doc["exists"] = true;
    doc["source"] = to_string(ff->source);
    doc["flow"] = flow_json(g, ff->flow);
  } else if (const auto* nf = std::get_if<NoFlow>(&o)) {
    doc["outcome"] = "no-flow";
    doc["exists"] = false;
    doc["reason"] = to_string(nf->reason);
  } else {
    const auto& ie = std::get<IrrelevantEdge>(o);
    const Edge& e = g.edge(ie.edge);
    doc["outcome"] = "irrelevant-edge";
    doc["irrelevant_edge"] = ie.edge;
    doc["tail"] = e.tail;
    doc["head"] = e.head;
    doc["provenance"] = to_string(ie.provenance);
  }
  return doc;
}

inline json oracle_json(const MultiGraph& g, const std::optional<Flow>& f) {
  json doc = {{"n", g.vertex_count()}, {"m", g.edge_count()}};
  if (f) {
    doc["outcome"] = "flow";
    doc["exists"] = true;
    doc["source"] = "oracle";
    doc["flow"] = flow_json(g, *f);
  } else {
    doc["outcome"] = "no-flow";
    doc["exists"] = false;
    doc["reason"] = "oracle exhausted";
  }
  return doc;
}

/// Rebuilds the graph embedded in a flow document and re-verifies its flow.
inline bool verify_flow_document(const json& doc) {
  if (!doc.value("exists", false)) return false;
  const auto& arr = doc.at("flow");
  std::vector<Edge> edges;
  Gf3Vector values(arr.size());
  std::vector<std::pair<EdgeId, int>> by_id;
  for (const auto& x : arr) {
    edges.push_back(Edge{x.at("edge").get<EdgeId>(), x.at("tail").get<VertexId>(), x.at("head").get<VertexId>()});
    by_id.emplace_back(edges.back().id, x.at("value").get<int>());
  }
  MultiGraph g(doc.at("n").get<std::size_t>(), std::move(edges));
  for (auto [id, v] : by_id) {
    if (v != 1 && v != 2) return false;
    values[g.position_of(id)] = Gf3(v);
  }
  return verify_flow(g, values).nowhere_zero();
}

inline json criticality_json(const MultiGraph& g, const CriticalityReport& r) {
  json doc = {{"n", g.vertex_count()}, {"m", g.edge_count()}, {"critical", r.is_critical}, {"connected", r.connected}};
  if (r.nowhere_zero_flow) doc["nowhere_zero_flow"] = flow_json(g, *r.nowhere_zero_flow);
  if (r.failing_edge) doc["failing_edge"] = *r.failing_edge;
  json per = json::array();
  for (const auto& e : r.per_edge)
    per.push_back({{"edge", e.edge}, {"loop_deleted", e.loop_deleted}, {"minor_has_flow", e.minor_has_flow}});
  doc["per_edge"] = per;
  return doc;
}

inline json bounds_json(const BoundsReport& b) {
  return {{"n", b.n},
          {"m", b.m},
          {"n3", b.n3},
          {"excluded_k2_k4", b.excluded},
          {"m_ge_8n_plus_2_over_5", b.thm_lb},
          {"m_ge_5n_over_3", b.thm_best},
          {"n_plus_n3_minus_1", b.l_main_value},
          {"m_ge_n_plus_n3_minus_1", b.l_main_holds},
          {"equality", b.l_main_equality},
          {"wheel", b.wheel},
          {"odd_wheel", b.odd_wheel},
          {"min_degree_ge_3", b.min_degree_at_least_3},
          {"degree3_forest", b.degree3_forest},
          {"all_hold", b.all_hold()}};
}

inline json census_json(const Census& c) {
  json levels = json::array();
  for (const auto& lv : c.levels) {
    json crit = json::array();
    for (const auto& e : lv.critical) {
      json edges = json::array();
      for (auto [a, b] : e.edges) edges.push_back({a, b});
      crit.push_back({{"m", e.edges.size()},
                      {"edges", edges},
                      {"labeled_copies", e.labeled_copies},
                      {"bounds", bounds_json(e.bounds)},
                      {"lemmas_ok", e.lemmas.ok()},
                      {"lemma_failures", e.lemmas.failures}});
    }
    json level = {{"n", lv.n}, {"universe", lv.universe}, {"graphs_examined", lv.graphs_examined}, {"critical", crit}};
    level["min_edges"] = lv.min_edges ? json(*lv.min_edges) : json(nullptr);
    levels.push_back(level);
  }
  return {{"max_n", c.max_n},
          {"simple_only", c.simple_only},
          {"all_bounds_hold", c.all_bounds_hold},
          {"all_lemmas_hold", c.all_lemmas_hold},
          {"levels", levels}};
}

}  // namespace z3flow
