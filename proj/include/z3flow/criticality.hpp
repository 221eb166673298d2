#pragma once

// Certification of Z3-flow-criticality against the exhaustive oracle, density
// bounds for critical graphs, the structural checks every critical graph must
// pass, and an exhaustive census of small critical graphs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "z3flow/delta.hpp"
#include "z3flow/flow.hpp"
#include "z3flow/multigraph.hpp"

namespace z3flow {

struct EdgeMinorResult {
  EdgeId edge;
  bool loop_deleted;      // the edge was a loop, so the minor is G - e
  bool minor_has_flow;
};

struct CriticalityReport {
  bool is_critical = false;
  bool connected = false;
  std::optional<Flow> nowhere_zero_flow;  // evidence against: g itself has one
  std::optional<EdgeId> failing_edge;     // evidence against: G/e has none
  std::vector<EdgeMinorResult> per_edge;
};

/// G is critical iff it is connected, has no nowhere-zero Z3-flow, and G/e has
/// one for every edge e. Only the oracle is consulted.
inline CriticalityReport certify_criticality(const MultiGraph& g, std::size_t cap = default_oracle_cap()) {
  CriticalityReport r;
  r.connected = is_connected(g);
  if (!r.connected) return r;
  r.nowhere_zero_flow = oracle_nz_flow(g, cap);
  if (r.nowhere_zero_flow) return r;
  for (const Edge& e : g.edges()) {
    const bool loop = e.is_loop();
    const bool has = oracle_nz_flow(minor_of(g, e.id), cap).has_value();
    r.per_edge.push_back(EdgeMinorResult{e.id, loop, has});
    if (!has && !r.failing_edge) r.failing_edge = e.id;
  }
  r.is_critical = !r.failing_edge;
  return r;
}

class BoundViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct BoundsReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t n3 = 0;
  bool excluded = false;  // K2 or K4; the density theorems do not apply
  bool thm_lb = false;    // 5m >= 8n + 2
  bool thm_best = false;  // 3m >= 5n
  std::size_t l_main_value = 0;  // n + n3 - 1
  bool l_main_holds = false;     // m >= n + n3 - 1
  bool l_main_equality = false;
  bool wheel = false;
  bool min_degree_at_least_3 = false;
  bool degree3_forest = false;
  bool odd_wheel = false;

  bool lemma_nocycle() const { return min_degree_at_least_3 && (degree3_forest || odd_wheel); }
  bool all_hold() const {
    return excluded || (thm_lb && thm_best && l_main_holds && l_main_equality == wheel && lemma_nocycle());
  }
};

inline bool is_k2(const MultiGraph& g) { return g.vertex_count() == 2 && g.edge_count() == 1 && g.loop_count() == 0; }
inline bool is_k4(const MultiGraph& g) {
  if (g.vertex_count() != 4 || g.edge_count() != 6 || !g.is_simple()) return false;
  auto d = degree_profile(g);
  return d.min_degree == 3 && d.max_degree == 3;
}

/// Density and structure checks for a critical graph. Throws BoundViolation if
/// any theorem fails on a graph it applies to.
inline BoundsReport bounds_report(const MultiGraph& g, const CriticalityReport& report) {
  if (!report.is_critical) throw std::invalid_argument("bounds_report: graph is not Z3-flow-critical");
  BoundsReport b;
  const auto profile = degree_profile(g);
  b.n = g.vertex_count();
  b.m = g.edge_count();
  b.n3 = profile.n3;
  b.excluded = is_k2(g) || is_k4(g);
  b.thm_lb = 5 * b.m >= 8 * b.n + 2;
  b.thm_best = 3 * b.m >= 5 * b.n;
  b.l_main_value = b.n + b.n3 - 1;
  b.l_main_holds = b.m >= b.l_main_value;
  b.l_main_equality = b.m == b.l_main_value;
  auto wheel = wheel_recognition(g);
  b.wheel = wheel.has_value();
  b.odd_wheel = wheel && wheel->rim_length % 2 == 1;
  b.min_degree_at_least_3 = profile.min_degree >= 3;
  b.degree3_forest = degree3_induced_forest(g);
  if (!b.all_hold()) {
    std::string what = "bounds_report: critical graph with n=" + std::to_string(b.n) + ", m=" + std::to_string(b.m) + " violates";
    if (!b.thm_lb) what += " m>=(8n+2)/5";
    if (!b.thm_best) what += " m>=5n/3";
    if (!b.l_main_holds) what += " m>=n+n3-1";
    if (b.l_main_equality != b.wheel) what += " equality-iff-wheel";
    if (!b.lemma_nocycle()) what += " min-degree/degree-3-forest";
    throw BoundViolation(what);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Structural checks run on every critical graph found.

/// Exact isomorphism test for small simple graphs by trying every bijection.
inline bool isomorphic_simple(const MultiGraph& a, const MultiGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  const std::size_t n = a.vertex_count();
  auto adj = [n](const MultiGraph& g) {
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    for (const Edge& e : g.edges()) {
      ++m[e.tail][e.head];
      if (!e.is_loop()) ++m[e.head][e.tail];
    }
    return m;
  };
  const auto ma = adj(a), mb = adj(b);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) ok = ma[i][j] == mb[perm[i]][perm[j]];
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline MultiGraph complete_graph(std::size_t n) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId j = 1; j < n; ++j)
    for (VertexId i = 0; i < j; ++i) e.emplace_back(i, j);
  return MultiGraph(n, e);
}

struct LemmaReport {
  bool min_degree_ok = true;           // critical and not K2 => min degree >= 3
  bool degree3_forest_ok = true;       // ... and degree-3 vertices induce a forest unless an odd wheel
  bool cubic_is_k4_ok = true;          // cubic critical => K4
  bool independence_ok = true;         // every u: Delta_v (v != u) independent
  bool zero_edge_ok = true;            // every e: lifted flow is zero exactly on e
  bool loopless_ok = true;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Runs every structural check on a graph already certified critical.
inline LemmaReport check_lemmas(const MultiGraph& g, std::size_t cap = default_oracle_cap()) {
  LemmaReport r;
  auto fail = [&r](bool& flag, std::string msg) {
    flag = false;
    r.failures.push_back(std::move(msg));
  };
  const auto profile = degree_profile(g);
  if (g.loop_count() != 0) fail(r.loopless_ok, "critical graph has a loop");
  if (!is_k2(g)) {
    if (profile.min_degree < 3) fail(r.min_degree_ok, "minimum degree " + std::to_string(profile.min_degree));
    auto wheel = wheel_recognition(g);
    const bool odd_wheel = wheel && wheel->rim_length % 2 == 1;
    if (!odd_wheel && !degree3_induced_forest(g)) fail(r.degree3_forest_ok, "degree-3 vertices contain a cycle");
    if (profile.max_degree == 3 && !(g.is_simple() && isomorphic_simple(g, complete_graph(4))))
      fail(r.cubic_is_k4_ok, "cubic critical graph other than K4");
  }
  if (g.loop_count() == 0) {
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      auto res = independence_test(g, u, IndependenceOptions{.relax_preconditions = true});
      const auto* data = std::get_if<IndependentData>(&res);
      if (!data || data->echelon.rank != data->expected_rank)
        fail(r.independence_ok, "constraint subspaces dependent with u=" + std::to_string(u));
    }
  }
  for (const Edge& e : g.edges()) {
    if (e.is_loop()) continue;
    auto z = zero_edge_flow(g, e.id, cap);
    const bool exact = z && verify_flow(g, z->flow).zero_edges == std::vector<EdgeId>{e.id};
    if (!exact) fail(r.zero_edge_ok, "no flow zero exactly on edge " + std::to_string(e.id));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Census.

/// Canonical form of a small graph: the lexicographically least sorted edge
/// list (as unordered pairs, with multiplicity) over all vertex relabelings.
inline std::vector<std::pair<VertexId, VertexId>> canonical_edges(const MultiGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<VertexId, VertexId>> best;
  bool have = false;
  std::vector<std::pair<VertexId, VertexId>> cur;
  do {
    cur.clear();
    for (const Edge& e : g.edges()) {
      VertexId a = perm[e.tail], b = perm[e.head];
      cur.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(cur.begin(), cur.end());
    if (!have || cur < best) {
      best = cur;
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

struct CensusEntry {
  std::vector<std::pair<VertexId, VertexId>> edges;  // canonical, oriented low -> high
  std::size_t labeled_copies = 0;
  BoundsReport bounds;
  LemmaReport lemmas;
};

struct CensusLevel {
  std::size_t n = 0;
  std::string universe;
  std::size_t graphs_examined = 0;
  std::vector<CensusEntry> critical;  // sorted by (m, edges)
  std::optional<std::size_t> min_edges;  // l(n) over the examined universe
};

struct Census {
  std::size_t max_n = 0;
  bool simple_only = true;
  std::vector<CensusLevel> levels;
  bool all_bounds_hold = true;
  bool all_lemmas_hold = true;
};

inline constexpr std::size_t kMaxSurveyVertices = 7;

namespace detail {

inline void record_critical(CensusLevel& level, const MultiGraph& g, std::size_t cap,
                            std::map<std::vector<std::pair<VertexId, VertexId>>, std::size_t>& index) {
  auto canon = canonical_edges(g);
  auto it = index.find(canon);
  if (it != index.end()) {
    ++level.critical[it->second].labeled_copies;
    return;
  }
  CensusEntry entry;
  MultiGraph cg(g.vertex_count(), canon);
  CriticalityReport again = certify_criticality(cg, cap);
  if (!again.is_critical) throw std::logic_error("survey: canonical relabeling is not critical");
  entry.edges = std::move(canon);
  entry.labeled_copies = 1;
  entry.bounds = bounds_report(cg, again);
  entry.lemmas = check_lemmas(cg, cap);
  index.emplace(entry.edges, level.critical.size());
  level.critical.push_back(std::move(entry));
}

}  // namespace detail

/// Exhaustive census of critical graphs on 1..max_n vertices.
///
/// Simple mode visits every labeled simple graph (connected ones are
/// certified). Multigraph mode additionally visits, for n <= 3, every
/// multigraph with at most 3 parallel edges per vertex pair.
inline Census survey(std::size_t max_n, bool simple_only = true, std::size_t cap = default_oracle_cap()) {
  if (max_n > kMaxSurveyVertices)
    throw std::invalid_argument("survey: max_n " + std::to_string(max_n) + " exceeds " + std::to_string(kMaxSurveyVertices));
  Census census;
  census.max_n = max_n;
  census.simple_only = simple_only;
  for (std::size_t n = 1; n <= max_n; ++n) {
    CensusLevel level;
    level.n = n;
    std::map<std::vector<std::pair<VertexId, VertexId>>, std::size_t> index;
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (VertexId j = 1; j < n; ++j)
      for (VertexId i = 0; i < j; ++i) pairs.emplace_back(i, j);
    const std::size_t max_mult = (!simple_only && n <= 3) ? 3 : 1;
    level.universe = max_mult == 1 ? "connected labeled simple graphs"
                                   : "connected labeled multigraphs, at most 3 parallel edges per pair";

    std::vector<std::size_t> mult(pairs.size(), 0);
    while (true) {
      std::vector<std::pair<VertexId, VertexId>> edges;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t k = 0; k < mult[i]; ++k) edges.push_back(pairs[i]);
      MultiGraph g(n, edges);
      if (is_connected(g)) {
        ++level.graphs_examined;
        if (certify_criticality(g, cap).is_critical) detail::record_critical(level, g, cap, index);
      }
      std::size_t i = 0;
      while (i < mult.size() && mult[i] == max_mult) mult[i++] = 0;
      if (i == mult.size()) break;
      ++mult[i];
    }

    std::sort(level.critical.begin(), level.critical.end(), [](const CensusEntry& a, const CensusEntry& b) {
      return std::make_pair(a.edges.size(), a.edges) < std::make_pair(b.edges.size(), b.edges);
    });
    if (!level.critical.empty()) level.min_edges = level.critical.front().edges.size();
    for (const auto& c : level.critical) {
      census.all_bounds_hold = census.all_bounds_hold && c.bounds.all_hold();
      census.all_lemmas_hold = census.all_lemmas_hold && c.lemmas.ok();
    }
    census.levels.push_back(std::move(level));
  }
  return census;
}

}  // namespace z3flow
