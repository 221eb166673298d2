#pragma once

// Nowhere-zero Z3-flow solver for sparse graphs.
//
// solve_sparse makes a single pass and ends in exactly one of three outcomes:
// a nowhere-zero flow, a proof that none exists, or an irrelevant edge e
// (G has a nowhere-zero flow iff G/e does). The passes are, in order:
//   1. drop loops (any nonzero value works on a loop);
//   2. a degree-1 vertex means no flow; a degree-2 vertex makes its edges irrelevant;
//   3. a cubic graph has a flow iff it is bipartite;
//   4. otherwise exclude a vertex u of degree >= 4 and test the constraint
//      subspaces of the other vertices for independence. A dependency yields
//      an irrelevant edge; independence leaves a space of dimension
//      b <= 3k + 1 (k = m - 5n/3) which is searched exhaustively.
// solve_full closes the loop by contracting irrelevant edges and lifting.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "z3flow/delta.hpp"
#include "z3flow/flow.hpp"
#include "z3flow/multigraph.hpp"

namespace z3flow {

enum class FlowSource { Trivial, CubicBipartite, VPerpSearch, Lifted, Components };
enum class NoFlowReason { DegreeOne, NonBipartiteCubic, VPerpExhausted, ComponentFailure };
enum class IrrelevantProvenance { DegreeTwo, DependencyWitness };

inline const char* to_string(FlowSource s) {
  switch (s) {
    case FlowSource::Trivial: return "trivial";
    case FlowSource::CubicBipartite: return "cubic bipartite";
    case FlowSource::VPerpSearch: return "V^⊥ search";
    case FlowSource::Lifted: return "lifted";
    case FlowSource::Components: return "components";
  }
  return "?";
}

inline const char* to_string(NoFlowReason r) {
  switch (r) {
    case NoFlowReason::DegreeOne: return "degree-1 vertex";
    case NoFlowReason::NonBipartiteCubic: return "non-bipartite cubic";
    case NoFlowReason::VPerpExhausted: return "V^⊥ exhausted";
    case NoFlowReason::ComponentFailure: return "component-wise failure";
  }
  return "?";
}

inline const char* to_string(IrrelevantProvenance p) {
  switch (p) {
    case IrrelevantProvenance::DegreeTwo: return "degree-2";
    case IrrelevantProvenance::DependencyWitness: return "dependency-witness";
  }
  return "?";
}

struct FlowFound {
  Flow flow;
  FlowSource source;
};
struct NoFlow {
  NoFlowReason reason;
};
struct IrrelevantEdge {
  EdgeId edge;
  IrrelevantProvenance provenance;
};
using SolveOutcome = std::variant<FlowFound, NoFlow, IrrelevantEdge>;

/// Sparsity of the graph reaching the independence step. k = m - 5n/3 is kept
/// exactly as three_k = 3m - 5n.
struct SparsityBudget {
  std::size_t n = 0;
  std::size_t m = 0;
  std::int64_t three_k = 0;
  bool independent_branch = false;
  std::size_t b = 0;
  std::uint64_t enumerated = 0;     // assignments tested, 2^b in the independent branch
  std::uint64_t nowhere_zero = 0;   // how many of them were nowhere-zero

  /// 3 * max(k, 0) + 1
  std::int64_t bound() const { return std::max<std::int64_t>(three_k, 0) + 1; }
  bool within_bound() const { return static_cast<std::int64_t>(b) <= bound(); }
};

class SolverError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct LoopRecord {
  EdgeId edge;
  Gf3 value;
};

struct Preprocessed {
  MultiGraph reduced;               // loopless; same vertex numbering and edge ids
  std::vector<LoopRecord> loops;    // removed loops with the value they get back
  std::vector<std::string> log;
  std::optional<SolveOutcome> early;
};

inline Preprocessed preprocess(const MultiGraph& g) {
  if (!is_connected(g)) throw GraphError("preprocess: graph is not connected; split it into components first");
  Preprocessed out;
  std::vector<Edge> kept;
  for (const Edge& e : g.edges()) {
    if (e.is_loop()) {
      out.loops.push_back(LoopRecord{e.id, Gf3(1)});
      out.log.push_back("removed loop " + std::to_string(e.id) + " (value 1)");
    } else {
      kept.push_back(e);
    }
  }
  out.reduced = MultiGraph(g.vertex_count(), std::move(kept));
  const auto profile = degree_profile(out.reduced);
  if (out.reduced.vertex_count() <= 1) return out;
  for (VertexId v = 0; v < out.reduced.vertex_count(); ++v) {
    if (profile.degrees[v] == 1) {
      out.log.push_back("vertex " + std::to_string(v) + " has degree 1");
      out.early = NoFlow{NoFlowReason::DegreeOne};
      return out;
    }
  }
  for (VertexId v = 0; v < out.reduced.vertex_count(); ++v) {
    if (profile.degrees[v] == 2) {
      EdgeId e = out.reduced.edge_at(out.reduced.incident_positions(v).front()).id;
      out.log.push_back("vertex " + std::to_string(v) + " has degree 2; edge " + std::to_string(e) + " is irrelevant");
      out.early = IrrelevantEdge{e, IrrelevantProvenance::DegreeTwo};
      return out;
    }
  }
  return out;
}

/// A 3-regular graph has a nowhere-zero Z3-flow iff it is bipartite: route one
/// unit from side A to side B along every edge (value 1 on A->B edges, 2 on
/// B->A edges), so each vertex sees 3 = 0 net.
inline SolveOutcome cubic_bipartite_flow(const MultiGraph& g) {
  if (g.loop_count() != 0) throw GraphError("cubic_bipartite_flow: graph has loops");
  if (!is_connected(g)) throw GraphError("cubic_bipartite_flow: graph is not connected");
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) != 3) throw GraphError("cubic_bipartite_flow: vertex " + std::to_string(v) + " does not have degree 3");
  auto sides = bipartition(g);
  if (!sides) return NoFlow{NoFlowReason::NonBipartiteCubic};
  Gf3Vector values(g.edge_count());
  for (std::size_t p = 0; p < g.edge_count(); ++p) values[p] = (*sides)[g.edge_at(p).tail] == 0 ? Gf3(1) : Gf3(2);
  return FlowFound{Flow(g, std::move(values)), FlowSource::CubicBipartite};
}

namespace detail {

// Puts the reduced graph's flow back on g, giving each removed loop its value.
inline Flow reattach_loops(const MultiGraph& g, const MultiGraph& reduced, const Flow& f, const std::vector<LoopRecord>& loops) {
  Gf3Vector values(g.edge_count());
  for (std::size_t p = 0; p < reduced.edge_count(); ++p) values[g.position_of(reduced.edge_at(p).id)] = f.values()[p];
  for (const auto& l : loops) values[g.position_of(l.edge)] = l.value;
  return Flow(g, std::move(values));
}

inline void require_nowhere_zero(const MultiGraph& g, const Flow& f, const char* where) {
  if (!verify_flow(g, f).nowhere_zero()) throw SolverError(std::string(where) + ": produced flow is not nowhere-zero");
}

}  // namespace detail

inline constexpr std::size_t kMaxFreeEdges = 30;

struct SparseResult {
  SolveOutcome outcome;
  SparsityBudget budget;
};

inline SparseResult solve_sparse(const MultiGraph& g) {
  Preprocessed pre = preprocess(g);
  const MultiGraph& h = pre.reduced;
  SparsityBudget budget;
  budget.n = h.vertex_count();
  budget.m = h.edge_count();
  budget.three_k = 3 * static_cast<std::int64_t>(budget.m) - 5 * static_cast<std::int64_t>(budget.n);

  auto found = [&](const Flow& reduced_flow, FlowSource src) {
    Flow f = detail::reattach_loops(g, h, reduced_flow, pre.loops);
    detail::require_nowhere_zero(g, f, "solve_sparse");
    return SparseResult{FlowFound{std::move(f), src}, budget};
  };

  if (pre.early) return SparseResult{*pre.early, budget};
  if (h.vertex_count() <= 1) return found(Flow(h, Gf3Vector(0)), FlowSource::Trivial);

  const auto profile = degree_profile(h);
  if (profile.max_degree == 3) {
    SolveOutcome cubic = cubic_bipartite_flow(h);
    if (auto* ff = std::get_if<FlowFound>(&cubic)) return found(ff->flow, FlowSource::CubicBipartite);
    return SparseResult{cubic, budget};
  }

  VertexId u = 0;
  for (VertexId v = 1; v < h.vertex_count(); ++v)
    if (profile.degrees[v] > profile.degrees[u]) u = v;

  IndependenceResult ind = independence_test(h, u);
  if (auto* w = std::get_if<DependencyWitness>(&ind))
    return SparseResult{IrrelevantEdge{witness_to_irrelevant_edge(h, *w), IrrelevantProvenance::DependencyWitness}, budget};

  const auto& data = std::get<IndependentData>(ind);
  if (data.echelon.rank != data.expected_rank) throw SolverError("solve_sparse: independent rank mismatch");
  VPerpData vp = vperp(h, data);
  budget.independent_branch = true;
  budget.b = vp.b;
  if (!budget.within_bound())
    throw SolverError("solve_sparse: b = " + std::to_string(vp.b) + " exceeds 3k+1 = " + std::to_string(budget.bound()));
  if (vp.b > kMaxFreeEdges) throw SolverError("solve_sparse: " + std::to_string(vp.b) + " free edges is too many to enumerate");

  // Odometer over {1,2}^B, last free edge fastest. Every assignment is tested;
  // the first nowhere-zero one is kept.
  std::optional<Gf3Vector> first;
  Gf3Vector assignment(vp.b);
  for (std::size_t i = 0; i < vp.b; ++i) assignment[i] = Gf3(1);
  while (true) {
    ++budget.enumerated;
    Gf3Vector candidate = vp.reconstruct(assignment);
    if (!std::any_of(candidate.begin(), candidate.end(), [](Gf3 x) { return x.is_zero(); })) {
      ++budget.nowhere_zero;
      if (!first) first = std::move(candidate);
    }
    std::size_t i = vp.b;
    while (i > 0 && assignment[i - 1] == Gf3(2)) assignment[--i] = Gf3(1);
    if (i == 0) break;
    assignment[i - 1] = Gf3(2);
  }
  if (budget.enumerated != (std::uint64_t{1} << vp.b)) throw SolverError("solve_sparse: enumeration count is not 2^b");
  if (first) return found(Flow(h, std::move(*first)), FlowSource::VPerpSearch);
  return SparseResult{NoFlow{NoFlowReason::VPerpExhausted}, budget};
}

struct FullResult {
  SolveOutcome outcome;  // FlowFound or NoFlow
  std::vector<SparsityBudget> budgets;
  std::vector<IrrelevantEdge> contractions;  // in the order they were applied
};

/// Repeats solve_sparse, contracting each irrelevant edge, then lifts the
/// final flow back through every contraction.
inline FullResult solve_full(const MultiGraph& g) {
  if (!is_connected(g)) throw GraphError("solve_full: graph is not connected");
  struct Step {
    MultiGraph parent;
    EdgeCorrespondence corr;
    IrrelevantProvenance provenance;
  };
  std::vector<Step> steps;
  FullResult result{NoFlow{NoFlowReason::DegreeOne}, {}, {}};
  MultiGraph current = g;
  for (std::size_t depth = 0;; ++depth) {
    if (depth > g.vertex_count()) throw SolverError("solve_full: contraction depth exceeded vertex count");
    SparseResult r = solve_sparse(current);
    result.budgets.push_back(r.budget);
    if (auto* ie = std::get_if<IrrelevantEdge>(&r.outcome)) {
      result.contractions.push_back(*ie);
      auto [child, corr] = contract_edge(current, ie->edge);
      steps.push_back(Step{std::move(current), std::move(corr), ie->provenance});
      current = std::move(child);
      continue;
    }
    if (std::holds_alternative<NoFlow>(r.outcome)) {
      result.outcome = r.outcome;
      return result;
    }
    FlowFound ff = std::get<FlowFound>(std::move(r.outcome));
    Flow f = std::move(ff.flow);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      f = extend_flow(it->parent, it->corr.contracted_edge, f, it->corr);
      // Both provenances force a nonzero value on the contracted edge.
      detail::require_nowhere_zero(it->parent, f,
                                   it->provenance == IrrelevantProvenance::DegreeTwo ? "degree-2 lift" : "witness lift");
    }
    detail::require_nowhere_zero(g, f, "solve_full");
    result.outcome = FlowFound{std::move(f), steps.empty() ? ff.source : FlowSource::Lifted};
    return result;
  }
}

/// solve_full on each component; a flow exists iff every component has one.
inline SolveOutcome solve_components(const MultiGraph& g) {
  if (is_connected(g)) return solve_full(g).outcome;
  Gf3Vector values(g.edge_count());
  for (const MultiGraph& part : split_components(g)) {
    SolveOutcome o = solve_full(part).outcome;
    if (!std::holds_alternative<FlowFound>(o)) return NoFlow{NoFlowReason::ComponentFailure};
    const Flow& f = std::get<FlowFound>(o).flow;
    for (std::size_t p = 0; p < part.edge_count(); ++p) values[g.position_of(part.edge_at(p).id)] = f.values()[p];
  }
  Flow f(g, std::move(values));
  detail::require_nowhere_zero(g, f, "solve_components");
  return FlowFound{std::move(f), FlowSource::Components};
}

}  // namespace z3flow
