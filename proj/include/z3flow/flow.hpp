#pragma once

// Z3-flows: incidence vectors, verification, the flow space, an exhaustive
// oracle, and lifting a flow of G/e back to G.

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "z3flow/gf3.hpp"
#include "z3flow/multigraph.hpp"

namespace z3flow {

/// [v,e]: +1 if e points into v, -1 if it leaves v, 0 otherwise. Loops are 0.
inline Gf3 incidence(const Edge& e, VertexId v) {
  if (e.is_loop()) return Gf3(0);
  if (e.head == v) return Gf3(1);
  if (e.tail == v) return Gf3(-1);
  return Gf3(0);
}

/// delta_v, indexed by edge position in g.
inline Gf3Vector incidence_vector(const MultiGraph& g, VertexId v) {
  if (v >= g.vertex_count()) throw GraphError("vertex " + std::to_string(v) + " out of range");
  Gf3Vector out(g.edge_count());
  for (std::size_t p : g.incident_positions(v)) out[p] = incidence(g.edge_at(p), v);
  return out;
}

/// Edge values bound to one graph (by fingerprint). Indexed by edge position.
class Flow {
 public:
  Flow(const MultiGraph& g, Gf3Vector values) : values_(std::move(values)), fingerprint_(g.fingerprint()) {
    if (values_.dimension() != g.edge_count()) throw std::invalid_argument("Flow: one value per edge required");
  }

  const Gf3Vector& values() const { return values_; }
  std::uint64_t graph_fingerprint() const { return fingerprint_; }
  bool bound_to(const MultiGraph& g) const { return fingerprint_ == g.fingerprint(); }

  Gf3 value_at(const MultiGraph& g, EdgeId id) const { return values_[g.position_of(id)]; }

  friend bool operator==(const Flow&, const Flow&) = default;

 private:
  Gf3Vector values_;
  std::uint64_t fingerprint_;
};

struct FlowVerdict {
  bool is_flow = false;
  std::vector<VertexId> violating_vertices;
  std::vector<EdgeId> zero_edges;

  bool nowhere_zero() const { return is_flow && zero_edges.empty(); }
};

inline FlowVerdict verify_flow(const MultiGraph& g, const Gf3Vector& candidate) {
  if (candidate.dimension() != g.edge_count())
    throw std::invalid_argument("verify_flow: candidate has " + std::to_string(candidate.dimension()) +
                                " coordinates, graph has " + std::to_string(g.edge_count()) + " edges");
  FlowVerdict verdict;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    Gf3 net;
    for (std::size_t p : g.incident_positions(v)) net += incidence(g.edge_at(p), v) * candidate[p];
    if (!net.is_zero()) verdict.violating_vertices.push_back(v);
  }
  for (std::size_t p = 0; p < g.edge_count(); ++p)
    if (candidate[p].is_zero()) verdict.zero_edges.push_back(g.edge_at(p).id);
  std::sort(verdict.zero_edges.begin(), verdict.zero_edges.end());
  verdict.is_flow = verdict.violating_vertices.empty();
  return verdict;
}

inline FlowVerdict verify_flow(const MultiGraph& g, const Flow& f) {
  if (!f.bound_to(g)) throw std::invalid_argument("verify_flow: flow belongs to a different graph");
  return verify_flow(g, f.values());
}

/// The matrix whose rows are delta_v for every vertex; its kernel is the flow space.
inline Gf3Matrix incidence_matrix(const MultiGraph& g) {
  Gf3Matrix m(g.edge_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) m.add_row(incidence_vector(g, v), v);
  return m;
}

/// Basis of the Z3-flow space; it has m - n + c members for c components.
inline std::vector<Flow> flow_space_basis(const MultiGraph& g) {
  std::vector<Flow> out;
  for (auto& v : kernel_basis(incidence_matrix(g)).basis) out.emplace_back(g, std::move(v));
  return out;
}

class OracleTooLarge : public std::runtime_error {
 public:
  OracleTooLarge(std::size_t dimension, std::size_t cap)
      : std::runtime_error("oracle too large: flow-space dimension " + std::to_string(dimension) + " exceeds cap " +
                           std::to_string(cap)),
        dimension(dimension),
        cap(cap) {}
  std::size_t dimension;
  std::size_t cap;
};

/// Oracle dimension cap: 20 unless Z3FLOW_ORACLE_CAP is set.
inline std::size_t default_oracle_cap() {
  if (const char* s = std::getenv("Z3FLOW_ORACLE_CAP")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(s, &end, 10);
    if (end != s && *end == '\0') return static_cast<std::size_t>(v);
  }
  return 20;
}

/// Fundamental cycles of a BFS spanning forest, one per non-tree edge in
/// ascending edge-id order. Each cycle carries 1 on its non-tree edge.
inline std::vector<Gf3Vector> fundamental_cycles(const MultiGraph& g, std::vector<std::size_t>* chord_positions = nullptr) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> parent_edge(n, none);  // position of the tree edge to the parent
  std::vector<std::size_t> depth(n, 0);
  std::vector<bool> seen(n, false), in_tree(g.edge_count(), false);
  for (VertexId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = true;
    std::queue<VertexId> q;
    q.push(s);
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop();
      for (std::size_t p : g.incident_positions(v)) {
        VertexId w = g.edge_at(p).other(v);
        if (seen[w]) continue;
        seen[w] = true;
        parent_edge[w] = p;
        in_tree[p] = true;
        depth[w] = depth[v] + 1;
        q.push(w);
      }
    }
  }

  std::vector<std::size_t> chords;
  for (std::size_t p = 0; p < g.edge_count(); ++p)
    if (!in_tree[p]) chords.push_back(p);
  std::sort(chords.begin(), chords.end(), [&](std::size_t a, std::size_t b) { return g.edge_at(a).id < g.edge_at(b).id; });

  std::vector<Gf3Vector> cycles;
  for (std::size_t c : chords) {
    Gf3Vector cyc(g.edge_count());
    const Edge& chord = g.edge_at(c);
    cyc[c] = Gf3(1);
    // One unit enters chord.head; walk both endpoints up to their common
    // ancestor, pushing the unit from head back towards tail.
    auto push_up = [&](VertexId v, bool towards_root) {
      const Edge& te = g.edge_at(parent_edge[v]);
      VertexId up = te.other(v);
      // moving v -> up when towards_root, else up -> v
      bool along = towards_root ? (te.tail == v) : (te.tail == up);
      cyc[parent_edge[v]] += along ? Gf3(1) : Gf3(-1);
      return up;
    };
    VertexId a = chord.head, b = chord.tail;
    while (a != b) {
      if (depth[a] >= depth[b])
        a = push_up(a, true);
      else
        b = push_up(b, false);
    }
    cycles.push_back(std::move(cyc));
  }
  if (chord_positions) *chord_positions = std::move(chords);
  return cycles;
}

/// Exhaustive search over the flow space for a nowhere-zero flow.
///
/// The flow space is parameterized by the chord values of a spanning forest;
/// coefficient vectors are visited in lexicographic order (0 < 1 < 2, lowest
/// chord id most significant) and the first nowhere-zero flow is returned.
/// Coefficients equal to 0 are skipped outright since they zero their chord.
/// Never touches the constraint-subspace machinery.
inline std::optional<Flow> oracle_nz_flow(const MultiGraph& g, std::size_t cap = default_oracle_cap()) {
  std::vector<std::size_t> chords;
  const std::vector<Gf3Vector> cycles = fundamental_cycles(g, &chords);
  const std::size_t d = cycles.size();
  if (d > cap) throw OracleTooLarge(d, cap);

  // Tree edges are checked as soon as the last cycle through them is fixed.
  std::vector<std::vector<std::size_t>> settle(d + 1);
  {
    std::vector<bool> is_chord(g.edge_count(), false);
    for (std::size_t c : chords) is_chord[c] = true;
    for (std::size_t p = 0; p < g.edge_count(); ++p) {
      if (is_chord[p]) continue;
      std::size_t last = 0;
      for (std::size_t i = 0; i < d; ++i)
        if (!cycles[i][p].is_zero()) last = i + 1;
      settle[last].push_back(p);
    }
  }
  if (!settle[0].empty()) return std::nullopt;  // a tree edge on no cycle is a bridge

  Gf3Vector acc(g.edge_count());
  // Iterative depth-first odometer.
  std::size_t level = 0;
  std::vector<int> choice(d, 0);
  while (true) {
    if (level == d) return Flow(g, acc);
    if (choice[level] == 2) {
      acc.add_scaled(cycles[level], -Gf3(2));
      choice[level] = 0;
      if (level == 0) return std::nullopt;
      --level;
      continue;
    }
    if (choice[level] == 1) acc.add_scaled(cycles[level], -Gf3(1));
    ++choice[level];
    acc.add_scaled(cycles[level], Gf3(choice[level]));
    bool ok = true;
    for (std::size_t p : settle[level + 1])
      if (acc[p].is_zero()) {
        ok = false;
        break;
      }
    if (ok) ++level;
  }
}

/// Lifts a flow of G/e (as produced by contract_edge) to G. The value on e is
/// the one forced by conservation at the tail of e; the head is re-checked.
inline Flow extend_flow(const MultiGraph& g, EdgeId e, const Flow& contracted_flow, const EdgeCorrespondence& corr) {
  if (corr.contracted_edge != e) throw std::invalid_argument("extend_flow: correspondence is for a different edge");
  const MultiGraph child = contract_edge(g, e).first;
  if (!contracted_flow.bound_to(child)) throw std::invalid_argument("extend_flow: flow is not on G/e");
  if (!verify_flow(child, contracted_flow).is_flow) throw std::invalid_argument("extend_flow: input is not a flow of G/e");

  Gf3Vector values(g.edge_count());
  for (std::size_t cp = 0; cp < child.edge_count(); ++cp) {
    EdgeId parent = corr.parent_edge.at(child.edge_at(cp).id);
    values[g.position_of(parent)] = contracted_flow.values()[cp];
  }
  const std::size_t ep = g.position_of(e);
  const Edge& target = g.edge_at(ep);
  auto forced_at = [&](VertexId v) {
    Gf3 rest;
    for (std::size_t p : g.incident_positions(v))
      if (p != ep) rest += incidence(g.edge_at(p), v) * values[p];
    return -rest / incidence(target, v);
  };
  const Gf3 at_tail = forced_at(target.tail);
  if (forced_at(target.head) != at_tail) throw std::logic_error("extend_flow: tail and head disagree on the forced value");
  values[ep] = at_tail;
  Flow out(g, std::move(values));
  if (!verify_flow(g, out).is_flow) throw std::logic_error("extend_flow: lifted vector is not a flow");
  return out;
}

struct ZeroEdgeFlow {
  Flow flow;
  bool zero_at_edge;  // the lifted value on e is 0
};

/// Lifts the oracle's nowhere-zero flow of G/e to G, if G/e has one. For a
/// flow-critical G the result is zero exactly on e.
inline std::optional<ZeroEdgeFlow> zero_edge_flow(const MultiGraph& g, EdgeId e, std::size_t cap = default_oracle_cap()) {
  auto [child, corr] = contract_edge(g, e);
  auto nz = oracle_nz_flow(child, cap);
  if (!nz) return std::nullopt;
  Flow lifted = extend_flow(g, e, *nz, corr);
  const bool zero = lifted.value_at(g, e).is_zero();
  return ZeroEdgeFlow{std::move(lifted), zero};
}

}  // namespace z3flow
