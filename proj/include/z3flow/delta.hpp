#pragma once

// Per-vertex constraint subspaces satisfied by every nowhere-zero Z3-flow.
//
// Delta_v is spanned by delta_v, plus delta_{v,e1,e2} when deg v = 3. Testing
// whether the subspaces for v != u are independent either yields a
// dependency witness (which pins down an edge that can be contracted without
// changing the answer) or an echelon form whose kernel contains every
// nowhere-zero flow and is parameterized by a small free edge set B.

#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "z3flow/flow.hpp"
#include "z3flow/gf3.hpp"
#include "z3flow/multigraph.hpp"

namespace z3flow {

/// delta_{v,e1,e2}: [v,e1] on e1, -[v,e2] on e2, zero elsewhere.
inline Gf3Vector delta_pair(const MultiGraph& g, VertexId v, EdgeId e1, EdgeId e2) {
  if (e1 == e2) throw GraphError("delta_pair: edges must be distinct");
  const Edge& a = g.edge(e1);
  const Edge& b = g.edge(e2);
  for (const Edge* x : {&a, &b}) {
    if (x->is_loop()) throw GraphError("delta_pair: edge " + std::to_string(x->id) + " is a loop");
    if (!x->incident(v))
      throw GraphError("delta_pair: edge " + std::to_string(x->id) + " is not incident with vertex " + std::to_string(v));
  }
  Gf3Vector out(g.edge_count());
  out[g.position_of(e1)] = incidence(a, v);
  out[g.position_of(e2)] = -incidence(b, v);
  return out;
}

struct GeneratorLabel {
  VertexId vertex;
  std::size_t index;  // 0 = delta_v, 1 = delta_{v,e1,e2}
  friend bool operator==(const GeneratorLabel&, const GeneratorLabel&) = default;
};

/// Generators of Delta_v. For a degree-3 vertex the pair uses its two
/// lowest-id incident edges.
inline std::vector<Gf3Vector> delta_generators(const MultiGraph& g, VertexId v) {
  std::vector<Gf3Vector> gens{incidence_vector(g, v)};
  if (g.degree(v) == 3) {
    const auto& inc = g.incident_positions(v);
    gens.push_back(delta_pair(g, v, g.edge_at(inc[0]).id, g.edge_at(inc[1]).id));
  }
  return gens;
}

/// Every vector of span(generators); 3 or 9 of them.
inline std::vector<Gf3Vector> delta_span(const MultiGraph& g, VertexId v) {
  const auto gens = delta_generators(g, v);
  std::vector<Gf3Vector> out;
  if (gens.size() == 1) {
    for (int a = 0; a < 3; ++a) out.push_back(Gf3(a) * gens[0]);
  } else {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) out.push_back(Gf3(a) * gens[0] + Gf3(b) * gens[1]);
  }
  return out;
}

/// x_v in Delta_v for every vertex, with x_u = 0, not all zero, summing to 0.
struct DependencyWitness {
  VertexId excluded = 0;
  std::vector<Gf3Vector> x;               // x[v]
  std::vector<std::vector<Gf3>> weights;  // per-vertex generator coefficients
};

struct IndependentData {
  VertexId excluded = 0;
  std::size_t expected_rank = 0;
  BasicGf3Matrix<GeneratorLabel> generators{0};
  EchelonForm echelon;
};

using IndependenceResult = std::variant<IndependentData, DependencyWitness>;

struct IndependenceOptions {
  // Test harnesses may pick a degree-3 (or any) vertex as u, and probe graphs
  // outside the solver's regime (e.g. K2).
  bool relax_preconditions = false;
};

/// Checks the witness shape against g; throws on the first violated property.
inline void validate_witness(const MultiGraph& g, const DependencyWitness& w) {
  const std::size_t n = g.vertex_count();
  if (w.x.size() != n || w.excluded >= n) throw std::invalid_argument("witness: wrong vertex count");
  if (!w.x[w.excluded].is_zero()) throw std::invalid_argument("witness: x_u is not zero");
  Gf3Vector sum(g.edge_count());
  bool any = false;
  for (VertexId v = 0; v < n; ++v) {
    if (w.x[v].dimension() != g.edge_count()) throw std::invalid_argument("witness: wrong dimension");
    sum += w.x[v];
    any = any || !w.x[v].is_zero();
    const auto span = delta_span(g, v);
    if (std::find(span.begin(), span.end(), w.x[v]) == span.end())
      throw std::invalid_argument("witness: x_" + std::to_string(v) + " is not in Delta_v");
  }
  if (!any) throw std::invalid_argument("witness: all vectors are zero");
  if (!sum.is_zero()) throw std::invalid_argument("witness: vectors do not sum to zero");
}

inline IndependenceResult independence_test(const MultiGraph& g, VertexId u, IndependenceOptions opts = {}) {
  if (u >= g.vertex_count()) throw GraphError("independence_test: vertex " + std::to_string(u) + " out of range");
  if (!opts.relax_preconditions) {
    if (!is_connected(g)) throw GraphError("independence_test: graph is not connected");
    if (g.loop_count() != 0) throw GraphError("independence_test: graph has loops");
    const auto profile = degree_profile(g);
    if (profile.min_degree < 3) throw GraphError("independence_test: minimum degree is below 3");
    if (profile.degrees[u] < 4) throw GraphError("independence_test: excluded vertex has degree below 4");
  } else if (g.loop_count() != 0) {
    throw GraphError("independence_test: graph has loops");
  }

  BasicGf3Matrix<GeneratorLabel> m(g.edge_count());
  std::size_t expected = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (v == u) continue;
    auto gens = delta_generators(g, v);
    expected += gens.size();
    for (std::size_t i = 0; i < gens.size(); ++i) m.add_row(std::move(gens[i]), GeneratorLabel{v, i});
  }
  EchelonForm ef = rref(m);
  if (ef.null_combinations.empty())
    return IndependentData{u, expected, std::move(m), std::move(ef)};

  const Gf3Vector& lambda = ef.null_combinations.front();
  DependencyWitness w;
  w.excluded = u;
  w.x.assign(g.vertex_count(), Gf3Vector(g.edge_count()));
  w.weights.assign(g.vertex_count(), {});
  for (std::size_t r = 0; r < m.row_count(); ++r) {
    const auto& lab = m.label(r);
    w.x[lab.vertex].add_scaled(m.row(r), lambda[r]);
    w.weights[lab.vertex].push_back(lambda[r]);
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    bool nonzero_weight = false;
    for (Gf3 c : w.weights[v]) nonzero_weight = nonzero_weight || !c.is_zero();
    if (nonzero_weight && w.x[v].is_zero())
      throw std::logic_error("independence_test: generators of vertex " + std::to_string(v) + " are dependent");
  }
  validate_witness(g, w);
  return w;
}

/// Breadth-first search from u through vertices with x_v = 0; returns the
/// first edge reaching a vertex w with x_w != 0. Vertices are expanded in BFS
/// order and edges in ascending id. Any such boundary edge is irrelevant:
/// G has a nowhere-zero Z3-flow iff G/e does.
inline EdgeId witness_to_irrelevant_edge(const MultiGraph& g, const DependencyWitness& w) {
  validate_witness(g, w);
  std::vector<bool> seen(g.vertex_count(), false);
  std::queue<VertexId> q;
  q.push(w.excluded);
  seen[w.excluded] = true;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (std::size_t p : g.incident_positions(v)) {
      const Edge& e = g.edge_at(p);
      VertexId other = e.other(v);
      if (!w.x[other].is_zero()) {
        if (g.degree(other) != 3) throw std::logic_error("witness_to_irrelevant_edge: boundary vertex is not of degree 3");
        if (!w.x[other][p].is_zero()) throw std::logic_error("witness_to_irrelevant_edge: x_w is nonzero on the boundary edge");
        return e.id;
      }
      if (!seen[other]) {
        seen[other] = true;
        q.push(other);
      }
    }
  }
  throw std::invalid_argument("witness_to_irrelevant_edge: no boundary edge (graph disconnected?)");
}

/// The orthogonal complement of V = sum of Delta_v over v != u.
struct VPerpData {
  VertexId excluded = 0;
  std::size_t b = 0;
  std::vector<EdgeId> free_edges;  // B, ascending id
  KernelBasis kernel;              // columns are edge positions

  /// Member of V-perp with the given values on B (in free_edges order).
  Gf3Vector reconstruct(const Gf3Vector& values_on_b) const { return kernel.reconstruct(values_on_b); }
};

inline VPerpData vperp(const MultiGraph& g, const IndependentData& data) {
  VPerpData out;
  out.excluded = data.excluded;
  out.kernel = kernel_from_echelon(data.echelon);
  out.b = out.kernel.nullity();
  for (std::size_t p : out.kernel.free_columns) out.free_edges.push_back(g.edge_at(p).id);
  if (!std::is_sorted(out.free_edges.begin(), out.free_edges.end()))
    throw std::logic_error("vperp: free edges are expected in ascending id order");
  return out;
}

}  // namespace z3flow
