#pragma once

// Oriented multigraph with stable edge identities.
//
// Vertices are 0..vertex_count()-1. Every edge has an id, a tail and a head;
// tail == head is a loop. Contraction and deletion never renumber surviving
// edge ids, so a flow on a minor can be matched edge-for-edge with its parent.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace z3flow {

using VertexId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
  EdgeId id;
  VertexId tail;
  VertexId head;

  bool is_loop() const { return tail == head; }
  bool incident(VertexId v) const { return tail == v || head == v; }
  VertexId other(VertexId v) const { return tail == v ? head : tail; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when asked to contract a loop. Contracting a loop is the same as
/// deleting it; callers must ask for deletion explicitly.
class LoopContractionError : public GraphError {
 public:
  explicit LoopContractionError(EdgeId e)
      : GraphError("edge " + std::to_string(e) + " is a loop: loop contraction equals deletion"), edge(e) {}
  EdgeId edge;
};

class MultiGraph {
 public:
  MultiGraph() = default;

  /// Edges are numbered 0..m-1 in input order and oriented first -> second.
  MultiGraph(std::size_t vertex_count, const std::vector<std::pair<VertexId, VertexId>>& endpoints)
      : vertex_count_(vertex_count) {
    edges_.reserve(endpoints.size());
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
      auto [t, h] = endpoints[i];
      if (t >= vertex_count || h >= vertex_count)
        throw GraphError("edge " + std::to_string(i) + " (" + std::to_string(t) + "," + std::to_string(h) +
                         ") has an endpoint outside 0.." + std::to_string(vertex_count == 0 ? 0 : vertex_count - 1));
      edges_.push_back(Edge{i, t, h});
    }
    rebuild_index();
  }

  /// Explicit edge records; ids must be unique but need not be dense. Edges
  /// are stored in ascending id order, so positions follow ids.
  MultiGraph(std::size_t vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (const Edge& e : edges_)
      if (e.tail >= vertex_count || e.head >= vertex_count)
        throw GraphError("edge " + std::to_string(e.id) + " has an endpoint out of range");
    rebuild_index();
  }

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge_at(std::size_t position) const { return edges_[position]; }

  bool has_edge(EdgeId id) const { return position_.count(id) != 0; }
  std::size_t position_of(EdgeId id) const {
    auto it = position_.find(id);
    if (it == position_.end()) throw GraphError("no edge with id " + std::to_string(id));
    return it->second;
  }
  const Edge& edge(EdgeId id) const { return edges_[position_of(id)]; }

  /// Positions (not ids) of edges incident with v, ascending by edge id; a loop appears once.
  const std::vector<std::size_t>& incident_positions(VertexId v) const { return incidence_.at(v); }

  std::size_t degree(VertexId v) const {
    std::size_t d = 0;
    for (std::size_t p : incidence_.at(v)) d += edges_[p].is_loop() ? 2 : 1;
    return d;
  }

  std::size_t loop_count() const {
    return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_loop(); }));
  }

  bool is_simple() const {
    std::vector<std::pair<VertexId, VertexId>> seen;
    for (const Edge& e : edges_) {
      if (e.is_loop()) return false;
      seen.emplace_back(std::min(e.tail, e.head), std::max(e.tail, e.head));
    }
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
  }

  /// FNV-1a over the vertex count and the edge records.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
      for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    };
    mix(vertex_count_);
    for (const Edge& e : edges_) {
      mix(e.id);
      mix(e.tail);
      mix(e.head);
    }
    return h;
  }

  friend bool operator==(const MultiGraph& a, const MultiGraph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
  }

 private:
  void rebuild_index() {
    position_.clear();
    incidence_.assign(vertex_count_, {});
    for (std::size_t p = 0; p < edges_.size(); ++p) {
      if (!position_.emplace(edges_[p].id, p).second)
        throw GraphError("duplicate edge id " + std::to_string(edges_[p].id));
    }
    std::vector<std::size_t> order(edges_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges_[a].id < edges_[b].id; });
    for (std::size_t p : order) {
      const Edge& e = edges_[p];
      incidence_[e.tail].push_back(p);
      if (!e.is_loop()) incidence_[e.head].push_back(p);
    }
  }

  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::unordered_map<EdgeId, std::size_t> position_;
  std::vector<std::vector<std::size_t>> incidence_;
};

inline MultiGraph build_graph(std::size_t vertex_count, const std::vector<std::pair<VertexId, VertexId>>& endpoints) {
  return MultiGraph(vertex_count, endpoints);
}

/// Links a contracted graph back to its parent.
struct EdgeCorrespondence {
  EdgeId contracted_edge = 0;
  // child edge id -> parent edge id
  std::map<EdgeId, EdgeId> parent_edge;
  // parent vertex -> child vertex
  std::vector<VertexId> vertex_map;
};

/// G/e: the endpoints of e merge into the lower-numbered one, vertices above
/// the removed endpoint shift down by one, and every other edge survives with
/// its id (edges parallel to e become loops).
inline std::pair<MultiGraph, EdgeCorrespondence> contract_edge(const MultiGraph& g, EdgeId e) {
  const Edge& target = g.edge(e);
  if (target.is_loop()) throw LoopContractionError(e);
  const VertexId keep = std::min(target.tail, target.head);
  const VertexId gone = std::max(target.tail, target.head);

  EdgeCorrespondence corr;
  corr.contracted_edge = e;
  corr.vertex_map.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) corr.vertex_map[v] = v == gone ? keep : (v > gone ? v - 1 : v);

  std::vector<Edge> edges;
  edges.reserve(g.edge_count() - 1);
  for (const Edge& x : g.edges()) {
    if (x.id == e) continue;
    edges.push_back(Edge{x.id, corr.vertex_map[x.tail], corr.vertex_map[x.head]});
    corr.parent_edge.emplace(x.id, x.id);
  }
  return {MultiGraph(g.vertex_count() - 1, std::move(edges)), std::move(corr)};
}

/// G - e. Vertex numbering is unchanged.
inline MultiGraph delete_edge(const MultiGraph& g, EdgeId e) {
  g.position_of(e);
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& x : g.edges())
    if (x.id != e) edges.push_back(x);
  return MultiGraph(g.vertex_count(), std::move(edges));
}

/// Contracts a non-loop edge, deletes a loop.
inline MultiGraph minor_of(const MultiGraph& g, EdgeId e) {
  return g.edge(e).is_loop() ? delete_edge(g, e) : contract_edge(g, e).first;
}

/// Component index per vertex, numbered in order of lowest vertex.
inline std::vector<std::size_t> components(const MultiGraph& g, std::size_t* count = nullptr) {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(g.vertex_count(), unset);
  std::size_t next = 0;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (comp[s] != unset) continue;
    std::queue<VertexId> q;
    q.push(s);
    comp[s] = next;
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop();
      for (std::size_t p : g.incident_positions(v)) {
        VertexId w = g.edge_at(p).other(v);
        if (comp[w] == unset) {
          comp[w] = next;
          q.push(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

inline std::size_t component_count(const MultiGraph& g) {
  std::size_t c = 0;
  components(g, &c);
  return c;
}

inline bool is_connected(const MultiGraph& g) { return component_count(g) <= 1; }

/// Splits g into its connected components; edge ids are preserved.
inline std::vector<MultiGraph> split_components(const MultiGraph& g) {
  std::size_t count = 0;
  auto comp = components(g, &count);
  std::vector<std::vector<VertexId>> members(count);
  std::vector<VertexId> local(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    local[v] = members[comp[v]].size();
    members[comp[v]].push_back(v);
  }
  std::vector<std::vector<Edge>> edges(count);
  for (const Edge& e : g.edges()) edges[comp[e.tail]].push_back(Edge{e.id, local[e.tail], local[e.head]});
  std::vector<MultiGraph> out;
  for (std::size_t c = 0; c < count; ++c) out.emplace_back(members[c].size(), std::move(edges[c]));
  return out;
}

/// Two-colouring (0/1 per vertex, each component starting at its lowest
/// vertex with colour 0), or nullopt if some closed walk is odd. A loop is an
/// odd closed walk.
inline std::optional<std::vector<int>> bipartition(const MultiGraph& g) {
  std::vector<int> colour(g.vertex_count(), -1);
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (colour[s] != -1) continue;
    colour[s] = 0;
    std::queue<VertexId> q;
    q.push(s);
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop();
      for (std::size_t p : g.incident_positions(v)) {
        const Edge& e = g.edge_at(p);
        if (e.is_loop()) return std::nullopt;
        VertexId w = e.other(v);
        if (colour[w] == -1) {
          colour[w] = 1 - colour[v];
          q.push(w);
        } else if (colour[w] == colour[v]) {
          return std::nullopt;
        }
      }
    }
  }
  return colour;
}

struct DegreeProfile {
  std::vector<std::size_t> degrees;
  std::size_t n3 = 0;
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
};

inline DegreeProfile degree_profile(const MultiGraph& g) {
  DegreeProfile d;
  d.degrees.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) d.degrees[v] = g.degree(v);
  d.n3 = static_cast<std::size_t>(std::count(d.degrees.begin(), d.degrees.end(), std::size_t{3}));
  if (!d.degrees.empty()) {
    auto [lo, hi] = std::minmax_element(d.degrees.begin(), d.degrees.end());
    d.min_degree = *lo;
    d.max_degree = *hi;
  }
  return d;
}

/// True if the subgraph induced by degree-3 vertices is acyclic. Loops and
/// parallel pairs inside it count as cycles.
inline bool degree3_induced_forest(const MultiGraph& g) {
  const auto profile = degree_profile(g);
  // union-find over degree-3 vertices
  std::vector<VertexId> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Edge& e : g.edges()) {
    if (profile.degrees[e.tail] != 3 || profile.degrees[e.head] != 3) continue;
    VertexId a = find(e.tail), b = find(e.head);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

struct WheelShape {
  VertexId hub;
  std::size_t rim_length;
};

/// Recognizes a simple wheel: a cycle of length >= 3 plus one hub adjacent to
/// each cycle vertex exactly once. For K4 the hub is vertex 0.
inline std::optional<WheelShape> wheel_recognition(const MultiGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n < 4 || g.edge_count() != 2 * (n - 1) || !g.is_simple() || !is_connected(g)) return std::nullopt;
  const auto profile = degree_profile(g);
  for (VertexId hub = 0; hub < n; ++hub) {
    if (profile.degrees[hub] != n - 1) continue;
    // Removing the hub must leave a single cycle through all other vertices.
    bool ok = true;
    for (VertexId v = 0; v < n && ok; ++v)
      if (v != hub && profile.degrees[v] != 3) ok = false;
    if (!ok) continue;
    std::vector<Edge> rim;
    std::vector<VertexId> relabel(n);
    for (VertexId v = 0, k = 0; v < n; ++v) relabel[v] = v == hub ? 0 : k++;
    for (const Edge& e : g.edges())
      if (!e.incident(hub)) rim.push_back(Edge{e.id, relabel[e.tail], relabel[e.head]});
    MultiGraph cycle(n - 1, std::move(rim));
    if (cycle.edge_count() == n - 1 && is_connected(cycle)) return WheelShape{hub, n - 1};
  }
  return std::nullopt;
}

}  // namespace z3flow
