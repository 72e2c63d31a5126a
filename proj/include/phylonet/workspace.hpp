#pragma once

#include <optional>
#include <vector>

#include "phylonet/errors.hpp"
#include "phylonet/graph.hpp"
#include "phylonet/network.hpp"

namespace phylonet {

// Mutable editing buffer used to carry out suboperations (remove, suppress,
// subdivide, add). Edge ids of the source stay stable: a suppressed vertex
// merges its two edges into the first one and aliases the second to it, a
// subdivided edge keeps its id on the piece at its `u` end.
class Workspace {
 public:
  explicit Workspace(const LabelledGraph& g)
      : edges_(g.edges()),
        edge_alive_(g.edge_count(), 1),
        alias_(g.edge_count(), -1),
        origin_(g.edge_count()),
        labels_(g.labels()),
        vertex_alive_(g.vertex_count(), 1),
        source_edges_(g.edge_count()),
        source_vertices_(g.vertex_count()) {
    for (EdgeId e = 0; e < g.edge_count(); ++e) origin_[e] = e;
  }

  int degree(VertexId v) const {
    int d = 0;
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e)
      if (edge_alive_[e]) d += (edges_[e].u == v) + (edges_[e].v == v);
    return d;
  }

  std::vector<EdgeId> incident(VertexId v) const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e)
      if (edge_alive_[e] && edges_[e].touches(v)) out.push_back(e);
    return out;
  }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  bool alive(EdgeId e) const { return edge_alive_[e] != 0; }
  bool is_labelled(VertexId v) const { return labels_[v] != 0; }

  // Live edge that now contains (source or workspace) edge e; -1 if removed.
  EdgeId resolve(EdgeId e) const {
    while (e >= 0 && !edge_alive_[e]) e = alias_[e];
    return e;
  }

  void remove_edge(EdgeId e) {
    edge_alive_[e] = 0;
    alias_[e] = -1;
  }

  // Suppress degree-two vertex v. Returns the surviving merged edge, or
  // nullopt if the merge would create a loop.
  std::optional<EdgeId> suppress(VertexId v) {
    auto inc = incident(v);
    if (inc.size() != 2) return std::nullopt;
    EdgeId a = inc[0], b = inc[1];
    VertexId x = edges_[a].other(v), y = edges_[b].other(v);
    if (x == y || x == v || y == v) return std::nullopt;
    edges_[a] = Edge{x, y};
    edge_alive_[b] = 0;
    alias_[b] = a;
    vertex_alive_[v] = 0;
    return a;
  }

  // Suppress v if it has degree two. Returns the merged edge (or -1 when
  // nothing happened); nullopt signals a loop.
  std::optional<EdgeId> suppress_if_degree_two(VertexId v) {
    if (!vertex_alive_[v] || degree(v) != 2) return EdgeId{-1};
    return suppress(v);
  }

  struct Subdivision {
    VertexId vertex;
    EdgeId kept;   // id of the piece at the old u end (the original id)
    EdgeId piece;  // new piece at the old v end
  };

  Subdivision subdivide(EdgeId e) {
    VertexId w = add_vertex();
    Edge old = edges_[e];
    edges_[e] = Edge{old.u, w};
    EdgeId piece = push_edge(Edge{w, old.v}, origin_[e]);
    return {w, e, piece};
  }

  EdgeId add_edge(VertexId a, VertexId b) { return push_edge(Edge{a, b}, -1); }

  VertexId add_vertex() {
    labels_.push_back(0);
    vertex_alive_.push_back(1);
    return static_cast<VertexId>(labels_.size()) - 1;
  }

  struct Compacted {
    LabelledGraph graph;
    std::vector<EdgeId> edge_map;      // source edge -> new edge containing it (-1 if removed)
    std::vector<VertexId> vertex_map;  // workspace vertex -> new vertex (-1 if gone)
    std::vector<EdgeId> origin;        // new edge -> source edge it descends from (-1 if added)
    std::vector<EdgeId> workspace_to_new;
  };

  Compacted compact() const {
    Compacted c;
    c.vertex_map.assign(labels_.size(), -1);
    std::vector<Label> labels;
    for (VertexId v = 0; v < static_cast<VertexId>(labels_.size()); ++v) {
      if (!vertex_alive_[v]) continue;
      c.vertex_map[v] = static_cast<VertexId>(labels.size());
      labels.push_back(labels_[v]);
    }
    c.workspace_to_new.assign(edges_.size(), -1);
    std::vector<Edge> edges;
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
      if (!edge_alive_[e]) continue;
      c.workspace_to_new[e] = static_cast<EdgeId>(edges.size());
      edges.push_back(Edge{c.vertex_map[edges_[e].u], c.vertex_map[edges_[e].v]});
      c.origin.push_back(origin_[e]);
    }
    c.edge_map.assign(source_edges_, -1);
    for (EdgeId e = 0; e < source_edges_; ++e) {
      EdgeId r = resolve(e);
      c.edge_map[e] = r < 0 ? -1 : c.workspace_to_new[r];
    }
    const int count = static_cast<int>(labels.size());
    c.graph = LabelledGraph(count, std::move(edges), std::move(labels));
    return c;
  }

 private:
  EdgeId push_edge(Edge e, EdgeId origin) {
    edges_.push_back(e);
    edge_alive_.push_back(1);
    alias_.push_back(-1);
    origin_.push_back(origin);
    return static_cast<EdgeId>(edges_.size()) - 1;
  }

  std::vector<Edge> edges_;
  std::vector<char> edge_alive_;
  std::vector<EdgeId> alias_;
  std::vector<EdgeId> origin_;
  std::vector<Label> labels_;
  std::vector<char> vertex_alive_;
  int source_edges_;
  int source_vertices_;
};

// Graph-level suboperations. Edge ids of the result follow Workspace rules.
inline LabelledGraph suppress(const LabelledGraph& g, VertexId v) {
  Workspace ws(g);
  if (ws.degree(v) != 2) throw Error(ErrorKind::BadDegree, "only degree-two vertices can be suppressed", v);
  if (!ws.suppress(v)) throw Error(ErrorKind::WouldCreateLoop, "suppressing the vertex creates a loop", v);
  return ws.compact().graph;
}

// Returns the new graph; the new vertex is the last one.
inline LabelledGraph subdivide(const LabelledGraph& g, EdgeId e) {
  if (e < 0 || e >= g.edge_count()) throw Error(ErrorKind::InvalidParameter, "no such edge", e);
  Workspace ws(g);
  ws.subdivide(e);
  return ws.compact().graph;
}

}  // namespace phylonet
