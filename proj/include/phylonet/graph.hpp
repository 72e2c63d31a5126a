#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "phylonet/errors.hpp"

namespace phylonet {

using VertexId = int;
using EdgeId = int;
using Label = int;  // 0 means "unlabelled"

struct Edge {
  VertexId u;
  VertexId v;

  VertexId other(VertexId w) const { return w == u ? v : u; }
  bool touches(VertexId w) const { return u == w || v == w; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected multigraph on vertices 0..vertex_count()-1 with edge ids
// 0..edge_count()-1 and an optional leaf label per vertex. Parallel edges are
// distinct ids. Nothing about degrees or properness is assumed here.
class LabelledGraph {
 public:
  LabelledGraph() = default;
  LabelledGraph(int vertex_count, std::vector<Edge> edges, std::vector<Label> labels)
      : edges_(std::move(edges)), labels_(std::move(labels)) {
    labels_.resize(vertex_count, 0);
    incident_.assign(vertex_count, {});
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
      incident_[edges_[e].u].push_back(e);
      if (edges_[e].v != edges_[e].u) incident_[edges_[e].v].push_back(e);
    }
  }

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Label>& labels() const { return labels_; }
  Label label(VertexId v) const { return labels_[v]; }
  bool is_labelled(VertexId v) const { return labels_[v] != 0; }
  const std::vector<EdgeId>& incident(VertexId v) const { return incident_[v]; }
  int degree(VertexId v) const {
    int d = 0;
    for (EdgeId e : incident_[v]) d += (edges_[e].u == edges_[e].v) ? 2 : 1;
    return d;
  }

  int leaf_count() const {
    return static_cast<int>(std::count_if(labels_.begin(), labels_.end(), [](Label l) { return l != 0; }));
  }

  // Cyclomatic number |E| - |V| + 1 (meaningful for connected graphs).
  int cyclomatic() const { return edge_count() - vertex_count() + 1; }

  // Vertex carrying `label`, or -1.
  VertexId vertex_of_label(Label l) const {
    for (VertexId v = 0; v < vertex_count(); ++v)
      if (labels_[v] == l) return v;
    return -1;
  }

  std::vector<VertexId> neighbours(VertexId v) const {
    std::vector<VertexId> out;
    for (EdgeId e : incident_[v]) out.push_back(edges_[e].other(v));
    return out;
  }

  int multiplicity(VertexId a, VertexId b) const {
    int m = 0;
    for (EdgeId e : incident_[a])
      if (edges_[e].other(a) == b) ++m;
    return m;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<Label> labels_;
  std::vector<std::vector<EdgeId>> incident_;
};

// Component index per vertex, ignoring the edges flagged in `skip`.
inline std::vector<int> components(const LabelledGraph& g, const std::vector<char>* skip = nullptr,
                                   int* count = nullptr) {
  std::vector<int> comp(g.vertex_count(), -1);
  int c = 0;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (comp[s] != -1) continue;
    comp[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (EdgeId e : g.incident(x)) {
        if (skip && (*skip)[e]) continue;
        VertexId y = g.edge(e).other(x);
        if (comp[y] == -1) {
          comp[y] = c;
          stack.push_back(y);
        }
      }
    }
    ++c;
  }
  if (count) *count = c;
  return comp;
}

inline bool is_connected(const LabelledGraph& g) {
  if (g.vertex_count() == 0) return true;
  int c = 0;
  components(g, nullptr, &c);
  return c == 1;
}

namespace detail {

struct BridgeInfo {
  std::vector<char> is_bridge;        // per edge
  std::vector<int> leaves_below;      // per bridge edge: labelled vertices on the child side
  int total_leaves = 0;
};

// Iterative Tarjan lowpoint computation keyed on edge ids so that parallel
// edges are never reported as bridges.
inline BridgeInfo bridges(const LabelledGraph& g) {
  const int n = g.vertex_count();
  BridgeInfo info;
  info.is_bridge.assign(g.edge_count(), 0);
  info.leaves_below.assign(g.edge_count(), 0);
  std::vector<int> disc(n, -1), low(n, 0), sub(n, 0);
  int timer = 0;
  struct Frame {
    VertexId v;
    EdgeId via;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (VertexId root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    disc[root] = low[root] = timer++;
    sub[root] = g.is_labelled(root) ? 1 : 0;
    stack.push_back({root, -1, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& inc = g.incident(f.v);
      if (f.next < inc.size()) {
        EdgeId e = inc[f.next++];
        if (e == f.via) continue;
        VertexId w = g.edge(e).other(f.v);
        if (w == f.v) continue;  // loop
        if (disc[w] == -1) {
          disc[w] = low[w] = timer++;
          sub[w] = g.is_labelled(w) ? 1 : 0;
          stack.push_back({w, e, 0});
        } else {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          Frame& parent = stack.back();
          low[parent.v] = std::min(low[parent.v], low[done.v]);
          sub[parent.v] += sub[done.v];
          if (low[done.v] > disc[parent.v]) {
            info.is_bridge[done.via] = 1;
            info.leaves_below[done.via] = sub[done.v];
          }
        }
      }
    }
  }
  info.total_leaves = g.leaf_count();
  return info;
}

}  // namespace detail

// Edges whose removal disconnects g.
inline std::vector<EdgeId> cut_edges(const LabelledGraph& g) {
  if (!is_connected(g)) throw Error(ErrorKind::Disconnected, "cut_edges needs a connected graph");
  auto info = detail::bridges(g);
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (info.is_bridge[e]) out.push_back(e);
  return out;
}

// First cut-edge that has no labelled vertex on one of its sides, if any.
inline std::optional<EdgeId> improper_cut_edge(const LabelledGraph& g) {
  auto info = detail::bridges(g);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!info.is_bridge[e]) continue;
    int below = info.leaves_below[e];
    if (below == 0 || below == info.total_leaves) return e;
  }
  return std::nullopt;
}

}  // namespace phylonet
