#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "phylonet/errors.hpp"
#include "phylonet/graph.hpp"

namespace phylonet {

struct Violation {
  ErrorKind kind;
  int witness;  // vertex or edge id, -1 if none
  std::string message;
};

enum class Properness { Required, Relaxed };

// Contiguous: labels are exactly 1..n. Subset: any distinct positive labels
// (networks on a subset Y of the taxa, used as display queries).
enum class Labelling { Contiguous, Subset };

// Checks every network invariant and returns the first one violated.
// Order: loops, labelling, degrees, connectivity, properness.
inline std::optional<Violation> find_violation(const LabelledGraph& g,
                                               Properness mode = Properness::Required,
                                               Labelling labelling = Labelling::Contiguous) {
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (g.edge(e).u == g.edge(e).v)
      return Violation{ErrorKind::Loop, e, "edge " + std::to_string(e) + " is a loop"};

  const int n = g.leaf_count();
  if (n < 2) return Violation{ErrorKind::BadLabeling, -1, "networks need at least two labelled leaves"};
  std::set<Label> seen;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    Label l = g.label(v);
    if (l == 0) continue;
    bool in_range = labelling == Labelling::Subset ? l > 0 : (l > 0 && l <= n);
    if (!in_range || !seen.insert(l).second)
      return Violation{ErrorKind::BadLabeling, v,
                       labelling == Labelling::Subset ? "labels must be distinct and positive"
                                                      : "labels must be a bijection onto 1..n"};
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    int want = g.is_labelled(v) ? 1 : 3;
    if (g.degree(v) != want)
      return Violation{ErrorKind::BadDegree, v,
                       "vertex " + std::to_string(v) + " has degree " + std::to_string(g.degree(v))};
  }
  if (!is_connected(g)) return Violation{ErrorKind::Disconnected, -1, "graph is disconnected"};
  if (mode == Properness::Required) {
    if (auto e = improper_cut_edge(g))
      return Violation{ErrorKind::Improper, *e,
                       "cut-edge " + std::to_string(*e) + " does not separate two labelled leaves"};
  }
  return std::nullopt;
}

// A validated unrooted binary proper phylogenetic network. Immutable.
class Network {
 public:
  Network() = default;

  // Throws Error on the first violated invariant.
  explicit Network(LabelledGraph g) : g_(std::move(g)) {
    if (auto v = find_violation(g_)) throw Error(v->kind, v->message, v->witness);
  }

  // Network whose labels form any set of distinct positive integers.
  static Network on_subset(LabelledGraph g) {
    if (auto v = find_violation(g, Properness::Required, Labelling::Subset))
      throw Error(v->kind, v->message, v->witness);
    return trusted(std::move(g));
  }

  static Network from_edges(int vertex_count, std::vector<Edge> edges, std::vector<Label> labels) {
    return Network(LabelledGraph(vertex_count, std::move(edges), std::move(labels)));
  }

  // Skips validation; caller guarantees the invariants already hold.
  static Network trusted(LabelledGraph g) {
    Network n;
    n.g_ = std::move(g);
    return n;
  }

  const LabelledGraph& graph() const { return g_; }
  int vertex_count() const { return g_.vertex_count(); }
  int edge_count() const { return g_.edge_count(); }
  int leaf_count() const { return g_.leaf_count(); }
  int reticulation_number() const { return g_.edge_count() - g_.vertex_count() + 1; }
  bool is_tree() const { return reticulation_number() == 0; }
  const Edge& edge(EdgeId e) const { return g_.edge(e); }
  const std::vector<EdgeId>& incident(VertexId v) const { return g_.incident(v); }
  Label label(VertexId v) const { return g_.label(v); }
  bool is_leaf(VertexId v) const { return g_.is_labelled(v); }
  VertexId leaf(Label l) const { return g_.vertex_of_label(l); }
  bool is_external(EdgeId e) const { return is_leaf(edge(e).u) || is_leaf(edge(e).v); }

  // The edge incident to leaf `l`.
  EdgeId leaf_edge(Label l) const { return g_.incident(leaf(l)).front(); }

 private:
  LabelledGraph g_;
};

inline Network validate(const LabelledGraph& g) { return Network(g); }

inline int reticulation_number(const Network& n) { return n.reticulation_number(); }

// Reference formulation of properness used to cross-check the cut-edge test:
// every edge lies on some simple path between two distinct labelled vertices.
// Exponential; small graphs only.
inline bool every_edge_on_leaf_path(const LabelledGraph& g) {
  std::vector<char> covered(g.edge_count(), 0);
  std::vector<char> on_path(g.vertex_count(), 0);
  std::vector<EdgeId> path;
  auto dfs = [&](auto&& self, VertexId x, VertexId start) -> void {
    if (x != start && g.is_labelled(x)) {
      for (EdgeId e : path) covered[e] = 1;
      return;
    }
    for (EdgeId e : g.incident(x)) {
      VertexId y = g.edge(e).other(x);
      if (on_path[y]) continue;
      on_path[y] = 1;
      path.push_back(e);
      self(self, y, start);
      path.pop_back();
      on_path[y] = 0;
    }
  };
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (!g.is_labelled(s)) continue;
    on_path[s] = 1;
    dfs(dfs, s, s);
    on_path[s] = 0;
  }
  for (char c : covered)
    if (!c) return false;
  return true;
}

}  // namespace phylonet
