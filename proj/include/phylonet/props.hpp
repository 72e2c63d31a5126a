#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "phylonet/canonical.hpp"
#include "phylonet/errors.hpp"
#include "phylonet/moves.hpp"
#include "phylonet/network.hpp"
#include "phylonet/trees.hpp"
#include "phylonet/workspace.hpp"

namespace phylonet {

// ---------------------------------------------------------------------------
// Blobs and level.

struct Blob {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  int cyclomatic = 0;
};

// Nontrivial 2-connected components. In a graph of maximum degree three these
// are the components left after deleting all cut-edges that contain an edge.
inline std::vector<Blob> blobs(const LabelledGraph& g) {
  auto info = detail::bridges(g);
  int count = 0;
  auto comp = components(g, &info.is_bridge, &count);
  std::vector<Blob> by_comp(count);
  for (VertexId v = 0; v < g.vertex_count(); ++v) by_comp[comp[v]].vertices.push_back(v);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (!info.is_bridge[e]) by_comp[comp[g.edge(e).u]].edges.push_back(e);
  std::vector<Blob> out;
  for (auto& b : by_comp) {
    if (b.edges.empty()) continue;
    b.cyclomatic = static_cast<int>(b.edges.size()) - static_cast<int>(b.vertices.size()) + 1;
    out.push_back(std::move(b));
  }
  return out;
}

inline std::vector<Blob> blobs(const Network& n) { return blobs(n.graph()); }

inline int level(const Network& n) {
  int k = 0;
  for (const Blob& b : blobs(n)) k = std::max(k, b.cyclomatic);
  return k;
}

// ---------------------------------------------------------------------------
// Displayed trees and embeddings.

// Displayed trees, one per isomorphism class, keyed by canonical key. This is
// the set reachable by r valid TBR- moves.
inline std::map<CanonicalKey, Network> displayed_trees(const Network& n) {
  std::map<CanonicalKey, Network> level_nets{{canonical_key(n), n}};
  for (int r = n.reticulation_number(); r > 0; --r) {
    std::map<CanonicalKey, Network> next;
    for (const auto& [k, net] : level_nets)
      for (EdgeId e = 0; e < net.edge_count(); ++e) {
        Attempt a = try_apply(net, Move::minus(Family::TBR, e));
        if (!a) continue;
        CanonicalKey key = canonical_key(a.applied->network);
        next.try_emplace(std::move(key), std::move(a.applied->network));
      }
    level_nets.swap(next);
  }
  return level_nets;
}

// Image of M in N: a vertex for each vertex of M and an edge path for each
// edge {u,v} of M, listed from the image of u to the image of v (paths are
// edge-disjoint, internal vertices unused otherwise).
struct Embedding {
  std::vector<VertexId> vertex_map;
  std::vector<std::vector<EdgeId>> paths;

  // Edges of N covered by the embedding.
  std::vector<char> covered(int edge_count) const {
    std::vector<char> c(edge_count, 0);
    for (const auto& p : paths)
      for (EdgeId e : p) c[e] = 1;
    return c;
  }
};

namespace detail {

class Embedder {
 public:
  Embedder(const LabelledGraph& n, const LabelledGraph& m) : n_(n), m_(m) {}

  std::optional<Embedding> run() {
    if (m_.edge_count() == 0) return std::nullopt;
    phi_.assign(m_.vertex_count(), -1);
    used_v_.assign(n_.vertex_count(), 0);
    used_e_.assign(n_.edge_count(), 0);
    paths_.assign(m_.edge_count(), {});
    VertexId root = -1;
    for (VertexId v = 0; v < m_.vertex_count(); ++v) {
      if (!m_.is_labelled(v)) continue;
      VertexId w = n_.vertex_of_label(m_.label(v));
      if (w < 0) return std::nullopt;
      phi_[v] = w;
      used_v_[w] = 1;
      if (root < 0 || m_.label(v) < m_.label(root)) root = v;
    }
    if (root < 0) return std::nullopt;
    // Edge order: breadth-first from the smallest-labelled leaf, so the first
    // endpoint of every edge is already placed when the edge is processed.
    std::vector<char> seen_v(m_.vertex_count(), 0), seen_e(m_.edge_count(), 0);
    std::vector<VertexId> queue{root};
    seen_v[root] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      VertexId x = queue[i];
      for (EdgeId e : m_.incident(x)) {
        if (seen_e[e]) continue;
        seen_e[e] = 1;
        VertexId y = m_.edge(e).other(x);
        order_.push_back({e, x, y});
        if (!seen_v[y]) seen_v[y] = 1, queue.push_back(y);
      }
    }
    if (static_cast<int>(order_.size()) != m_.edge_count()) return std::nullopt;  // M disconnected
    if (!place(0)) return std::nullopt;
    for (const Step& s : order_)
      if (s.from != m_.edge(s.e).u) std::reverse(paths_[s.e].begin(), paths_[s.e].end());
    return Embedding{phi_, paths_};
  }

 private:
  struct Step {
    EdgeId e;
    VertexId from;
    VertexId to;
  };

  bool place(std::size_t i) {
    if (i == order_.size()) return true;
    const Step& s = order_[i];
    std::vector<EdgeId> path;
    return extend(i, phi_[s.from], path);
  }

  // Depth-first growth of the path for step i from vertex x.
  bool extend(std::size_t i, VertexId x, std::vector<EdgeId>& path) {
    const Step& s = order_[i];
    for (EdgeId f : n_.incident(x)) {
      if (used_e_[f]) continue;
      VertexId y = n_.edge(f).other(x);
      used_e_[f] = 1;
      path.push_back(f);
      if (phi_[s.to] >= 0) {
        if (y == phi_[s.to]) {
          paths_[s.e] = path;
          if (place(i + 1)) return true;
        }
      } else if (!used_v_[y] && !n_.is_labelled(y)) {
        // y becomes the image of s.to ...
        phi_[s.to] = y;
        used_v_[y] = 1;
        paths_[s.e] = path;
        if (place(i + 1)) return true;
        phi_[s.to] = -1;
        used_v_[y] = 0;
      }
      // ... or an interior vertex of the path.
      if (!used_v_[y] && !n_.is_labelled(y)) {
        used_v_[y] = 1;
        if (extend(i, y, path)) return true;
        used_v_[y] = 0;
      }
      path.pop_back();
      used_e_[f] = 0;
    }
    return false;
  }

  const LabelledGraph& n_;
  const LabelledGraph& m_;
  std::vector<VertexId> phi_;
  std::vector<char> used_v_, used_e_;
  std::vector<std::vector<EdgeId>> paths_;
  std::vector<Step> order_;
};

}  // namespace detail

// An embedding of M into N (labels of M must be labels of N), if any.
inline std::optional<Embedding> find_embedding(const Network& n, const Network& m) {
  return detail::Embedder(n.graph(), m.graph()).run();
}

inline bool displays(const Network& n, const Network& m) { return find_embedding(n, m).has_value(); }

// ---------------------------------------------------------------------------
// Tree-based networks.

struct BaseTree {
  Network tree;
  std::vector<EdgeId> removed;  // edges of N outside the spanning subdivision
};

namespace detail {

// Calls visit(removed) for every r-subset of `candidates` that is a matching
// and whose removal keeps the graph connected. Removing two edges at one
// unlabelled vertex would leave it as a leaf, hence the matching condition.
// Stops when visit returns true; returns whether it stopped.
template <class Visit>
bool for_each_removable_matching(const LabelledGraph& g, const std::vector<EdgeId>& candidates, int r, Visit&& visit) {
  if (r > static_cast<int>(candidates.size())) return false;
  std::vector<EdgeId> chosen;
  std::vector<char> skip(g.edge_count(), 0), used(g.vertex_count(), 0);
  auto rec = [&](auto&& self, std::size_t start) -> bool {
    if (static_cast<int>(chosen.size()) == r) {
      int c = 0;
      components(g, &skip, &c);
      return c == 1 && visit(chosen);
    }
    for (std::size_t i = start; i < candidates.size(); ++i) {
      if (candidates.size() - i < static_cast<std::size_t>(r) - chosen.size()) break;
      const Edge& e = g.edge(candidates[i]);
      if (used[e.u] || used[e.v]) continue;
      used[e.u] = used[e.v] = 1;
      chosen.push_back(candidates[i]);
      skip[candidates[i]] = 1;
      bool stop = self(self, i + 1);
      skip[candidates[i]] = 0;
      chosen.pop_back();
      used[e.u] = used[e.v] = 0;
      if (stop) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

// Calls visit(removed) for every set of r non-bridge edges whose removal
// leaves a spanning tree with no unlabelled leaf. Stops when visit returns true.
template <class Visit>
void for_each_spanning_base(const Network& n, Visit&& visit) {
  const auto& g = n.graph();
  auto info = bridges(g);
  std::vector<EdgeId> candidates;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (!info.is_bridge[e]) candidates.push_back(e);
  for_each_removable_matching(g, candidates, n.reticulation_number(), visit);
}

// Tree obtained from N by deleting `removed` and suppressing degree-two vertices.
inline Network base_from_removed(const Network& n, const std::vector<EdgeId>& removed) {
  Workspace ws(n.graph());
  for (EdgeId e : removed) ws.remove_edge(e);
  for (VertexId v = 0; v < n.vertex_count(); ++v)
    if (ws.degree(v) == 2 && !ws.is_labelled(v)) ws.suppress(v);
  return Network(ws.compact().graph);
}

}  // namespace detail

// Some base tree of N, or nullopt. Among all base trees the one with the
// smallest canonical key is returned.
inline std::optional<BaseTree> tree_based(const Network& n) {
  std::optional<BaseTree> best;
  std::optional<CanonicalKey> best_key;
  detail::for_each_spanning_base(n, [&](const std::vector<EdgeId>& removed) {
    Network t = detail::base_from_removed(n, removed);
    CanonicalKey k = canonical_key(t);
    if (!best_key || k < *best_key) {
      best_key = k;
      best = BaseTree{std::move(t), removed};
    }
    return false;
  });
  return best;
}

// Blob by blob: cutting one blob never disconnects another.
inline bool is_tree_based(const Network& n) {
  for (const Blob& b : blobs(n))
    if (!detail::for_each_removable_matching(n.graph(), b.edges, b.cyclomatic,
                                             [](const std::vector<EdgeId>&) { return true; }))
      return false;
  return true;
}

inline bool is_tree_based_on(const Network& n, const Network& t) {
  const CanonicalKey want = canonical_key(t);
  bool found = false;
  detail::for_each_spanning_base(n, [&](const std::vector<EdgeId>& removed) {
    return found = canonical_key(detail::base_from_removed(n, removed)) == want;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Gadgets.

// An r-burl between leaves 1 and 2: 1 - x, nested pairs of parallel edges, y - 2.
inline Network make_burl(int r) {
  if (r < 1) throw Error(ErrorKind::InvalidParameter, "a burl needs r >= 1");
  Network n = Network(LabelledGraph(4, {{0, 2}, {2, 3}, {2, 3}, {3, 1}}, {1, 2, 0, 0}));
  EdgeId pair_edge = 2;
  for (int i = 1; i < r; ++i) {
    Applied a = apply_tracked(n, Move::plus(Family::TBR, pair_edge, pair_edge));
    n = std::move(a.network);
    pair_edge = a.added_edge;
  }
  return n;
}

// Subdivide the edges at leaves a and b r times each (u_1 and v_1 next to the
// leaves) and add the rungs {u_i, v_i}.
inline Network make_handcuffed(const Network& t, Label a, Label b, int r) {
  if (r < 0) throw Error(ErrorKind::InvalidParameter, "r must be non-negative");
  if (a == b || t.leaf(a) < 0 || t.leaf(b) < 0)
    throw Error(ErrorKind::InvalidParameter, "handcuffed leaves must be two distinct leaves");
  const auto& g = t.graph();
  std::vector<Edge> edges = g.edges();
  std::vector<Label> labels = g.labels();
  auto new_vertex = [&] {
    labels.push_back(0);
    return static_cast<VertexId>(labels.size()) - 1;
  };
  // Chain of r new vertices on the edge at `leaf`, nearest to the leaf first.
  auto chain = [&](Label l) {
    VertexId leaf = t.leaf(l);
    std::vector<VertexId> out;
    for (int i = 0; i < r; ++i) {
      EdgeId e = -1;
      for (EdgeId f = 0; f < static_cast<EdgeId>(edges.size()); ++f)
        if (edges[f].touches(leaf)) e = f;
      VertexId w = new_vertex();
      VertexId far = edges[e].other(leaf);
      edges[e] = Edge{w, far};
      edges.push_back(Edge{leaf, w});
      out.push_back(w);
    }
    std::reverse(out.begin(), out.end());
    return out;
  };
  auto us = chain(a);
  auto vs = chain(b);
  for (int i = 0; i < r; ++i) edges.push_back(Edge{us[i], vs[i]});
  const int count = static_cast<int>(labels.size());
  return Network(LabelledGraph(count, std::move(edges), std::move(labels)));
}

// Caterpillar on 1..n (cherry {1,2}, leaves 3..n by distance from leaf 1)
// handcuffed r times on leaves 1 and 2.
inline Network make_sorted_handcuffed_caterpillar(int n, int r) {
  if (n < 2) throw Error(ErrorKind::InvalidParameter, "n must be at least 2");
  return make_handcuffed(caterpillar(n), 1, 2, r);
}

// Network displaying every P_j: the caterpillar P_0 on 1..n, leaf edge i
// subdivided by u_i^1..u_i^k (u_i^1 nearest the leaf), leaf i of P_j glued
// onto u_i^j, then degree-two vertices suppressed.
inline Network canonical_display_network(const std::vector<Network>& parts, int n = 0) {
  if (parts.empty()) throw Error(ErrorKind::InvalidParameter, "need at least one network");
  for (const auto& p : parts)
    for (VertexId v = 0; v < p.vertex_count(); ++v) n = std::max(n, p.label(v));
  const int k = static_cast<int>(parts.size());
  Network p0 = caterpillar(n);
  std::vector<Edge> edges = p0.graph().edges();
  std::vector<Label> labels = p0.graph().labels();
  auto new_vertex = [&] {
    labels.push_back(0);
    return static_cast<VertexId>(labels.size()) - 1;
  };
  // u[i][j] for leaf i and part j.
  std::vector<std::vector<VertexId>> u(n + 1, std::vector<VertexId>(k, -1));
  for (Label i = 1; i <= n; ++i) {
    VertexId leaf = p0.leaf(i);
    for (int j = k - 1; j >= 0; --j) {
      EdgeId e = -1;
      for (EdgeId f = 0; f < static_cast<EdgeId>(edges.size()); ++f)
        if (edges[f].touches(leaf)) e = f;
      VertexId w = new_vertex();
      edges[e] = Edge{w, edges[e].other(leaf)};
      edges.push_back(Edge{leaf, w});
      u[i][j] = w;
    }
  }
  for (int j = 0; j < k; ++j) {
    const auto& pg = parts[j].graph();
    std::vector<VertexId> map(pg.vertex_count());
    for (VertexId v = 0; v < pg.vertex_count(); ++v) {
      Label l = pg.label(v);
      if (l > 0 && l <= n) map[v] = u[l][j];
      else if (l > 0) throw Error(ErrorKind::LabelMismatch, "label outside 1..n");
      else map[v] = new_vertex();
    }
    for (const Edge& e : pg.edges()) edges.push_back(Edge{map[e.u], map[e.v]});
  }
  const int count = static_cast<int>(labels.size());
  LabelledGraph g(count, std::move(edges), std::move(labels));
  Workspace ws(g);
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (!g.is_labelled(v) && ws.degree(v) == 2)
      if (!ws.suppress(v)) throw Error(ErrorKind::WouldCreateLoop, "suppression creates a loop", v);
  return Network(ws.compact().graph);
}

// ---------------------------------------------------------------------------
// Class constraints.

struct ClassConstraint {
  enum class Kind { All, Tier, TierRange, TreeBased, TreeBasedOn, LevelAtMost };
  Kind kind = Kind::All;
  int lo = 0;
  int hi = 0;
  std::optional<Network> base;

  static ClassConstraint all() { return {}; }
  static ClassConstraint tier(int r) { return {Kind::Tier, r, r, std::nullopt}; }
  static ClassConstraint tier_range(int lo, int hi) { return {Kind::TierRange, lo, hi, std::nullopt}; }
  static ClassConstraint tree_based() { return {Kind::TreeBased, 0, 0, std::nullopt}; }
  static ClassConstraint tree_based_on(Network t) { return {Kind::TreeBasedOn, 0, 0, std::move(t)}; }
  static ClassConstraint level_at_most(int k) { return {Kind::LevelAtMost, k, k, std::nullopt}; }

  bool admits(const Network& n) const {
    const int r = n.reticulation_number();
    switch (kind) {
      case Kind::All: return true;
      case Kind::Tier: return r == lo;
      case Kind::TierRange: return lo <= r && r <= hi;
      case Kind::TreeBased: return is_tree_based(n);
      case Kind::TreeBasedOn: return is_tree_based_on(n, *base);
      case Kind::LevelAtMost: return level(n) <= lo;
    }
    return false;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::All: return "all";
      case Kind::Tier: return "tier:" + std::to_string(lo);
      case Kind::TierRange: return "tier-range:" + std::to_string(lo) + ".." + std::to_string(hi);
      case Kind::TreeBased: return "tree-based";
      case Kind::TreeBasedOn: return "tree-based-on";
      case Kind::LevelAtMost: return "level:" + std::to_string(lo);
    }
    return "?";
  }
};

}  // namespace phylonet
