#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <utility>
#include <vector>

#include "phylonet/errors.hpp"
#include "phylonet/graph.hpp"
#include "phylonet/network.hpp"
#include "phylonet/props.hpp"

namespace phylonet {

// Leaf sets of the components of an agreement forest, each sorted.
struct AgreementForest {
  std::vector<std::vector<Label>> components;
  int size() const { return static_cast<int>(components.size()); }
};

namespace detail {

using LeafMask = std::uint64_t;

inline LeafMask bit(Label l) { return LeafMask{1} << (l - 1); }

// Leaf mask below each edge, seen from the edge's u end.
inline std::vector<LeafMask> side_masks(const Network& t) {
  const auto& g = t.graph();
  std::vector<LeafMask> out(g.edge_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    std::vector<char> seen(g.vertex_count(), 0);
    std::deque<VertexId> q{g.edge(e).v};
    seen[g.edge(e).u] = seen[g.edge(e).v] = 1;
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      if (g.is_labelled(x)) out[e] |= bit(g.label(x));
      for (EdgeId f : g.incident(x)) {
        VertexId y = g.edge(f).other(x);
        if (!seen[y]) seen[y] = 1, q.push_back(y);
      }
    }
  }
  return out;
}

// Nontrivial splits of t restricted to `leaves`, each stored as the side
// without the lowest leaf.
inline std::set<LeafMask> restricted_splits(const std::vector<LeafMask>& sides, LeafMask leaves) {
  std::set<LeafMask> out;
  const LeafMask low = leaves & (~leaves + 1);
  for (LeafMask s : sides) {
    LeafMask a = s & leaves;
    if (a & low) a = leaves & ~a;
    const int k = __builtin_popcountll(a), rest = __builtin_popcountll(leaves) - k;
    if (k >= 2 && rest >= 2) out.insert(a);
  }
  return out;
}

// Edges of the smallest subtree of t spanning `leaves` (for a single leaf,
// none) and its vertex set.
inline std::vector<char> spanned_vertices(const Network& t, const std::vector<LeafMask>& sides, LeafMask leaves) {
  std::vector<char> out(t.vertex_count(), 0);
  for (EdgeId e = 0; e < t.edge_count(); ++e) {
    LeafMask a = sides[e] & leaves;
    if (a && a != leaves) out[t.edge(e).u] = out[t.edge(e).v] = 1;
  }
  if (__builtin_popcountll(leaves) == 1)
    for (VertexId v = 0; v < t.vertex_count(); ++v)
      if (t.is_leaf(v) && (bit(t.label(v)) & leaves)) out[v] = 1;
  return out;
}

inline void require_same_trees(const Network& a, const Network& b) {
  if (!a.is_tree() || !b.is_tree()) throw Error(ErrorKind::InvalidParameter, "tree distance needs two trees");
  std::set<Label> la, lb;
  for (VertexId v = 0; v < a.vertex_count(); ++v)
    if (a.is_leaf(v)) la.insert(a.label(v));
  for (VertexId v = 0; v < b.vertex_count(); ++v)
    if (b.is_leaf(v)) lb.insert(b.label(v));
  if (la != lb) throw Error(ErrorKind::LabelMismatch, "trees have different leaf sets");
  if (*la.rbegin() > 64) throw Error(ErrorKind::InvalidParameter, "labels above 64 are not supported");
}

}  // namespace detail

// A maximum agreement forest, found by deleting k edges of the first tree for
// k = 0, 1, ... and keeping the first split into pieces that agree with the
// second tree and span vertex-disjoint subtrees of it.
inline AgreementForest maximum_agreement_forest(const Network& t1, const Network& t2) {
  detail::require_same_trees(t1, t2);
  const auto sides1 = detail::side_masks(t1), sides2 = detail::side_masks(t2);
  const int E = t1.edge_count();
  std::vector<char> skip(E, 0);
  std::optional<AgreementForest> found;

  auto check = [&]() -> bool {
    int count = 0;
    std::vector<int> comp = components(t1.graph(), &skip, &count);
    std::vector<detail::LeafMask> parts(count, 0);
    for (VertexId v = 0; v < t1.vertex_count(); ++v)
      if (t1.is_leaf(v)) parts[comp[v]] |= detail::bit(t1.label(v));
    std::vector<char> used(t2.vertex_count(), 0);
    for (detail::LeafMask p : parts) {
      if (!p) return false;
      if (detail::restricted_splits(sides1, p) != detail::restricted_splits(sides2, p)) return false;
      auto span = detail::spanned_vertices(t2, sides2, p);
      for (VertexId v = 0; v < t2.vertex_count(); ++v) {
        if (span[v] && used[v]) return false;
        used[v] |= span[v];
      }
    }
    AgreementForest f;
    for (detail::LeafMask p : parts) {
      std::vector<Label> c;
      for (Label l = 1; l <= 64; ++l)
        if (p & detail::bit(l)) c.push_back(l);
      f.components.push_back(std::move(c));
    }
    std::sort(f.components.begin(), f.components.end());
    found = std::move(f);
    return true;
  };
  auto choose = [&](auto&& self, int start, int left) -> bool {
    if (left == 0) return check();
    for (int e = start; e <= E - left; ++e) {
      skip[e] = 1;
      bool ok = self(self, e + 1, left - 1);
      skip[e] = 0;
      if (ok) return true;
    }
    return false;
  };
  for (int k = 0; k <= E; ++k)
    if (choose(choose, 0, k)) return *found;
  throw Error(ErrorKind::InvalidParameter, "no agreement forest");
}

// TBR distance between two trees: agreement forest size minus one.
inline int tree_tbr_distance(const Network& t1, const Network& t2) {
  return maximum_agreement_forest(t1, t2).size() - 1;
}

// Tree with leaf n+1 attached next to leaf n.
inline Network add_cherry_leaf(const Network& t) {
  const int n = t.leaf_count();
  const auto& g = t.graph();
  std::vector<Edge> edges = g.edges();
  std::vector<Label> labels = g.labels();
  const EdgeId e = t.leaf_edge(n);
  const VertexId leaf = t.leaf(n), far = edges[e].other(leaf);
  const VertexId mid = static_cast<VertexId>(labels.size()), fresh = mid + 1;
  labels.push_back(0);
  labels.push_back(n + 1);
  edges[e] = Edge{far, mid};
  edges.push_back(Edge{mid, leaf});
  edges.push_back(Edge{mid, fresh});
  const int count = static_cast<int>(labels.size());
  return Network(LabelledGraph(count, std::move(edges), std::move(labels)));
}

// Both trees with leaf n+1 added as a cherry with n and r rungs across it.
inline std::pair<Network, Network> handcuff_reduction(const Network& t1, const Network& t2, int r) {
  detail::require_same_trees(t1, t2);
  const int n = t1.leaf_count();
  return {make_handcuffed(add_cherry_leaf(t1), n, n + 1, r), make_handcuffed(add_cherry_leaf(t2), n, n + 1, r)};
}

// A connected binary leaf-labelled graph that need not be proper.
inline LabelledGraph validate_relaxed(const LabelledGraph& g) {
  if (auto v = find_violation(g, Properness::Relaxed)) throw Error(v->kind, v->message, v->witness);
  return g;
}

struct UtcInstance {
  Network network;
  Network tree;
  int r = 0;
};

namespace detail {

// Deletes leafless pendant parts and suppresses what they leave behind
// until every cut-edge separates two labelled leaves.
inline Network strip_improper(const LabelledGraph& input) {
  std::vector<Edge> edges = input.edges();
  std::vector<Label> labels = input.labels();
  std::vector<char> alive_e(edges.size(), 1), alive_v(labels.size(), 1);
  auto current = [&](std::vector<VertexId>* vmap, std::vector<EdgeId>* emap) {
    std::vector<VertexId> vm(labels.size(), -1);
    std::vector<Label> ls;
    for (std::size_t v = 0; v < labels.size(); ++v)
      if (alive_v[v]) vm[v] = static_cast<VertexId>(ls.size()), ls.push_back(labels[v]);
    std::vector<Edge> es;
    std::vector<EdgeId> em;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (alive_e[e]) es.push_back(Edge{vm[edges[e].u], vm[edges[e].v]}), em.push_back(static_cast<EdgeId>(e));
    if (vmap) *vmap = vm;
    if (emap) *emap = em;
    const int count = static_cast<int>(ls.size());
    return LabelledGraph(count, std::move(es), std::move(ls));
  };
  auto incident = [&](VertexId v) {
    std::vector<EdgeId> out;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (alive_e[e] && (edges[e].u == v || edges[e].v == v)) {
        out.push_back(static_cast<EdgeId>(e));
        if (edges[e].u == v && edges[e].v == v) out.push_back(static_cast<EdgeId>(e));
      }
    return out;
  };
  // Local clean-up: drop loops and dangling unlabelled vertices, suppress
  // unlabelled degree-two vertices.
  auto tidy = [&] {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t e = 0; e < edges.size(); ++e)
        if (alive_e[e] && edges[e].u == edges[e].v) alive_e[e] = 0, changed = true;
      for (std::size_t v = 0; v < labels.size(); ++v) {
        if (!alive_v[v] || labels[v] != 0) continue;
        auto inc = incident(static_cast<VertexId>(v));
        if (inc.size() <= 1) {
          for (EdgeId e : inc) alive_e[e] = 0;
          alive_v[v] = 0;
          changed = true;
        } else if (inc.size() == 2) {
          VertexId a = edges[inc[0]].u == static_cast<VertexId>(v) ? edges[inc[0]].v : edges[inc[0]].u;
          VertexId b = edges[inc[1]].u == static_cast<VertexId>(v) ? edges[inc[1]].v : edges[inc[1]].u;
          alive_e[inc[1]] = 0;
          edges[inc[0]] = Edge{a, b};
          alive_v[v] = 0;
          changed = true;
        }
      }
    }
  };
  while (true) {
    tidy();
    std::vector<VertexId> vmap;
    std::vector<EdgeId> emap;
    LabelledGraph g = current(&vmap, &emap);
    auto bad = improper_cut_edge(g);
    if (!bad) break;
    // Remove the leafless side of the cut-edge together with the edge.
    std::vector<char> skip(g.edge_count(), 0);
    skip[*bad] = 1;
    std::vector<int> comp = components(g, &skip, nullptr);
    const int side_u = comp[g.edge(*bad).u];
    bool u_has_leaf = false;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (comp[v] == side_u && g.is_labelled(v)) u_has_leaf = true;
    const int drop = u_has_leaf ? comp[g.edge(*bad).v] : side_u;
    alive_e[emap[*bad]] = 0;
    for (std::size_t v = 0; v < labels.size(); ++v)
      if (alive_v[v] && comp[vmap[v]] == drop) {
        alive_v[v] = 0;
        for (EdgeId e : incident(static_cast<VertexId>(v))) alive_e[e] = 0;
      }
  }
  return Network(current(nullptr, nullptr));
}

}  // namespace detail

// Proper network from M by stripping leafless pendant parts, paired with the
// tree and the stripped network's reticulation number.
inline UtcInstance utc_to_pr_reduction(const LabelledGraph& m, const Network& t) {
  validate_relaxed(m);
  Network n = detail::strip_improper(m);
  int r = n.reticulation_number();
  return UtcInstance{std::move(n), t, r};
}

// Display test for a graph that may be improper.
inline bool displays_relaxed(const LabelledGraph& m, const Network& t) {
  return detail::Embedder(validate_relaxed(m), t.graph()).run().has_value();
}

}  // namespace phylonet
