#pragma once

#include <algorithm>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "phylonet/canonical.hpp"
#include "phylonet/errors.hpp"
#include "phylonet/moves.hpp"
#include "phylonet/network.hpp"
#include "phylonet/props.hpp"

namespace phylonet {

inline long ceil_log2(long x) {
  long k = 0;
  while ((1L << k) < std::max(x, 1L)) ++k;
  return k;
}

struct StageCount {
  std::string name;
  long moves = 0;
  long budget = 0;
};

struct CaterpillarResult {
  MoveSequence sequence;
  std::vector<StageCount> stages;
  Network base;      // displayed tree the network is first made tree-based on
  long budget = 0;   // one-way bound for the whole sequence

  bool within_budget() const {
    for (const auto& s : stages)
      if (s.moves > s.budget) return false;
    return static_cast<long>(sequence.size()) <= budget;
  }
};

inline long caterpillar_budget(int n, int r) {
  return 6L * n + 8L * r + n * ceil_log2(n) + r * ceil_log2(r);
}

namespace detail {

// Builds the NNI0 sequence while tracking the spanning subdivision S of the
// base tree (edge flags) and which rung end each vertex carries.
class CaterpillarBuilder {
 public:
  explicit CaterpillarBuilder(const Network& n) : start_(n), net_(n) {}

  CaterpillarResult run() {
    const int n = net_.leaf_count(), r = net_.reticulation_number();
    if (n < 2) throw Error(ErrorKind::InvalidParameter, "the pipeline needs at least two leaves");
    CaterpillarResult out;
    out.budget = caterpillar_budget(n, r);
    out.stages = {{"tree-base", 0, std::max(0L, 2L * (r - 1))},
                  {"sweep-u", 0, 3L * r + 2L * n},
                  {"sweep-v", 0, 2L * r + 2L * n},
                  {"sort-handcuffs", 0, r * (1 + ceil_log2(r))},
                  {"tree", 0, 2L * n + n * ceil_log2(n)}};
    const CanonicalKey goal = canonical_key(make_sorted_handcuffed_caterpillar(n, r));
    out.base = displayed_trees(net_).begin()->second;
    if (canonical_key(net_) != goal) {
      auto count = [&](int stage, auto&& body) {
        std::size_t before = moves_.size();
        body();
        out.stages[stage].moves = static_cast<long>(moves_.size() - before);
      };
      count(0, [&] { tree_base(out.base); });
      if (r > 0) {
        assign_roles();
        count(1, [&] { sweep(1, kU); });
        count(2, [&] { sweep(2, kV); });
        count(3, [&] { sort_handcuffs(); });
      }
      count(4, [&] { sort_tree(); });
      if (canonical_key(net_) != goal)
        throw Error(ErrorKind::RewriteFailed, "caterpillar pipeline ended away from the sorted caterpillar");
    }
    out.sequence = MoveSequence{start_, moves_};
    return out;
  }

 private:
  static constexpr int kU = 1, kV = 2;

  Network start_, net_;
  std::vector<char> in_s_;
  std::vector<int> role_;
  std::vector<Move> moves_;

  void step(const Move& m) {
    Attempt a = try_apply(net_, m);
    if (!a) throw Error(ErrorKind::RewriteFailed, "caterpillar pipeline: " + to_string(m) + ": " + a.message);
    const Applied& ap = *a.applied;
    std::vector<char> s(ap.network.edge_count(), 0);
    for (EdgeId f = 0; f < ap.network.edge_count(); ++f) s[f] = ap.origin[f] >= 0 && in_s_[ap.origin[f]];
    std::vector<int> role(ap.network.vertex_count(), 0);
    if (!role_.empty()) {
      for (VertexId v = 0; v < net_.vertex_count(); ++v)
        if (ap.vertex_map[v] >= 0) role[ap.vertex_map[v]] = role_[v];
      role[ap.added_vertices[0]] = role_[m.end];
      role_ = std::move(role);
    }
    in_s_ = std::move(s);
    net_ = ap.network;
    moves_.push_back(m);
  }

  bool touches_s(VertexId v) const {
    for (EdgeId e : net_.incident(v))
      if (in_s_[e]) return true;
    return false;
  }

  EdgeId green_edge(VertexId v) const {
    for (EdgeId e : net_.incident(v))
      if (!in_s_[e]) return e;
    return -1;
  }

  int off_s_count() const {
    int c = 0;
    for (VertexId v = 0; v < net_.vertex_count(); ++v) c += !touches_s(v);
    return c;
  }

  // S rooted at a leaf, with the base tree's vertices (leaves and S-degree
  // three) and the tree structure between them.
  struct View {
    std::vector<VertexId> par;
    std::vector<EdgeId> par_edge;
    std::vector<int> depth;
    std::vector<char> is_t;
    std::vector<VertexId> upper;  // nearest base-tree vertex above
    std::vector<int> tdepth;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> kids;  // base-tree children, edge at this vertex
    std::vector<int> leaves;
    std::vector<VertexId> order;
  };

  View view(Label root_label) const {
    const int V = net_.vertex_count();
    View w;
    w.par.assign(V, -1);
    w.par_edge.assign(V, -1);
    w.depth.assign(V, -1);
    w.is_t.assign(V, 0);
    w.upper.assign(V, -1);
    w.tdepth.assign(V, 0);
    w.kids.assign(V, {});
    w.leaves.assign(V, 0);
    const VertexId root = net_.leaf(root_label);
    std::deque<VertexId> q{root};
    w.depth[root] = 0;
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      w.order.push_back(x);
      std::vector<EdgeId> inc = net_.incident(x);
      std::sort(inc.begin(), inc.end());
      for (EdgeId e : inc) {
        if (!in_s_[e]) continue;
        VertexId y = net_.edge(e).other(x);
        if (w.depth[y] >= 0) continue;
        w.depth[y] = w.depth[x] + 1;
        w.par[y] = x;
        w.par_edge[y] = e;
        q.push_back(y);
      }
    }
    for (VertexId v : w.order) {
      int sdeg = 0;
      for (EdgeId e : net_.incident(v)) sdeg += in_s_[e];
      w.is_t[v] = net_.graph().is_labelled(v) || sdeg == 3;
    }
    for (VertexId v : w.order) {
      if (v == root) continue;
      VertexId prev = v, y = w.par[v];
      while (!w.is_t[y]) prev = y, y = w.par[y];
      w.upper[v] = y;
      if (w.is_t[v]) {
        w.kids[y].emplace_back(v, w.par_edge[prev]);
        w.tdepth[v] = w.tdepth[y] + 1;
      }
    }
    for (auto it = w.order.rbegin(); it != w.order.rend(); ++it) {
      VertexId v = *it;
      if (!w.is_t[v]) continue;
      if (net_.graph().is_labelled(v) && v != root) w.leaves[v] = 1;
      for (auto [c, e] : w.kids[v]) w.leaves[v] += w.leaves[c];
    }
    return w;
  }

  // Step 1: make S span every vertex. Vertices off S are pulled onto it one
  // per move; a vertex next to both ends of an S-edge is taken in for free.
  void tree_base(const Network& base) {
    auto emb = find_embedding(net_, base);
    if (!emb) throw Error(ErrorKind::RewriteFailed, "caterpillar pipeline: base tree not displayed");
    in_s_ = emb->covered(net_.edge_count());
    while (true) {
      const int before = off_s_count();
      if (before == 0) break;
      if (reroute()) continue;
      bool moved = false;
      for (VertexId w = 0; w < net_.vertex_count() && !moved; ++w) {
        if (touches_s(w)) continue;
        for (EdgeId ax : net_.incident(w)) {
          VertexId s = net_.edge(ax).other(w);
          if (!touches_s(s)) continue;
          for (EdgeId g : net_.incident(w)) {
            if (g == ax) continue;
            for (EdgeId t : net_.incident(s)) {
              if (!in_s_[t]) continue;
              Move m = Move::nni0(ax, g, w, t);
              if (!try_apply(net_, m)) continue;
              step(m);
              moved = true;
              break;
            }
            if (moved) break;
          }
          if (moved) break;
        }
      }
      if (!moved) throw Error(ErrorKind::RewriteFailed, "caterpillar pipeline: no move brings a vertex onto S");
      if (off_s_count() >= before) throw Error(ErrorKind::RewriteFailed, "caterpillar pipeline: step 1 stalled");
    }
  }

  // Replaces an S-edge {a,b} by a path a-w-b through a vertex w off S.
  bool reroute() {
    for (VertexId w = 0; w < net_.vertex_count(); ++w) {
      if (touches_s(w)) continue;
      for (EdgeId x : net_.incident(w))
        for (EdgeId y : net_.incident(w)) {
          if (x >= y) continue;
          VertexId a = net_.edge(x).other(w), b = net_.edge(y).other(w);
          if (a == b) continue;
          for (EdgeId ab : net_.incident(a))
            if (in_s_[ab] && net_.edge(ab).other(a) == b) {
              in_s_[ab] = 0;
              in_s_[x] = in_s_[y] = 1;
              return true;
            }
        }
    }
    return false;
  }

  // Each green edge is a rung; its end nearer leaf 1 along S is the u-end.
  void assign_roles() {
    View w = view(1);
    role_.assign(net_.vertex_count(), 0);
    for (EdgeId e = 0; e < net_.edge_count(); ++e) {
      if (in_s_[e]) continue;
      VertexId a = net_.edge(e).u, b = net_.edge(e).v;
      if (w.depth[b] < w.depth[a] || (w.depth[b] == w.depth[a] && b < a)) std::swap(a, b);
      role_[a] = kU;
      role_[b] = kV;
    }
  }

  // Step 2: rung ends of one kind walk toward the root leaf, deepest base
  // edge first. A walking end swaps past ends of the other kind, stacks onto
  // one of its own kind and jumps over base-tree vertices with its stack.
  void sweep(Label root_label, int mover) {
    while (true) {
      View w = view(root_label);
      VertexId h = -1;
      for (VertexId v : w.order) {
        if (role_[v] != mover || w.is_t[v] || w.depth[v] < 0) continue;
        if (h < 0 || std::pair{w.tdepth[w.upper[v]], w.depth[v]} > std::pair{w.tdepth[w.upper[h]], w.depth[h]}) h = v;
      }
      if (h < 0) break;
      const VertexId up = w.par[h];
      if (up == net_.leaf(root_label)) break;
      EdgeId target = w.is_t[up] || role_[up] != mover ? w.par_edge[up] : green_edge(up);
      step(Move::nni0(w.par_edge[h], green_edge(h), h, target));
    }
    unstack(root_label, mover);
  }

  // Puts stacked rung ends back onto S next to the vertex they hang from.
  void unstack(Label root_label, int mover) {
    while (true) {
      View w = view(root_label);
      bool moved = false;
      for (VertexId s = 0; s < net_.vertex_count() && !moved; ++s) {
        if (touches_s(s)) continue;
        for (EdgeId ax : net_.incident(s)) {
          VertexId p = net_.edge(ax).other(s);
          if (!touches_s(p) || role_[p] != mover) continue;
          std::vector<EdgeId> targets;
          for (EdgeId t : net_.incident(p))
            if (in_s_[t] && t != w.par_edge[p]) targets.push_back(t);
          targets.push_back(w.par_edge[p]);
          for (EdgeId f : net_.incident(s)) {
            if (f == ax) continue;
            for (EdgeId t : targets) {
              Move m = Move::nni0(ax, f, s, t);
              if (t < 0 || !try_apply(net_, m)) continue;
              step(m);
              moved = true;
              break;
            }
            if (moved) break;
          }
          if (moved) break;
        }
      }
      if (!moved) break;
    }
  }

  // Rung ends on the path from `leaf` to the first base-tree vertex, nearest
  // the leaf first.
  std::vector<VertexId> ends_near(const View& w, Label leaf, int kind) const {
    std::vector<VertexId> out;
    VertexId x = net_.leaf(leaf);
    if (leaf == 1) {
      // Walk down from the root leaf.
      while (true) {
        VertexId next = -1;
        for (EdgeId e : net_.incident(x))
          if (in_s_[e] && net_.edge(e).other(x) != w.par[x]) next = net_.edge(e).other(x);
        if (next < 0 || w.is_t[next]) break;
        if (role_[next] == kind) out.push_back(next);
        x = next;
      }
    } else {
      for (x = w.par[x]; x >= 0 && !w.is_t[x]; x = w.par[x])
        if (role_[x] == kind) out.push_back(x);
    }
    return out;
  }

  // Orders the rungs so the i-th u-end from leaf 1 meets the i-th v-end from
  // leaf 2, merging sorted runs by adjacent interchanges of u-ends.
  void sort_handcuffs() {
    auto current = [&] {
      View w = view(1);
      auto us = ends_near(w, 1, kU), vs = ends_near(w, 2, kV);
      std::vector<int> perm;
      for (VertexId u : us) {
        VertexId other = net_.edge(green_edge(u)).other(u);
        perm.push_back(static_cast<int>(std::find(vs.begin(), vs.end(), other) - vs.begin()));
      }
      return std::pair{us, perm};
    };
    auto [us0, perm] = current();
    const int r = static_cast<int>(perm.size());
    auto swap_at = [&](int k) {
      auto [us, p] = current();
      VertexId a = us[k - 1], b = us[k];
      EdgeId axis = -1, beyond = -1;
      for (EdgeId e : net_.incident(b))
        if (in_s_[e]) (net_.edge(e).other(b) == a ? axis : beyond) = e;
      step(Move::nni0(axis, green_edge(a), a, beyond));
      std::swap(perm[k - 1], perm[k]);
    };
    for (int width = 1; width < r; width *= 2)
      for (int lo = 0; lo + width < r; lo += 2 * width) {
        const int mid = lo + width, hi = std::min(r, lo + 2 * width);
        for (int k = mid; k < hi; ++k)
          for (int j = k; j > lo && perm[j - 1] > perm[j]; --j) swap_at(j);
      }
  }

  // Step 3: caterpillar on the base tree by rotations along the spine from
  // leaf 1, then leaves into order by adjacent interchanges.
  void sort_tree() {
    if (net_.leaf_count() < 4) return;
    auto first_branch = [&](const View& w) { return w.kids[net_.leaf(1)].front().first; };
    {
      View w = view(1);
      VertexId p = first_branch(w);
      while (true) {
        const auto& ks = w.kids[p];
        bool leaf0 = w.leaves[ks[0].first] == 1, leaf1 = w.leaves[ks[1].first] == 1;
        if (leaf0 && leaf1) break;
        if (leaf0 || leaf1) {
          p = ks[leaf0 ? 1 : 0].first;
          continue;
        }
        auto [lc, le] = w.leaves[ks[0].first] <= w.leaves[ks[1].first] ? ks[0] : ks[1];
        EdgeId re = (w.leaves[ks[0].first] <= w.leaves[ks[1].first] ? ks[1] : ks[0]).second;
        const auto& lk = w.kids[lc];
        auto l2 = w.leaves[lk[0].first] <= w.leaves[lk[1].first] ? lk[1] : lk[0];
        step(Move::nni0(le, re, p, l2.second));
        // Walk the spine again from its top.
        w = view(1);
        p = first_branch(w);
      }
    }
    while (true) {
      View w = view(1);
      std::vector<VertexId> spine;
      std::vector<std::pair<Label, EdgeId>> at;  // leaf hanging at each spine vertex
      VertexId p = first_branch(w);
      Label last_a = 0, last_b = 0;
      while (true) {
        const auto& ks = w.kids[p];
        auto leaf_of = [&](VertexId c) { return net_.graph().label(c); };
        bool leaf0 = w.leaves[ks[0].first] == 1 && net_.graph().is_labelled(ks[0].first);
        bool leaf1 = w.leaves[ks[1].first] == 1 && net_.graph().is_labelled(ks[1].first);
        if (leaf0 && leaf1) {
          last_a = std::min(leaf_of(ks[0].first), leaf_of(ks[1].first));
          last_b = std::max(leaf_of(ks[0].first), leaf_of(ks[1].first));
          spine.push_back(p);
          break;
        }
        auto leaf_kid = leaf0 ? ks[0] : ks[1];
        spine.push_back(p);
        at.emplace_back(leaf_of(leaf_kid.first), leaf_kid.second);
        p = leaf0 ? ks[1].first : ks[0].first;
      }
      std::vector<Label> seq;
      for (auto [l, e] : at) seq.push_back(l);
      seq.push_back(last_a);
      seq.push_back(last_b);
      std::size_t i = 0;
      while (i + 1 < seq.size() && seq[i] < seq[i + 1]) ++i;
      if (i + 1 >= seq.size()) break;
      // Swap the leaf at spine[i] with the smaller-position leaf at spine[i+1].
      const VertexId a = spine[i], b = spine[i + 1];
      EdgeId axis = -1;
      for (auto [c, e] : w.kids[a])
        if (c == b) axis = e;
      EdgeId target = -1;
      const Label keep = seq[i + 1];
      for (auto [c, e] : w.kids[b]) {
        if (net_.graph().is_labelled(c) && net_.graph().label(c) == keep) continue;
        target = e;
      }
      step(Move::nni0(axis, at[i].second, a, target));
    }
  }
};

}  // namespace detail

// NNI0 moves taking N to the sorted handcuffed caterpillar with its leaf
// and reticulation numbers, with move counts per stage.
inline CaterpillarResult to_sorted_caterpillar(const Network& n) { return detail::CaterpillarBuilder(n).run(); }

}  // namespace phylonet
