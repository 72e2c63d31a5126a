#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "phylonet/canonical.hpp"
#include "phylonet/errors.hpp"
#include "phylonet/moves.hpp"
#include "phylonet/network.hpp"
#include "phylonet/props.hpp"

namespace phylonet {

// A sequence transformation: the input, the equivalent output, a tag per
// output move naming the construction used (one tag when the output is empty)
// and the length bound that applies (-1 if none).
struct RewriteReport {
  MoveSequence input;
  MoveSequence output;
  std::vector<std::string> tags;
  int n = 0;
  int r = 0;
  long bound = -1;
};

namespace detail {

// Replays s and checks every step and the endpoint; throws RewriteFailed.
inline void check_sequence(const MoveSequence& s, const CanonicalKey& end_key, const std::string& what) {
  Network cur = s.start;
  for (const Move& m : s.moves) {
    Attempt a = try_apply(cur, m);
    if (!a) throw Error(ErrorKind::RewriteFailed, what + ": invalid step " + to_string(m) + ": " + a.message);
    cur = std::move(a.applied->network);
  }
  if (canonical_key(cur) != end_key) throw Error(ErrorKind::RewriteFailed, what + ": endpoint differs from the input's");
}

inline RewriteReport make_report(MoveSequence input, MoveSequence output, std::vector<std::string> tags, long bound,
                                 const std::string& what) {
  RewriteReport rep;
  rep.n = input.start.leaf_count();
  rep.r = input.start.reticulation_number();
  rep.bound = bound;
  check_sequence(output, canonical_key(input.end()), what);
  if (bound >= 0 && static_cast<long>(output.size()) > bound)
    throw Error(ErrorKind::RewriteFailed, what + ": output longer than its bound");
  if (tags.empty()) tags.push_back("empty");
  rep.input = std::move(input);
  rep.output = std::move(output);
  rep.tags = std::move(tags);
  return rep;
}

struct Reached {
  Move move;
  Applied applied;
};

// First payload of ks on `from` whose result has key `want`. Payloads for
// which `prefer` holds are tried first; `only` restricts the scan.
inline std::optional<Reached> reach(const Network& from, const CanonicalKey& want, KindSet ks,
                                    const std::function<bool(const Move&)>& prefer = nullptr,
                                    const std::function<bool(const Move&)>& only = nullptr) {
  auto moves = enumerate_moves(from, ks);
  if (only) std::erase_if(moves, [&](const Move& m) { return !only(m); });
  if (prefer) std::stable_partition(moves.begin(), moves.end(), prefer);
  for (const Move& m : moves) {
    Attempt a = try_apply(from, m);
    if (a && canonical_key(a.applied->network) == want) return Reached{m, std::move(*a.applied)};
  }
  return std::nullopt;
}

inline bool has_parallel_edges(const Network& n) {
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const Edge& e : n.graph().edges())
    if (!seen.insert(std::minmax(e.u, e.v)).second) return true;
  return false;
}

// Edge joining a and b other than `avoid`, smallest id first; -1 if none.
inline EdgeId edge_between(const Network& n, VertexId a, VertexId b, EdgeId avoid = -1) {
  EdgeId best = -1;
  for (EdgeId e : n.incident(a))
    if (e != avoid && n.edge(e).other(a) == b && (best < 0 || e < best)) best = e;
  return best;
}

// Key of n with edge e marked by a pendant leaf carrying an unused label.
inline CanonicalKey marked_key(const Network& n, EdgeId e) {
  const auto& g = n.graph();
  std::vector<Edge> edges = g.edges();
  std::vector<Label> labels = g.labels();
  Label mark = 1;
  for (Label l : labels) mark = std::max(mark, l + 1);
  const VertexId mid = g.vertex_count(), leaf = mid + 1;
  labels.push_back(0);
  labels.push_back(mark);
  const Edge old = edges[e];
  edges[e] = Edge{old.u, mid};
  edges.push_back(Edge{mid, old.v});
  edges.push_back(Edge{mid, leaf});
  return canonical_key(LabelledGraph(g.vertex_count() + 2, std::move(edges), std::move(labels)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operation substitution.

// A TBR0 as one or two PR0 moves.
inline RewriteReport tbr0_to_pr(const Network& n, const Move& m) {
  if (m.kind != MoveKind::TBR0) throw Error(ErrorKind::InvalidParameter, "tbr0_to_pr needs a TBR0 move");
  const Applied full = apply_tracked(n, m);
  const CanonicalKey want = canonical_key(full.network);
  MoveSequence in{n, {m}};
  MoveSequence out{n, {}};
  std::vector<std::string> tags;
  auto done = [&] { return detail::make_report(in, out, tags, 2, "tbr0_to_pr"); };

  if (want == canonical_key(n)) return done();
  if (m.end >= 0) {
    out.moves = {Move::pr0(m.edge, m.end, m.target_a)};
    tags = {"single-pr"};
    return done();
  }
  const EdgeId e = m.edge;
  if (auto one = detail::reach(n, want, kinds::pr0, nullptr, [&](const Move& x) { return x.edge == e; })) {
    out.moves = {one->move};
    tags = {"single-pr"};
    return done();
  }
  // Move one end onto its target, then the other end onto its own; the
  // order and pairing that keep the intermediate valid are searched.
  const Edge ed = n.edge(e);
  for (VertexId first : {ed.u, ed.v})
    for (EdgeId t : {m.target_a, m.target_b}) {
      Move m1 = Move::pr0(e, first, t);
      Attempt a1 = try_apply(n, m1);
      if (!a1) continue;
      const Applied& ap = *a1.applied;
      const VertexId second = ap.vertex_map[ed.other(first)];
      for (EdgeId t2 = 0; t2 < ap.network.edge_count(); ++t2) {
        Move m2 = Move::pr0(ap.added_edge, second, t2);
        Attempt a2 = try_apply(ap.network, m2);
        if (a2 && canonical_key(a2.applied->network) == want) {
          out.moves = {m1, m2};
          tags = {"pr-first-end", "pr-second-end"};
          return done();
        }
      }
    }
  for (const Move& m1 : enumerate_moves(n, kinds::pr0)) {
    Attempt a1 = try_apply(n, m1);
    if (!a1) continue;
    if (auto two = detail::reach(a1.applied->network, want, kinds::pr0)) {
      out.moves = {m1, two->move};
      tags = {"search-fallback", "search-fallback"};
      return done();
    }
  }
  throw Error(ErrorKind::RewriteFailed, "tbr0_to_pr: no PR sequence of length two");
}

namespace detail {

// Walks the `at` end of edge e along `route` with NNI0 moves, finishing on the
// edge between `land` and the last route vertex. Vertex ids refer to the
// current network and are carried forward; returns false if a step fails.
struct EdgeWalk {
  Network net;
  EdgeId e;
  std::vector<Move> moves;

  bool walk(VertexId at, std::vector<VertexId> route, std::pair<VertexId, VertexId> land) {
    if (route.empty()) return true;
    VertexId stay = net.edge(e).other(at);
    for (std::size_t j = 0; j < route.size(); ++j) {
      const VertexId w = route[j];
      const EdgeId axis = edge_between(net, at, w, e);
      if (axis < 0) return false;
      EdgeId target;
      if (j + 1 < route.size()) {
        target = edge_between(net, w, route[j + 1], axis);
      } else {
        VertexId far = land.first == w ? land.second : land.second == w ? land.first : -1;
        if (far < 0) return false;
        target = edge_between(net, w, far, axis);
      }
      if (target < 0 || target == e) return false;
      Move mv = Move::nni0(axis, e, at, target);
      Attempt a = try_apply(net, mv);
      if (!a) return false;
      const Applied& ap = *a.applied;
      for (VertexId& x : route) x = ap.vertex_map[x];
      land = {ap.vertex_map[land.first], ap.vertex_map[land.second]};
      stay = ap.vertex_map[stay];
      at = ap.added_vertices[0];
      e = ap.added_edge;
      net = std::move(ap.network);
      moves.push_back(mv);
      if (net.edge(e).other(at) != stay) return false;
    }
    return true;
  }
};

// Shortest path from s to t in n without edge `skip`, as a vertex list;
// neighbours are visited in vertex-id order.
inline std::vector<VertexId> shortest_path(const Network& n, VertexId s, VertexId t, EdgeId skip) {
  std::vector<VertexId> prev(n.vertex_count(), -2);
  std::deque<VertexId> q{s};
  prev[s] = -1;
  while (!q.empty()) {
    VertexId x = q.front();
    q.pop_front();
    if (x == t) break;
    std::vector<VertexId> nb;
    for (EdgeId f : n.incident(x))
      if (f != skip) nb.push_back(n.edge(f).other(x));
    std::sort(nb.begin(), nb.end());
    for (VertexId y : nb)
      if (prev[y] == -2) {
        prev[y] = x;
        q.push_back(y);
      }
  }
  if (prev[t] == -2) return {};
  std::vector<VertexId> path;
  for (VertexId x = t; x != -1; x = prev[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

// Search over NNI0 moves of the tracked edge for a state accepted by `goal`.
template <class Goal>
std::optional<std::vector<Move>> tracked_nni_search(const Network& n, EdgeId e, int max_len, bool forbid_parallel,
                                                    Goal&& goal) {
  struct State {
    Network net;
    EdgeId e;
    int parent;
    int depth;
    Move via;
  };
  std::vector<State> states{{n, e, -1, 0, Move{}}};
  std::set<CanonicalKey> seen{marked_key(n, e)};
  for (std::size_t cur = 0; cur < states.size(); ++cur) {
    if (goal(states[cur].net, states[cur].e)) {
      std::vector<Move> out;
      for (int i = static_cast<int>(cur); states[i].parent >= 0; i = states[i].parent) out.push_back(states[i].via);
      std::reverse(out.begin(), out.end());
      return out;
    }
    if (states[cur].depth >= max_len) continue;
    const Network net = states[cur].net;
    const EdgeId te = states[cur].e;
    const int depth = states[cur].depth;
    for (const Move& m : enumerate_moves(net, kinds::nni0)) {
      if (m.edge != te) continue;
      Attempt a = try_apply(net, m);
      if (!a) continue;
      if (forbid_parallel && has_parallel_edges(a.applied->network)) continue;
      if (!seen.insert(marked_key(a.applied->network, a.applied->added_edge)).second) continue;
      states.push_back({std::move(a.applied->network), a.applied->added_edge, static_cast<int>(cur), depth + 1, m});
    }
  }
  return std::nullopt;
}

}  // namespace detail

// A PR0 as NNI0 moves that only move the pruned edge.
inline RewriteReport pr0_to_nni(const Network& n, const Move& m) {
  if (m.kind != MoveKind::PR0 && !(m.kind == MoveKind::TBR0 && m.end >= 0))
    throw Error(ErrorKind::InvalidParameter, "pr0_to_nni needs a PR0 move");
  const Applied full = apply_tracked(n, m);
  const CanonicalKey want = canonical_key(full.network);
  const long bound = 2L * n.edge_count();
  MoveSequence in{n, {m}};
  MoveSequence out{n, {}};
  std::vector<std::string> tags;
  if (want == canonical_key(n)) return detail::make_report(in, out, tags, bound, "pr0_to_nni");

  const EdgeId e = m.edge;
  const VertexId u = m.end, v = n.edge(e).other(u);
  const Edge f = n.edge(m.target_a);
  const bool keep_simple = !detail::has_parallel_edges(n) && !detail::has_parallel_edges(full.network);

  // Path from u to the nearer end of the target, avoiding e.
  auto px = detail::shortest_path(n, u, f.u, e), py = detail::shortest_path(n, u, f.v, e);
  auto path = (!py.empty() && (px.empty() || py.size() < px.size())) ? py : px;
  const VertexId x = path.empty() ? -1 : path.back();
  const VertexId y = x == f.u ? f.v : f.u;

  detail::EdgeWalk w{n, e, {}};
  bool ok = !path.empty();
  if (ok) {
    auto it = std::find(path.begin(), path.end(), v);
    const std::size_t i = it == path.end() ? 0 : static_cast<std::size_t>(it - path.begin());
    if (i == 0 || i + 1 == path.size()) {
      ok = w.walk(u, {path.begin() + 1, path.end()}, {x, y});
      if (ok) tags.assign(w.moves.size(), "walk");
    } else {
      // The path runs through v: carry v's end past it first, then u's end
      // up to the edge left where v was suppressed.
      const VertexId before = path[i - 1], after = path[i + 1];
      ok = w.walk(v, {path.begin() + i + 1, path.end()}, {x, y});
      const std::size_t first = w.moves.size();
      // Track the u end and the two path vertices through the first phase.
      if (ok) {
        Network cur = n;
        VertexId tu = u, tb = before, ta = after;
        std::vector<VertexId> pre(path.begin() + 1, path.begin() + i);
        for (const Move& mv : w.moves) {
          Applied ap = apply_tracked(cur, mv);
          tu = ap.vertex_map[tu];
          tb = ap.vertex_map[tb];
          ta = ap.vertex_map[ta];
          for (VertexId& p : pre) p = ap.vertex_map[p];
          cur = std::move(ap.network);
        }
        ok = tu >= 0 && w.walk(tu, pre, {tb, ta});
      }
      if (ok) {
        tags.assign(first, "walk-far-end");
        tags.resize(w.moves.size(), "walk-near-end");
      }
    }
  }
  if (ok && canonical_key(w.net) == want && static_cast<long>(w.moves.size()) <= bound) {
    out.moves = w.moves;
    if (keep_simple)
      for (const Network& step : out.networks()) ok = ok && !detail::has_parallel_edges(step);
    if (ok) return detail::make_report(in, out, tags, bound, "pr0_to_nni");
  }
  auto found = detail::tracked_nni_search(n, e, static_cast<int>(bound), keep_simple,
                                          [&](const Network& net, EdgeId) { return canonical_key(net) == want; });
  if (!found) throw Error(ErrorKind::RewriteFailed, "pr0_to_nni: no NNI0 walk of the moved edge");
  out.moves = *found;
  tags.assign(out.moves.size(), "search-fallback");
  return detail::make_report(in, out, tags, bound, "pr0_to_nni");
}

namespace detail {

// Edge id of the tracked edge after replaying moves that each move it.
inline std::pair<Network, EdgeId> follow(Network n, EdgeId e, const std::vector<Move>& moves) {
  for (const Move& m : moves) {
    Applied a = apply_tracked(n, m);
    e = a.edge_map[e];
    n = std::move(a.network);
  }
  return {std::move(n), e};
}

}  // namespace detail

// A minus move as NNI0 moves of the removed edge followed by one NNI-.
inline RewriteReport prminus_to_nni(const Network& n, const Move& m) {
  if (sign(m.kind) != Sign::Minus) throw Error(ErrorKind::InvalidParameter, "prminus_to_nni needs a minus move");
  const Network target = apply(n, m);
  const CanonicalKey want = canonical_key(target);
  const EdgeId e = m.edge;
  const long bound = 2L * n.edge_count() + 1;
  const bool keep_simple = !detail::has_parallel_edges(n) && !detail::has_parallel_edges(target);
  MoveSequence in{n, {m}};
  MoveSequence out{n, {}};
  std::vector<std::string> tags;
  auto finish_with = [&](std::vector<Move> walk, const char* tag) -> std::optional<RewriteReport> {
    auto [net, te] = detail::follow(n, e, walk);
    Attempt last = try_apply(net, Move::minus(Family::NNI, te));
    if (!last || canonical_key(last.applied->network) != want) return std::nullopt;
    walk.push_back(Move::minus(Family::NNI, te));
    if (static_cast<long>(walk.size()) > bound) return std::nullopt;
    out.moves = walk;
    tags.assign(walk.size() - 1, tag);
    tags.push_back("remove-triangle-edge");
    return detail::make_report(in, out, tags, bound, "prminus_to_nni");
  };

  if (detail::in_triangle(n.graph(), e))
    if (auto rep = finish_with({}, "")) return *rep;
  const Edge ed = n.edge(e);
  if (n.graph().multiplicity(ed.u, ed.v) >= 2) {
    // Slide one end across its third edge to close a triangle.
    for (VertexId at : {ed.u, ed.v}) {
      EdgeId h = -1;
      for (EdgeId x : n.incident(at))
        if (n.edge(x).other(at) != ed.other(at)) h = x;
      if (h < 0) continue;
      VertexId z = n.edge(h).other(at);
      if (n.graph().is_labelled(z)) continue;
      for (EdgeId t : n.incident(z)) {
        if (t == h) continue;
        if (!try_apply(n, Move::nni0(h, e, at, t))) continue;
        if (auto rep = finish_with({Move::nni0(h, e, at, t)}, "close-triangle")) return *rep;
      }
    }
  } else {
    // Move u onto the second-to-last edge of a shortest u-v path, then remove.
    auto path = detail::shortest_path(n, ed.u, ed.v, e);
    if (path.size() >= 4) {
      EdgeId land = detail::edge_between(n, path[path.size() - 3], path[path.size() - 2]);
      Move pr = Move::pr0(e, ed.u, land);
      if (try_apply(n, pr)) {
        try {
          RewriteReport walk = pr0_to_nni(n, pr);
          if (auto rep = finish_with(walk.output.moves, "walk")) return *rep;
        } catch (const Error&) {
        }
      }
    }
  }
  auto found = detail::tracked_nni_search(n, e, static_cast<int>(bound) - 1, keep_simple,
                                          [&](const Network& net, EdgeId te) {
                                            if (!detail::in_triangle(net.graph(), te)) return false;
                                            Attempt a = try_apply(net, Move::minus(Family::NNI, te));
                                            return a && canonical_key(a.applied->network) == want;
                                          });
  if (found)
    if (auto rep = finish_with(*found, "search-fallback")) return *rep;
  throw Error(ErrorKind::RewriteFailed, "prminus_to_nni: no NNI sequence removing the edge");
}

// ---------------------------------------------------------------------------
// Reordering and merging.

// One plus and one minus between networks of the same tier as a single TBR0,
// or nothing when the two moves cancel.
inline RewriteReport merge_plus_minus(const MoveSequence& s) {
  if (s.size() != 2) throw Error(ErrorKind::InvalidParameter, "merge_plus_minus needs two moves");
  const Sign a = sign(s.moves[0].kind), b = sign(s.moves[1].kind);
  if (!((a == Sign::Plus && b == Sign::Minus) || (a == Sign::Minus && b == Sign::Plus)))
    throw Error(ErrorKind::InvalidParameter, "merge_plus_minus needs one plus and one minus move");
  const auto nets = s.networks();
  const CanonicalKey want = canonical_key(nets[2]);
  MoveSequence out{s.start, {}};
  if (want == canonical_key(s.start)) return detail::make_report(s, out, {"moves-cancel"}, 1, "merge_plus_minus");
  EdgeId moved = s.moves[0].edge;
  if (a == Sign::Plus) moved = apply_tracked(s.start, s.moves[0]).origin[s.moves[1].edge];
  auto hit = detail::reach(s.start, want, kinds::tbr0, [&](const Move& m) { return m.edge == moved; });
  if (!hit) throw Error(ErrorKind::RewriteFailed, "merge_plus_minus: no single TBR0 joins the endpoints");
  out.moves = {hit->move};
  return detail::make_report(s, out, {hit->move.edge == moved ? "merge" : "merge-search"}, 1, "merge_plus_minus");
}

// (zero, plus) as (plus, zero): the zero move is split into a plus and a
// minus, and that minus is merged with the following plus.
inline RewriteReport swap_zero_plus(const MoveSequence& s) {
  if (s.size() != 2 || sign(s.moves[0].kind) != Sign::Zero || sign(s.moves[1].kind) != Sign::Plus)
    throw Error(ErrorKind::InvalidParameter, "swap_zero_plus needs a zero move followed by a plus move");
  const auto nets = s.networks();
  const CanonicalKey mid = canonical_key(nets[1]), want = canonical_key(nets[2]);
  MoveSequence out{s.start, {}};
  const Move& z = s.moves[0];

  if (mid == canonical_key(s.start)) {
    auto iso = find_isomorphism(nets[1], s.start);
    out.moves = {translate(s.moves[1], *iso)};
    return detail::make_report(s, out, {"vacuous-zero"}, 2, "swap_zero_plus");
  }
  std::vector<Move> splits;
  if (z.kind == MoveKind::TBR0 && z.end < 0) splits.push_back(Move::plus(Family::TBR, z.target_a, z.target_b));
  else splits.push_back(Move::plus(Family::TBR, z.target_a, z.edge));
  for (const Move& p : enumerate_moves(s.start, kinds::tbr_plus))
    if (p != splits.front()) splits.push_back(p);
  for (std::size_t i = 0; i < splits.size(); ++i) {
    Attempt a = try_apply(s.start, splits[i]);
    if (!a) continue;
    const Network& y = a.applied->network;
    const char* tag = i == 0 ? "split-zero" : "search-fallback";
    if (canonical_key(y) == want) {
      out.moves = {splits[i]};
      return detail::make_report(s, out, {tag}, 2, "swap_zero_plus");
    }
    // The minus half of the split removes the old copy of the moved edge.
    auto minus = detail::reach(y, mid, kinds::tbr_minus, [&](const Move& m) {
      return m.edge == a.applied->edge_map[z.edge];
    });
    if (!minus) continue;
    auto hit = detail::reach(y, want, kinds::tbr0, [&](const Move& m) { return m.edge == minus->move.edge; });
    if (!hit) continue;
    out.moves = {splits[i], hit->move};
    return detail::make_report(s, out, {tag, "merge"}, 2, "swap_zero_plus");
  }
  throw Error(ErrorKind::RewriteFailed, "swap_zero_plus: no plus-first sequence found");
}

// (plus, zero) from a tree to tier one as (zero, plus) through a tree.
inline RewriteReport swap_plus_zero_for_tree(const MoveSequence& s) {
  if (s.size() != 2 || sign(s.moves[0].kind) != Sign::Plus || sign(s.moves[1].kind) != Sign::Zero)
    throw Error(ErrorKind::InvalidParameter, "swap_plus_zero_for_tree needs a plus move followed by a zero move");
  if (!s.start.is_tree()) throw Error(ErrorKind::NotApplicable, "start is not a tree");
  const auto nets = s.networks();
  const Network& end = nets[2];
  if (end.reticulation_number() != 1) throw Error(ErrorKind::NotApplicable, "end is not in tier one");
  const CanonicalKey want = canonical_key(end);
  if (detail::reach(s.start, want, kinds::tbr_plus))
    throw Error(ErrorKind::NotApplicable, "a single plus move joins the endpoints");

  const Applied add = apply_tracked(s.start, s.moves[0]);
  const Applied zero = apply_tracked(nets[1], s.moves[1]);
  const EdgeId f = add.added_edge, moved = s.moves[1].edge;
  const bool on_cycle = !detail::bridges(nets[1].graph()).is_bridge[moved];
  // Which edge of the end network comes off to leave the intermediate tree.
  std::vector<std::pair<EdgeId, const char*>> order;
  if (on_cycle) order.emplace_back(zero.added_edge, "case-cycle");
  else order.emplace_back(zero.edge_map[f], "case-cut-edge");
  for (EdgeId g = 0; g < end.edge_count(); ++g) order.emplace_back(g, "search-fallback");

  MoveSequence out{s.start, {}};
  for (const auto& [g, tag] : order) {
    if (g < 0) continue;
    Attempt cut = try_apply(end, Move::minus(Family::TBR, g));
    if (!cut || !cut.applied->network.is_tree()) continue;
    const Network& tree = cut.applied->network;
    auto hit = detail::reach(s.start, canonical_key(tree), kinds::tbr0);
    if (!hit) continue;
    auto iso = find_isomorphism(tree, hit->applied.network);
    out.moves = {hit->move, translate(cut.applied->inverse, *iso)};
    return detail::make_report(s, out, {tag, "re-add"}, 2, "swap_plus_zero_for_tree");
  }
  throw Error(ErrorKind::RewriteFailed, "swap_plus_zero_for_tree: no tree in between");
}

// Minus moves from N down to a displayed network M, removing edges outside
// an embedding of M: single uncovered edges first, then the outer edges of
// uncovered trees, then any removable uncovered edge.
inline MoveSequence descend_to_tree(const Network& n, const Network& m, std::vector<std::string>* tags = nullptr) {
  if (!displays(n, m)) throw Error(ErrorKind::NotDisplayed, "the network does not display the target");
  MoveSequence out{n, {}};
  Network cur = n;
  while (cur.reticulation_number() > m.reticulation_number()) {
    auto emb = find_embedding(cur, m);
    if (!emb) throw Error(ErrorKind::RewriteFailed, "descend_to_tree: embedding lost");
    const auto covered = emb->covered(cur.edge_count());
    const auto& g = cur.graph();
    // Uncovered degree of each vertex.
    std::vector<int> green(cur.vertex_count(), 0);
    for (EdgeId e = 0; e < cur.edge_count(); ++e)
      if (!covered[e]) ++green[g.edge(e).u], ++green[g.edge(e).v];
    // Components of the uncovered subgraph, and whether each is a tree.
    std::vector<char> skip(cur.edge_count(), 0);
    for (EdgeId e = 0; e < cur.edge_count(); ++e) skip[e] = covered[e];
    std::vector<int> comp = components(g, &skip, nullptr);
    std::map<int, std::pair<int, int>> size;  // component -> (vertices, edges)
    for (VertexId v = 0; v < cur.vertex_count(); ++v)
      if (green[v]) ++size[comp[v]].first;
    for (EdgeId e = 0; e < cur.edge_count(); ++e)
      if (!covered[e]) ++size[comp[g.edge(e).u]].second;
    std::vector<std::pair<int, EdgeId>> ranked;
    for (EdgeId e = 0; e < cur.edge_count(); ++e) {
      if (covered[e]) continue;
      const Edge ed = g.edge(e);
      auto [vs, es] = size[comp[ed.u]];
      int rank = 2;
      if (es == 1) rank = 0;
      else if (es == vs - 1 && (green[ed.u] == 1 || green[ed.v] == 1)) rank = 1;
      ranked.emplace_back(rank, e);
    }
    std::sort(ranked.begin(), ranked.end());
    static const char* names[] = {"single-edge", "tree-outer-edge", "cyclic-component"};
    bool moved = false;
    for (auto [rank, e] : ranked) {
      Attempt a = try_apply(cur, Move::minus(Family::TBR, e));
      if (!a || !displays(a.applied->network, m)) continue;
      out.moves.push_back(Move::minus(Family::TBR, e));
      if (tags) tags->push_back(names[rank]);
      cur = std::move(a.applied->network);
      moved = true;
      break;
    }
    if (!moved) throw Error(ErrorKind::RewriteFailed, "descend_to_tree: no removable uncovered edge");
  }
  if (cur.leaf_count() == m.leaf_count() && !isomorphic(cur, m))
    throw Error(ErrorKind::RewriteFailed, "descend_to_tree: ended away from the target");
  return out;
}

namespace detail {

// Replaces moves [i, i + len) by `repl` and carries the tail across the
// resulting isomorphism.
inline MoveSequence splice(const MoveSequence& s, std::size_t i, std::size_t len, const std::vector<Move>& repl) {
  const auto nets = s.networks();
  MoveSequence out{s.start, {s.moves.begin(), s.moves.begin() + i}};
  out.moves.insert(out.moves.end(), repl.begin(), repl.end());
  Network cur = out.end();
  for (std::size_t k = i + len; k < s.size(); ++k) {
    auto iso = find_isomorphism(nets[k], cur);
    if (!iso) throw Error(ErrorKind::RewriteFailed, "splice: replacement changed the endpoint");
    Move t = translate(s.moves[k], *iso);
    out.moves.push_back(t);
    cur = apply(cur, t);
  }
  return out;
}

}  // namespace detail

// A sequence with every plus move ahead of every minus move.
inline RewriteReport normalize_order(const MoveSequence& s) {
  MoveSequence cur = s;
  std::vector<std::string> tags(s.size(), "kept");
  while (true) {
    std::size_t plus = cur.size(), minus = cur.size();
    std::size_t last_minus = cur.size();
    for (std::size_t k = 0; k < cur.size(); ++k) {
      Sign sg = sign(cur.moves[k].kind);
      if (sg == Sign::Minus) last_minus = k;
      if (sg == Sign::Plus && last_minus < cur.size()) {
        plus = k;
        minus = last_minus;
        break;
      }
    }
    if (plus == cur.size()) break;
    const std::size_t at = plus == minus + 1 ? minus : plus - 1;
    const auto nets = cur.networks();
    MoveSequence window{nets[at], {cur.moves[at], cur.moves[at + 1]}};
    RewriteReport rep = plus == minus + 1 ? merge_plus_minus(window) : swap_zero_plus(window);
    cur = detail::splice(cur, at, 2, rep.output.moves);
    tags.erase(tags.begin() + at, tags.begin() + at + 2);
    std::vector<std::string> fresh = rep.output.moves.empty() ? std::vector<std::string>{} : rep.tags;
    tags.insert(tags.begin() + at, fresh.begin(), fresh.end());
  }
  return detail::make_report(s, cur, tags, static_cast<long>(s.size()), "normalize_order");
}

}  // namespace phylonet
