#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "phylonet/canonical.hpp"
#include "phylonet/errors.hpp"
#include "phylonet/moves.hpp"
#include "phylonet/network.hpp"
#include "phylonet/props.hpp"
#include "phylonet/trees.hpp"

namespace phylonet {

struct SearchOptions {
  int max_depth = -1;                 // -1: unbounded
  std::optional<int> tier_cap;        // highest tier visited; default max(rA, rB) + 1 for unbounded classes
  std::size_t node_cap = 5'000'000;   // canonical keys stored per search
  int threads = 1;
};

struct DistanceResult {
  std::optional<int> distance;  // nullopt: Unreachable
  int max_depth = -1;
  int tier_cap = -1;            // -1: the class bounds the tiers itself
  std::size_t explored = 0;
  MoveSequence witness;

  bool reachable() const { return distance.has_value(); }
};

namespace detail {

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

inline bool bounded_class(const ClassConstraint& c) {
  return c.kind == ClassConstraint::Kind::Tier || c.kind == ClassConstraint::Kind::TierRange;
}

// Membership in the class intersected with the tier cap.
struct Admission {
  const ClassConstraint& c;
  int tier_cap;
  bool operator()(const Network& n) const {
    if (tier_cap >= 0 && n.reticulation_number() > tier_cap) return false;
    return c.admits(n);
  }
};

// Neighbours of every network in `frontier`, restricted to admitted classes.
inline std::vector<Neighborhood> expand(const std::vector<const Network*>& frontier, KindSet ks, const Admission& admit,
                                        int threads) {
  std::vector<Neighborhood> out(frontier.size());
  parallel_for(frontier.size(), threads, [&](std::size_t i) {
    Neighborhood nb = neighbors(*frontier[i], ks);
    for (auto it = nb.begin(); it != nb.end();) it = admit(it->second.network) ? std::next(it) : nb.erase(it);
    out[i] = std::move(nb);
  });
  return out;
}

// First move (in enumeration order) from `from` to the class `to`.
inline std::optional<Move> move_to_class(const Network& from, const CanonicalKey& to, KindSet ks) {
  for (const Move& m : enumerate_moves(from, ks)) {
    Attempt a = try_apply(from, m);
    if (a && canonical_key(a.applied->network) == to) return m;
  }
  return std::nullopt;
}

inline MoveSequence replay_path(const Network& start, const std::vector<CanonicalKey>& path, KindSet ks) {
  MoveSequence seq{start, {}};
  Network cur = start;
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto m = move_to_class(cur, path[i], ks);
    if (!m) throw Error(ErrorKind::InvalidMove, "search path cannot be replayed");
    seq.moves.push_back(*m);
    cur = apply(cur, *m);
  }
  return seq;
}

}  // namespace detail

// Shortest sequence from A to B using moves in `ks`, every network in the
// sequence belonging to `c`. Bidirectional breadth-first search over
// canonical keys; requires `ks` to be closed under inversion.
inline DistanceResult bfs_distance(const Network& a, const Network& b, KindSet ks, const ClassConstraint& c,
                                   const SearchOptions& opt = {}) {
  if (a.leaf_count() != b.leaf_count()) throw Error(ErrorKind::LabelMismatch, "networks have different leaf sets");
  DistanceResult res;
  res.max_depth = opt.max_depth;
  if (opt.tier_cap) res.tier_cap = *opt.tier_cap;
  else if (!detail::bounded_class(c)) res.tier_cap = std::max(a.reticulation_number(), b.reticulation_number()) + 1;
  const detail::Admission admit{c, res.tier_cap};
  if (!admit(a) || !admit(b))
    throw Error(ErrorKind::ConstraintViolated, "endpoint outside the class " + c.describe());

  struct Node {
    int depth;
    CanonicalKey parent;
    Network net;
  };
  using Side = std::map<CanonicalKey, Node>;
  Side side[2];
  std::vector<CanonicalKey> frontier[2];
  const CanonicalKey ka = canonical_key(a), kb = canonical_key(b);
  side[0].emplace(ka, Node{0, ka, a});
  side[1].emplace(kb, Node{0, kb, b});
  frontier[0] = {ka};
  frontier[1] = {kb};
  res.witness.start = a;
  if (ka == kb) {
    res.distance = 0;
    return res;
  }
  int depth[2] = {0, 0};
  std::optional<CanonicalKey> meet;
  int best = -1;
  while (!frontier[0].empty() && !frontier[1].empty()) {
    if (opt.max_depth >= 0 && depth[0] + depth[1] >= opt.max_depth) break;
    const int s = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    Side& mine = side[s];
    const Side& other = side[1 - s];
    std::vector<const Network*> nets;
    for (const auto& k : frontier[s]) nets.push_back(&mine.at(k).net);
    auto expanded = detail::expand(nets, ks, admit, opt.threads);
    std::vector<CanonicalKey> next;
    for (std::size_t i = 0; i < nets.size(); ++i)
      for (auto& [k, nb] : expanded[i]) {
        if (mine.count(k)) continue;
        mine.emplace(k, Node{depth[s] + 1, frontier[s][i], std::move(nb.network)});
        next.push_back(k);
        auto hit = other.find(k);
        if (hit != other.end()) {
          int total = depth[s] + 1 + hit->second.depth;
          if (best < 0 || total < best || (total == best && k < *meet)) best = total, meet = k;
        }
      }
    res.explored = side[0].size() + side[1].size();
    if (res.explored > opt.node_cap)
      throw Error(ErrorKind::CapExceeded, "search exceeded " + std::to_string(opt.node_cap) + " nodes");
    std::sort(next.begin(), next.end());
    frontier[s] = std::move(next);
    ++depth[s];
    if (meet) break;
  }
  res.explored = side[0].size() + side[1].size();
  if (!meet || (opt.max_depth >= 0 && best > opt.max_depth)) return res;
  std::vector<CanonicalKey> path;
  for (CanonicalKey k = *meet;; k = side[0].at(k).parent) {
    path.push_back(k);
    if (k == ka) break;
  }
  std::reverse(path.begin(), path.end());
  for (CanonicalKey k = *meet; k != kb;) {
    k = side[1].at(k).parent;
    path.push_back(k);
  }
  res.distance = best;
  res.witness = detail::replay_path(a, path, ks);
  return res;
}

// ---------------------------------------------------------------------------
// Whole spaces.

struct SpaceOptions {
  int r_max = 2;  // tier bound for classes that do not bound tiers themselves
  std::size_t node_cap = 5'000'000;
  int threads = 1;
};

struct SpaceGraph {
  int n = 0;
  ClassConstraint constraint;
  int r_lo = 0;
  int r_hi = 0;
  KindSet kinds = 0;
  std::vector<CanonicalKey> keys;  // sorted
  std::vector<Network> nodes;
  std::vector<std::vector<int>> adjacency;

  std::size_t size() const { return nodes.size(); }
  int index_of(const CanonicalKey& k) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), k);
    return it != keys.end() && *it == k ? static_cast<int>(it - keys.begin()) : -1;
  }
};

// Every class on n leaves inside the tier bounds that satisfies `c`, with
// the move graph under `ks` restricted to those classes. The node set comes
// from independent generation, not from a walk, so connectivity is a real
// property of the result.
inline SpaceGraph enumerate_space(int n, const ClassConstraint& c, KindSet ks, const SpaceOptions& opt = {}) {
  SpaceGraph g;
  g.n = n;
  g.constraint = c;
  g.kinds = ks;
  if (detail::bounded_class(c)) g.r_lo = c.lo, g.r_hi = c.hi;
  else g.r_lo = 0, g.r_hi = opt.r_max;
  if (g.r_lo < 0 || g.r_hi < g.r_lo) throw Error(ErrorKind::InvalidParameter, "empty tier range");
  auto tiers = tiers_up_to(n, g.r_hi);
  std::vector<std::pair<CanonicalKey, Network>> found;
  for (int r = g.r_lo; r <= g.r_hi; ++r)
    for (Network& net : tiers[r])
      if (c.admits(net)) found.emplace_back(canonical_key(net), std::move(net));
  if (found.size() > opt.node_cap)
    throw Error(ErrorKind::CapExceeded, "space has " + std::to_string(found.size()) + " classes");
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [k, net] : found) {
    g.keys.push_back(k);
    g.nodes.push_back(std::move(net));
  }
  g.adjacency.resize(g.size());
  detail::parallel_for(g.size(), opt.threads, [&](std::size_t i) {
    for (const auto& [k, nb] : neighbors(g.nodes[i], ks)) {
      int j = g.index_of(k);
      if (j >= 0) g.adjacency[i].push_back(j);
    }
  });
  return g;
}

// Weakly connected components, as lists of node indices.
inline std::vector<std::vector<int>> space_components(const SpaceGraph& g) {
  std::vector<std::vector<int>> undirected(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int j : g.adjacency[i]) undirected[i].push_back(j), undirected[j].push_back(static_cast<int>(i));
  std::vector<int> comp(g.size(), -1);
  std::vector<std::vector<int>> out;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (comp[s] >= 0) continue;
    out.emplace_back();
    std::vector<int> stack{static_cast<int>(s)};
    comp[s] = static_cast<int>(out.size()) - 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      out.back().push_back(x);
      for (int y : undirected[x])
        if (comp[y] < 0) comp[y] = comp[s], stack.push_back(y);
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

inline bool is_connected(const SpaceGraph& g) { return space_components(g).size() <= 1; }

// Distances from node s; -1 where unreachable.
inline std::vector<int> bfs_levels(const SpaceGraph& g, int s) {
  std::vector<int> d(g.size(), -1);
  std::vector<int> queue{s};
  d[s] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (int y : g.adjacency[queue[i]])
      if (d[y] < 0) d[y] = d[queue[i]] + 1, queue.push_back(y);
  return d;
}

// Largest distance between two nodes (all-pairs breadth-first search).
inline int diameter(const SpaceGraph& g, int threads = 1) {
  if (g.size() == 0) return 0;
  auto comps = space_components(g);
  if (comps.size() > 1)
    throw Error(ErrorKind::DisconnectedSpace,
                "space has " + std::to_string(comps.size()) + " components (" + g.constraint.describe() + ")");
  std::vector<int> ecc(g.size(), 0);
  std::atomic<bool> directed_gap = false;
  detail::parallel_for(g.size(), threads, [&](std::size_t s) {
    auto d = bfs_levels(g, static_cast<int>(s));
    for (int x : d) {
      if (x < 0) directed_gap = true;
      ecc[s] = std::max(ecc[s], x);
    }
  });
  if (directed_gap) throw Error(ErrorKind::DisconnectedSpace, "space is not strongly connected under the kind-set");
  return *std::max_element(ecc.begin(), ecc.end());
}

// Degree of each node under the space's moves, as a histogram.
inline std::map<int, int> degree_histogram(const SpaceGraph& g) {
  std::map<int, int> h;
  for (const auto& a : g.adjacency) ++h[static_cast<int>(a.size())];
  return h;
}

// Known upper bound on the TBR0 diameter of unrooted binary trees on n leaves.
inline int tree_tbr_diameter_bound(int n) {
  return n - 3 - static_cast<int>(std::floor((std::sqrt(static_cast<double>(n - 2)) - 1) / 2));
}

// ---------------------------------------------------------------------------
// Isometry audits.

struct AuditRow {
  Network a;
  Network b;
  std::optional<int> inner;  // distance inside the subclass
  std::optional<int> outer;  // distance inside the enclosing class
  bool gap() const { return inner != outer; }
};

inline std::vector<AuditRow> isometry_audit(const ClassConstraint& sub, const ClassConstraint& super, KindSet ks,
                                            const std::vector<std::pair<Network, Network>>& instances,
                                            const SearchOptions& opt = {}) {
  std::vector<AuditRow> rows;
  for (const auto& [a, b] : instances) {
    if (!sub.admits(a) || !sub.admits(b))
      throw Error(ErrorKind::ConstraintViolated, "audit instance outside " + sub.describe());
    AuditRow row{a, b, bfs_distance(a, b, ks, sub, opt).distance, bfs_distance(a, b, ks, super, opt).distance};
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace phylonet
