#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "phylonet/canonical.hpp"
#include "phylonet/errors.hpp"
#include "phylonet/moves.hpp"
#include "phylonet/network.hpp"
#include "phylonet/props.hpp"
#include "phylonet/search.hpp"
#include "phylonet/trees.hpp"

namespace phylonet {

// A named set of embedded networks. Graphs may be improper (the
// tree-network-example holds one), so they are kept as plain graphs.
struct Fixture {
  std::string id;
  std::string summary;
  std::vector<std::pair<std::string, LabelledGraph>> networks;

  const LabelledGraph& graph(const std::string& name) const {
    for (const auto& [k, g] : networks)
      if (k == name) return g;
    throw Error(ErrorKind::InvalidParameter, "fixture " + id + " has no network '" + name + "'");
  }
  Network network(const std::string& name) const { return Network(graph(name)); }
};

namespace detail {

// Leaves 0..n-1 carry labels 1..n; `edges` lists "u-v" pairs.
inline LabelledGraph compact_graph(int n, const std::string& edges) {
  std::vector<Edge> es;
  int top = n - 1;
  std::istringstream in(edges);
  for (std::string tok; in >> tok;) {
    const auto dash = tok.find('-');
    const VertexId u = std::stoi(tok.substr(0, dash)), v = std::stoi(tok.substr(dash + 1));
    es.push_back({u, v});
    top = std::max({top, u, v});
  }
  std::vector<Label> labels(top + 1, 0);
  for (int i = 0; i < n; ++i) labels[i] = i + 1;
  return LabelledGraph(top + 1, std::move(es), std::move(labels));
}

using NamedPairs = std::vector<std::pair<int, int>>;

inline void add_petersen(NamedPairs& out, int off) {
  for (int i = 0; i < 5; ++i) {
    out.emplace_back(off + i, off + (i + 1) % 5);
    out.emplace_back(off + i, off + i + 5);
    out.emplace_back(off + 5 + i, off + 5 + (i + 2) % 5);
  }
}

// Replaces {a, b} by the path a, mids..., b.
inline void subdivide_named(NamedPairs& ps, int a, int b, const std::vector<int>& mids) {
  auto it = std::find_if(ps.begin(), ps.end(), [&](auto p) {
    return p == std::pair{a, b} || p == std::pair{b, a};
  });
  if (it == ps.end()) throw Error(ErrorKind::InvalidParameter, "no such edge in fixture construction");
  ps.erase(it);
  int prev = a;
  for (int m : mids) ps.emplace_back(prev, m), prev = m;
  ps.emplace_back(prev, b);
}

// Two Petersen blobs joined by the chain 4, 5, 6. Leaf 1 and the chain
// attach to the first blob on disjoint edges; on the second blob leaf 3 and
// the chain sit on one edge next to each other and leaf 2 on another edge.
inline Network petersen_pair_network() {
  NamedPairs ps;
  add_petersen(ps, 0);
  add_petersen(ps, 10);
  subdivide_named(ps, 0, 1, {100});
  subdivide_named(ps, 2, 3, {101});
  subdivide_named(ps, 10, 11, {110, 111});
  subdivide_named(ps, 13, 14, {112});
  for (auto [a, b] : NamedPairs{{101, 120}, {120, 121}, {121, 122}, {122, 111}}) ps.emplace_back(a, b);
  const std::map<int, Label> leaves{{201, 1}, {202, 2}, {203, 3}, {204, 4}, {205, 5}, {206, 6}};
  for (auto [x, leaf] : NamedPairs{{100, 201}, {112, 202}, {110, 203}, {120, 204}, {121, 205}, {122, 206}})
    ps.emplace_back(x, leaf);
  return network_from_pairs(ps, leaves);
}

inline LabelledGraph swap_labels(const LabelledGraph& g, Label a, Label b) {
  std::vector<Label> ls = g.labels();
  for (Label& l : ls) l = l == a ? b : l == b ? a : l;
  return LabelledGraph(g.vertex_count(), g.edges(), std::move(ls));
}

// Tree on six leaves with cherry {1, 5}, a proper network with three extra
// edges displaying it, and an improper network hanging a leafless blob off it.
inline Fixture tree_network_example() {
  const NamedPairs tree{{10, 1}, {10, 5}, {10, 11}, {11, 2}, {11, 12}, {12, 3}, {12, 13}, {13, 4}, {13, 6}};
  const std::map<int, Label> leaves{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}};
  const NamedPairs net{{10, 1},  {10, 5},  {10, 20}, {20, 11}, {11, 21}, {21, 2},  {21, 22}, {12, 22}, {22, 3},
                       {11, 12}, {12, 23}, {23, 24}, {24, 13}, {23, 25}, {13, 25}, {25, 4},  {24, 20}, {13, 6}};
  const NamedPairs improper{{10, 1},  {10, 5},  {10, 11}, {11, 2},  {11, 12}, {12, 3},  {12, 30}, {30, 13},
                            {13, 4},  {13, 6},  {30, 31}, {31, 32}, {31, 33}, {32, 33}, {32, 33}};
  Fixture f{"tree-network-example", "a tree T, a proper network N displaying T, an improper network M displaying T", {}};
  f.networks.emplace_back("T", network_from_pairs(tree, leaves).graph());
  f.networks.emplace_back("N", network_from_pairs(net, leaves).graph());
  std::map<int, VertexId> id;
  for (auto [a, b] : improper) id.emplace(a, 0), id.emplace(b, 0);
  VertexId next = 0;
  for (auto& [name, v] : id) v = next++;
  std::vector<Edge> es;
  for (auto [a, b] : improper) es.push_back({id[a], id[b]});
  std::vector<Label> ls(id.size(), 0);
  for (auto [name, l] : leaves) ls[id[name]] = l;
  f.networks.emplace_back("M", LabelledGraph(static_cast<int>(id.size()), std::move(es), std::move(ls)));
  return f;
}

inline std::vector<Fixture> build_fixtures() {
  std::vector<Fixture> out;
  out.push_back(Fixture{
      "pz-but-no-zp",
      "N (r=2) and N' (r=3) at TBR distance two; no shortest sequence starts with TBR0",
      {{"N", compact_graph(4, "0-9 1-7 2-8 3-9 4-5 4-5 4-8 5-9 6-7 6-7 6-8")},
       {"N'", compact_graph(4, "0-8 1-9 2-10 3-11 4-5 4-5 4-6 5-8 6-8 6-11 7-9 7-10 7-10 9-11")}}});
  out.push_back(Fixture{
      "nni-tier-nonisometric",
      "NNI+, NNI0, NNI- sequences inside tiers 1..2; a second pair with in-tier distance five",
      {{"N", compact_graph(5, "0-7 1-8 2-8 3-9 4-9 5-6 5-6 5-7 6-8 7-9")},
       {"A", compact_graph(5, "0-8 1-11 2-11 3-9 4-10 5-6 5-6 5-8 6-11 7-8 7-9 7-10 9-10")},
       {"B", compact_graph(5, "0-8 1-11 2-11 3-9 4-10 5-6 5-7 5-8 6-8 6-11 7-9 7-10 9-10")},
       {"N'", compact_graph(5, "0-6 1-9 2-9 3-7 4-8 5-6 5-7 5-8 6-9 7-8")},
       {"P", compact_graph(5, "0-6 1-7 2-8 3-9 4-9 5-6 5-6 5-7 7-8 8-9")},
       {"PA", compact_graph(5, "0-7 1-8 2-9 3-10 4-11 5-7 5-7 5-8 6-9 6-10 6-11 8-9 10-11")},
       {"PB", compact_graph(5, "0-7 1-8 2-9 3-10 4-11 5-7 5-8 5-9 6-9 6-10 6-11 7-8 10-11")},
       {"P'", compact_graph(5, "0-9 1-9 2-6 3-7 4-8 5-6 5-7 5-8 6-9 7-8")}}});
  out.push_back(Fixture{
      "pr-tier-nonisometric-forward",
      "PR+, PR0, PR- sequence through tier 14 between two networks of tier 13 on four leaves",
      {{"N", compact_graph(4, "0-28 1-29 2-30 3-31 4-6 4-7 4-10 5-7 5-8 5-9 6-11 6-12 7-15 8-9 8-16 9-17 10-11 "
                              "10-18 11-19 12-15 12-22 13-14 13-16 13-23 14-21 14-24 15-25 16-26 17-18 17-25 "
                              "18-27 19-20 19-27 20-22 20-24 21-23 21-26 22-28 23-28 24-29 25-30 26-30 27-31 29-31")},
       {"N1", compact_graph(4, "0-30 1-31 2-32 3-33 4-6 4-7 4-10 5-7 5-8 5-9 6-11 6-12 7-15 8-9 8-16 9-17 10-11 "
                               "10-19 11-20 12-15 12-23 13-14 13-16 13-24 14-18 14-25 15-26 16-27 17-19 17-26 "
                               "18-22 18-27 19-28 20-21 20-28 21-23 21-25 22-24 22-29 23-30 24-30 25-31 26-32 "
                               "27-32 28-33 29-31 29-33")},
       {"N2", compact_graph(4, "0-30 1-31 2-32 3-33 4-5 4-10 4-11 5-7 5-12 6-7 6-8 6-9 7-17 8-9 8-16 9-18 10-11 "
                               "10-16 11-20 12-13 12-20 13-17 13-24 14-15 14-18 14-23 15-19 15-25 16-26 17-26 "
                               "18-27 19-21 19-27 20-28 21-23 21-29 22-24 22-25 22-28 23-30 24-30 25-31 26-32 "
                               "27-32 28-33 29-31 29-33")},
       {"N'", compact_graph(4, "0-28 1-29 2-30 3-31 4-6 4-9 4-10 5-7 5-8 5-11 6-11 6-12 7-8 7-15 8-16 9-10 9-15 "
                               "10-18 11-19 12-18 12-21 13-14 13-16 13-22 14-17 14-23 15-25 16-24 17-20 17-24 "
                               "18-26 19-21 19-25 20-22 20-27 21-28 22-28 23-26 23-29 24-30 25-30 26-31 27-29 "
                               "27-31")}}});
  {
    Network n = petersen_pair_network();
    out.push_back(Fixture{"tbased-petersen",
                          "tree-based N with two Petersen blobs and N' = N with leaves 1 and 2 swapped",
                          {{"N", n.graph()}, {"N'", swap_labels(n.graph(), 1, 2)}}});
  }
  out.push_back(Fixture{
      "lvlk-nonisometric-forward",
      "level-2 networks N, N' joined by two PR0 moves through the level-3 network M",
      {{"N", compact_graph(5, "0-13 1-10 2-11 3-12 4-13 5-6 5-7 5-8 6-7 6-8 7-9 8-13 9-10 9-12 10-11 11-12")},
       {"M", compact_graph(5, "0-13 1-10 2-11 3-12 4-13 5-6 5-7 5-8 6-7 6-8 7-9 8-10 9-11 9-13 10-12 11-12")},
       {"N'", compact_graph(5, "0-9 1-10 2-11 3-12 4-13 5-6 5-7 5-8 6-7 6-10 7-10 8-9 8-11 9-13 11-12 12-13")}}});
  out.push_back(tree_network_example());
  return out;
}

}  // namespace detail

inline const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = detail::build_fixtures();
  return all;
}

inline const Fixture& fixture(const std::string& id) {
  for (const Fixture& f : fixtures())
    if (f.id == id) return f;
  throw Error(ErrorKind::InvalidParameter, "unknown fixture '" + id + "'");
}

// ---------------------------------------------------------------------------
// Figure verification.

struct Claim {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct FigureReport {
  std::string id;
  std::vector<Claim> claims;
  std::map<std::string, long> values;
  std::vector<MoveSequence> sequences;

  bool ok() const {
    return std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.holds; });
  }
  const Claim* first_failure() const {
    for (const Claim& c : claims)
      if (!c.holds) return &c;
    return nullptr;
  }
};

struct FigureOptions {
  bool full = true;  // also run the checks that need whole neighbourhoods of large networks
  int threads = 1;
};

namespace detail {

// Sequence start -> stops[0] -> stops[1] ... with one move of kinds[i] per
// step; nullopt when some step has no such move.
inline std::optional<MoveSequence> sequence_through(const Network& start, const std::vector<Network>& stops,
                                                    const std::vector<KindSet>& ks) {
  MoveSequence seq{start, {}};
  Network cur = start;
  for (std::size_t i = 0; i < stops.size(); ++i) {
    auto m = move_to_class(cur, canonical_key(stops[i]), ks[i]);
    if (!m) return std::nullopt;
    seq.moves.push_back(*m);
    cur = apply(cur, *m);
  }
  return seq;
}

// Whether some network admitted by `keep` is one move from both a and b, or
// b is one move from a.
inline bool two_step_path(const Network& a, const Network& b, KindSet ks, const std::function<bool(const Network&)>& keep) {
  Neighborhood na = neighbors(a, ks);
  if (na.count(canonical_key(b))) return true;
  Neighborhood nb = neighbors(b, ks);
  for (const auto& [k, x] : na)
    if (nb.count(k) && keep(x.network)) return true;
  return false;
}

inline void claim(FigureReport& rep, std::string name, bool holds, std::string detail = {}) {
  rep.claims.push_back(Claim{std::move(name), holds, std::move(detail)});
}

inline void verify_pz(const Fixture& f, FigureReport& rep, const FigureOptions& opt) {
  const Network n = f.network("N"), np = f.network("N'");
  SearchOptions so;
  so.threads = opt.threads;
  DistanceResult d = bfs_distance(n, np, kinds::tbr, ClassConstraint::all(), so);
  rep.values["distance"] = d.distance ? *d.distance : -1;
  rep.values["tier_cap"] = d.tier_cap;
  claim(rep, "tbr-distance-two", d.distance == 2);
  rep.sequences.push_back(d.witness);

  bool plus_first = false;
  for (const auto& [k, m] : neighbors(n, kinds::tbr_plus))
    if (neighbors(m.network, kinds::tbr0).count(canonical_key(np))) {
      plus_first = true;
      break;
    }
  claim(rep, "shortest-sequence-starts-with-tbr+", plus_first);

  Neighborhood minus = neighbors(np, kinds::tbr_minus);
  rep.values["tbr-_neighbours"] = static_cast<long>(minus.size());
  claim(rep, "exactly-two-tbr-_neighbours", minus.size() == 2);
  int i = 0;
  for (const auto& [k, m] : minus) {
    DistanceResult dm = bfs_distance(n, m.network, kinds::tbr0, ClassConstraint::tier(n.reticulation_number()), so);
    const std::string name = "d_tbr0(N,M" + std::to_string(++i) + ")";
    rep.values[name] = dm.distance ? *dm.distance : -1;
    claim(rep, name + ">=2", !dm.distance || *dm.distance >= 2);
  }
}

inline void verify_nni(const Fixture& f, FigureReport& rep, const FigureOptions& opt) {
  SearchOptions so;
  so.threads = opt.threads;
  const std::vector<KindSet> pzm{kind_bit(MoveKind::NNIplus), kinds::nni0, kind_bit(MoveKind::NNIminus)};
  auto check_pair = [&](const std::string& p, const std::string& a, const std::string& b, const std::string& q) {
    const Network s = f.network(p), t = f.network(q);
    auto seq = sequence_through(s, {f.network(a), f.network(b), t}, pzm);
    claim(rep, p + "->" + q + ":nni+,nni0,nni-", seq.has_value());
    if (seq) rep.sequences.push_back(*seq);
    const int r = s.reticulation_number();
    DistanceResult in = bfs_distance(s, t, kinds::nni0, ClassConstraint::tier(r), so);
    DistanceResult through = bfs_distance(s, t, kinds::nni, ClassConstraint::tier_range(r, r + 1), so);
    rep.values["d_in_tier(" + p + "," + q + ")"] = in.distance ? *in.distance : -1;
    rep.values["d_through_tier(" + p + "," + q + ")"] = through.distance ? *through.distance : -1;
    return std::pair{in.distance, through.distance};
  };
  auto [in1, through1] = check_pair("N", "A", "B", "N'");
  claim(rep, "N->N':shortest-nni0-length-three", in1 == 3);
  auto [in2, through2] = check_pair("P", "PA", "PB", "P'");
  claim(rep, "P->P':in-tier-exceeds-through-tier", in2 && through2 && *in2 > *through2);
}

inline void verify_pr13(const Fixture& f, FigureReport& rep, const FigureOptions& opt) {
  const Network n = f.network("N"), np = f.network("N'");
  const int r = n.reticulation_number();
  rep.values["r"] = r;
  claim(rep, "endpoints-in-tier-13", r == 13 && np.reticulation_number() == 13);
  claim(rep, "middle-in-tier-14",
        f.network("N1").reticulation_number() == 14 && f.network("N2").reticulation_number() == 14);
  auto seq = sequence_through(n, {f.network("N1"), f.network("N2"), np},
                              {kind_bit(MoveKind::PRplus), kinds::pr0, kind_bit(MoveKind::PRminus)});
  claim(rep, "pr+,pr0,pr-sequence-valid", seq.has_value());
  if (seq) rep.sequences.push_back(*seq);
  if (opt.full) {
    const bool short_path = two_step_path(n, np, kinds::pr0, [](const Network&) { return true; });
    rep.values["pr0_distance_lower_bound"] = short_path ? 1 : 3;
    claim(rep, "no-pr0-sequence-of-length-two", !short_path);
  }
}

inline void verify_petersen(const Fixture& f, FigureReport& rep, const FigureOptions& opt) {
  const Network n = f.network("N"), np = f.network("N'");
  claim(rep, "N-tree-based", is_tree_based(n));
  claim(rep, "N'-tree-based", is_tree_based(np));
  const EdgeId e2 = n.leaf_edge(2);
  const Move first = Move::pr0(e2, n.edge(e2).other(n.leaf(2)), n.leaf_edge(1));
  Attempt at = try_apply(n, first);
  claim(rep, "leaf-2-moves-next-to-leaf-1", static_cast<bool>(at));
  if (!at) return;
  const Network mid = at.applied->network;
  auto second = move_to_class(mid, canonical_key(np), kinds::pr0);
  claim(rep, "leaf-1-moves-to-old-place-of-leaf-2", second.has_value());
  if (second) rep.sequences.push_back(MoveSequence{n, {first, *second}});
  claim(rep, "midpoint-not-tree-based", !is_tree_based(mid));
  if (opt.full) {
    const bool adjacent = neighbors(n, kinds::tbr).count(canonical_key(np)) > 0;
    claim(rep, "tbr-distance-two", second.has_value() && !adjacent);
    const bool tb_path = two_step_path(n, np, kinds::tbr, [](const Network& x) { return is_tree_based(x); });
    claim(rep, "no-length-two-sequence-through-tree-based-networks", !tb_path);
    rep.values["tree_based_distance_lower_bound"] = tb_path ? 2 : 3;
  }
}

inline void verify_lvlk(const Fixture& f, FigureReport& rep, const FigureOptions& opt) {
  const Network n = f.network("N"), m = f.network("M"), np = f.network("N'");
  const int k = level(n);
  rep.values["k"] = k;
  claim(rep, "endpoints-level-k", k == 2 && level(np) <= k);
  claim(rep, "middle-level-k+1", level(m) == k + 1);
  auto seq = sequence_through(n, {m, np}, {kinds::pr0, kinds::pr0});
  claim(rep, "pr0,pr0-sequence-valid", seq.has_value());
  if (seq) rep.sequences.push_back(*seq);
  if (opt.full) {
    auto keep = [k](const Network& x) { return level(x) <= k; };
    claim(rep, "not-one-move-apart", !neighbors(n, kinds::tbr).count(canonical_key(np)));
    claim(rep, "no-length-two-pr-sequence-within-level-k", !two_step_path(n, np, kinds::pr, keep));
    claim(rep, "no-length-two-tbr-sequence-within-level-k", !two_step_path(n, np, kinds::tbr, keep));
  }
}

inline void verify_tree_network(const Fixture& f, FigureReport& rep, const FigureOptions&) {
  const Network t = f.network("T"), n = f.network("N");
  const LabelledGraph& m = f.graph("M");
  rep.values["r(N)"] = n.reticulation_number();
  claim(rep, "N-has-three-reticulations", n.reticulation_number() == 3);
  claim(rep, "M-is-improper", find_violation(m).has_value() && !find_violation(m, Properness::Relaxed));
  claim(rep, "N-displays-T", displays(n, t));
  claim(rep, "M-displays-T", Embedder(m, t.graph()).run().has_value());
  auto cherry = [](const LabelledGraph& g) {
    auto parent = [&](Label l) {
      const VertexId v = g.vertex_of_label(l);
      return g.edge(g.incident(v).front()).other(v);
    };
    return parent(1) == parent(5);
  };
  claim(rep, "cherry-1-5-everywhere", cherry(t.graph()) && cherry(n.graph()) && cherry(m));
}

}  // namespace detail

// Checks the claims attached to a fixture; never throws for a failed claim.
inline FigureReport check_figure(const std::string& id, const FigureOptions& opt = {}) {
  const Fixture& f = fixture(id);
  FigureReport rep{id, {}, {}, {}};
  if (id == "pz-but-no-zp") detail::verify_pz(f, rep, opt);
  else if (id == "nni-tier-nonisometric") detail::verify_nni(f, rep, opt);
  else if (id == "pr-tier-nonisometric-forward") detail::verify_pr13(f, rep, opt);
  else if (id == "tbased-petersen") detail::verify_petersen(f, rep, opt);
  else if (id == "lvlk-nonisometric-forward") detail::verify_lvlk(f, rep, opt);
  else if (id == "tree-network-example") detail::verify_tree_network(f, rep, opt);
  return rep;
}

// As check_figure, but throws FixtureFailed naming the first failed claim.
inline FigureReport verify_figure(const std::string& id, const FigureOptions& opt = {}) {
  FigureReport rep = check_figure(id, opt);
  if (const Claim* c = rep.first_failure()) throw Error(ErrorKind::FixtureFailed, id + ": " + c->name);
  return rep;
}

}  // namespace phylonet
