#pragma once

#include <cctype>
#include <map>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "phylonet/canonical.hpp"
#include "phylonet/errors.hpp"
#include "phylonet/moves.hpp"
#include "phylonet/network.hpp"

namespace phylonet {

// Graph built from arbitrary vertex names; `leaves` maps a name to its label.
// With Labelling::Subset the labels need not be 1..n.
inline Network network_from_pairs(const std::vector<std::pair<int, int>>& pairs, const std::map<int, Label>& leaves,
                                  Labelling labelling = Labelling::Contiguous) {
  std::map<int, VertexId> id;
  auto get = [&](int x) {
    auto [it, fresh] = id.emplace(x, static_cast<VertexId>(id.size()));
    return it->second;
  };
  for (auto [a, b] : pairs) get(a), get(b);
  for (auto [x, l] : leaves) get(x);
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) edges.push_back({id[a], id[b]});
  std::vector<Label> labels(id.size(), 0);
  for (auto [x, l] : leaves) labels[id[x]] = l;
  const int count = static_cast<int>(id.size());
  LabelledGraph g(count, std::move(edges), std::move(labels));
  return labelling == Labelling::Subset ? Network::on_subset(std::move(g)) : Network(std::move(g));
}

// Subdivide edge e and hang a new leaf with `label` from the new vertex.
inline LabelledGraph attach_leaf(const LabelledGraph& g, EdgeId e, Label label) {
  std::vector<Edge> edges = g.edges();
  std::vector<Label> labels = g.labels();
  VertexId w = g.vertex_count(), leaf = w + 1;
  labels.push_back(0);
  labels.push_back(label);
  Edge old = edges[e];
  edges[e] = Edge{old.u, w};
  edges.push_back(Edge{w, old.v});
  edges.push_back(Edge{w, leaf});
  return LabelledGraph(g.vertex_count() + 2, std::move(edges), std::move(labels));
}

inline LabelledGraph two_leaf_graph() { return LabelledGraph(2, {{0, 1}}, {1, 2}); }

// Caterpillar with leaves 1..n in spine order (1 and 2 form a cherry at one
// end, n-1 and n at the other).
inline Network caterpillar(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidParameter, "caterpillar needs n >= 2");
  LabelledGraph g = two_leaf_graph();
  for (Label l = 3; l <= n; ++l) g = attach_leaf(g, g.incident(g.vertex_of_label(l - 1)).front(), l);
  return Network(std::move(g));
}

// Every unrooted binary tree on leaves 1..n, by stepwise leaf insertion.
inline std::vector<Network> all_trees(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidParameter, "trees need n >= 2");
  std::vector<LabelledGraph> cur{two_leaf_graph()};
  for (Label l = 3; l <= n; ++l) {
    std::vector<LabelledGraph> next;
    for (const auto& g : cur)
      for (EdgeId e = 0; e < g.edge_count(); ++e) next.push_back(attach_leaf(g, e, l));
    cur.swap(next);
  }
  std::vector<Network> out;
  for (auto& g : cur) out.push_back(Network::trusted(std::move(g)));
  return out;
}

template <class Rng>
Network random_tree(int n, Rng& rng) {
  if (n < 2) throw Error(ErrorKind::InvalidParameter, "trees need n >= 2");
  LabelledGraph g = two_leaf_graph();
  for (Label l = 3; l <= n; ++l) {
    std::uniform_int_distribution<int> pick(0, g.edge_count() - 1);
    g = attach_leaf(g, pick(rng), l);
  }
  return Network::trusted(std::move(g));
}

// Random tier-r network: r random TBR+ moves applied to a random tree.
// Every proper network arises this way.
template <class Rng>
Network random_network(int n, int r, Rng& rng) {
  Network net = random_tree(n, rng);
  for (int i = 0; i < r; ++i) {
    std::uniform_int_distribution<int> pick(0, net.edge_count() - 1);
    while (true) {
      EdgeId a = pick(rng), b = pick(rng);
      Attempt at = try_apply(net, Move::plus(Family::TBR, a, b));
      if (at) {
        net = std::move(at.applied->network);
        break;
      }
    }
  }
  return net;
}

// Randomly permute vertex ids and edge ids (labels travel with vertices).
template <class Rng>
Network shuffled(const Network& n, Rng& rng) {
  const auto& g = n.graph();
  std::vector<VertexId> perm(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) perm[v] = v;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Label> labels(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) labels[perm[v]] = g.label(v);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (rng() & 1) edges.push_back({perm[e.v], perm[e.u]});
    else edges.push_back({perm[e.u], perm[e.v]});
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return Network::trusted(LabelledGraph(g.vertex_count(), std::move(edges), std::move(labels)));
}

// Newick-like tree input with integer leaf labels, e.g. "((1,2),3,(4,5));".
// A root of degree two is suppressed.
inline Network tree_from_newick(const std::string& text, Labelling labelling = Labelling::Contiguous) {
  std::vector<std::pair<int, int>> pairs;
  std::map<int, Label> leaves;
  std::size_t pos = 0;
  int next = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto bad = [&] { throw Error(ErrorKind::SyntaxError, "bad tree string at offset " + std::to_string(pos)); };
  std::vector<std::vector<int>> children;
  auto parse = [&](auto&& self) -> int {
    skip();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      std::vector<int> kids;
      while (true) {
        kids.push_back(self(self));
        skip();
        if (pos >= text.size()) bad();
        if (text[pos] == ',') { ++pos; continue; }
        if (text[pos] == ')') { ++pos; break; }
        bad();
      }
      int v = next++;
      children.resize(next);
      children[v] = kids;
      return v;
    }
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) bad();
    int v = next++;
    children.resize(next);
    leaves[v] = std::stoi(text.substr(start, pos - start));
    return v;
  };
  int root = parse(parse);
  skip();
  if (pos < text.size() && text[pos] == ';') ++pos;
  skip();
  if (pos != text.size()) bad();
  for (int v = 0; v < next; ++v) {
    if (v == root) continue;
    for (int c : children[v]) pairs.emplace_back(v, c);
  }
  const auto& rk = children[root];
  if (rk.size() == 2) pairs.emplace_back(rk[0], rk[1]);
  else
    for (int c : rk) pairs.emplace_back(root, c);
  return network_from_pairs(pairs, leaves, labelling);
}

// All networks of tier r on leaves 1..n, one per isomorphism class. Tier
// r+1 is the TBR+ image of tier r (each proper network has a valid TBR-).
inline std::vector<std::vector<Network>> tiers_up_to(int n, int r_max) {
  std::vector<std::vector<Network>> out;
  std::unordered_set<CanonicalKey, CanonicalKeyHash> seen;
  out.emplace_back();
  for (Network& t : all_trees(n))
    if (seen.insert(canonical_key(t)).second) out.back().push_back(std::move(t));
  for (int r = 1; r <= r_max; ++r) {
    out.emplace_back();
    for (const Network& base : out[r - 1]) {
      const int E = base.edge_count();
      for (EdgeId a = 0; a < E; ++a)
        for (EdgeId b = a; b < E; ++b) {
          Attempt at = try_apply(base, Move::plus(Family::TBR, a, b));
          if (!at) continue;
          if (seen.insert(canonical_key(at.applied->network)).second) out[r].push_back(std::move(at.applied->network));
        }
    }
  }
  return out;
}

}  // namespace phylonet
