#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "phylonet/canonical.hpp"
#include "phylonet/errors.hpp"
#include "phylonet/network.hpp"

// UPNF: a plain-text edge list.
//
//   upnf 1
//   leaf <vid> <label>
//   edge <u> <v>          (repeat a line for parallel edges)
//
// `#` starts a comment. Vertex ids are arbitrary non-negative integers; they
// are renumbered in increasing order when read, and edge ids follow the order
// of the `edge` lines.

namespace phylonet {

namespace detail {

inline bool parse_nonneg(const std::string& tok, long long& out) {
  if (tok.empty() || tok.size() > 12) return false;
  for (char c : tok)
    if (c < '0' || c > '9') return false;
  out = std::stoll(tok);
  return true;
}

}  // namespace detail

// Parses without checking network invariants (used for improper inputs).
inline LabelledGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false;
  std::map<long long, Label> leaf_of;
  std::vector<std::pair<long long, long long>> raw_edges;
  std::vector<long long> vids;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::SyntaxError, "line " + std::to_string(lineno) + ": " + why, lineno);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "upnf" || tok[1] != "1") fail("expected header 'upnf 1'");
      header = true;
      continue;
    }
    long long a = 0, b = 0;
    if (tok[0] == "leaf") {
      if (tok.size() != 3 || !detail::parse_nonneg(tok[1], a) || !detail::parse_nonneg(tok[2], b))
        fail("expected 'leaf <vid> <label>'");
      if (b == 0) throw Error(ErrorKind::BadLabeling, "line " + std::to_string(lineno) + ": labels start at 1");
      if (leaf_of.count(a))
        throw Error(ErrorKind::BadLabeling, "line " + std::to_string(lineno) + ": vertex labelled twice");
      leaf_of[a] = static_cast<Label>(b);
      vids.push_back(a);
    } else if (tok[0] == "edge") {
      if (tok.size() != 3 || !detail::parse_nonneg(tok[1], a) || !detail::parse_nonneg(tok[2], b))
        fail("expected 'edge <u> <v>'");
      raw_edges.emplace_back(a, b);
      vids.push_back(a);
      vids.push_back(b);
    } else {
      fail("unknown record '" + tok[0] + "'");
    }
  }
  if (!header) fail("missing header 'upnf 1'");
  std::sort(vids.begin(), vids.end());
  vids.erase(std::unique(vids.begin(), vids.end()), vids.end());
  auto id = [&](long long x) {
    return static_cast<VertexId>(std::lower_bound(vids.begin(), vids.end(), x) - vids.begin());
  };
  std::vector<Label> labels(vids.size(), 0);
  std::vector<char> used;
  for (auto [vid, l] : leaf_of) {
    if (static_cast<std::size_t>(l) >= used.size()) used.resize(l + 1, 0);
    if (used[l]) throw Error(ErrorKind::BadLabeling, "duplicated leaf label " + std::to_string(l));
    used[l] = 1;
    labels[id(vid)] = l;
  }
  std::vector<Edge> edges;
  for (auto [a, b] : raw_edges) edges.push_back({id(a), id(b)});
  return LabelledGraph(static_cast<int>(vids.size()), std::move(edges), std::move(labels));
}

inline Network parse(const std::string& text) { return Network(parse_graph(text)); }

// Deterministic text: leaves get vids 0..n-1 by ascending label, unlabelled
// vertices follow in canonical order, edges are sorted pairs in lexicographic
// order.
inline std::string serialize(const LabelledGraph& g) {
  CanonicalForm cf = canonical_form(g);
  std::vector<VertexId> leaves, inner;
  for (VertexId v : cf.order) (g.is_labelled(v) ? leaves : inner).push_back(v);
  std::sort(leaves.begin(), leaves.end(), [&](VertexId a, VertexId b) { return g.label(a) < g.label(b); });
  std::vector<int> pos(g.vertex_count());
  int next = 0;
  for (VertexId v : leaves) pos[v] = next++;
  for (VertexId v : inner) pos[v] = next++;
  std::vector<std::pair<int, int>> es;
  for (const Edge& e : g.edges()) es.emplace_back(std::min(pos[e.u], pos[e.v]), std::max(pos[e.u], pos[e.v]));
  std::sort(es.begin(), es.end());
  std::string out = "upnf 1\n";
  for (VertexId v : leaves) out += "leaf " + std::to_string(pos[v]) + " " + std::to_string(g.label(v)) + "\n";
  for (auto [a, b] : es) out += "edge " + std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

inline std::string serialize(const Network& n) { return serialize(n.graph()); }

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::SyntaxError, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Network load(const std::string& path) { return parse(read_file(path)); }

}  // namespace phylonet
