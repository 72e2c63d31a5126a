#pragma once

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "phylonet/canonical.hpp"
#include "phylonet/errors.hpp"
#include "phylonet/network.hpp"
#include "phylonet/workspace.hpp"

namespace phylonet {

enum class MoveKind { NNI0, NNIplus, NNIminus, PR0, PRplus, PRminus, TBR0, TBRplus, TBRminus };
enum class Family { NNI, PR, TBR };
enum class Sign { Zero, Plus, Minus };

inline Family family(MoveKind k) {
  switch (k) {
    case MoveKind::NNI0: case MoveKind::NNIplus: case MoveKind::NNIminus: return Family::NNI;
    case MoveKind::PR0: case MoveKind::PRplus: case MoveKind::PRminus: return Family::PR;
    default: return Family::TBR;
  }
}

inline Sign sign(MoveKind k) {
  switch (k) {
    case MoveKind::NNI0: case MoveKind::PR0: case MoveKind::TBR0: return Sign::Zero;
    case MoveKind::NNIplus: case MoveKind::PRplus: case MoveKind::TBRplus: return Sign::Plus;
    default: return Sign::Minus;
  }
}

inline MoveKind make_kind(Family f, Sign s) {
  static const MoveKind table[3][3] = {
      {MoveKind::NNI0, MoveKind::NNIplus, MoveKind::NNIminus},
      {MoveKind::PR0, MoveKind::PRplus, MoveKind::PRminus},
      {MoveKind::TBR0, MoveKind::TBRplus, MoveKind::TBRminus}};
  return table[static_cast<int>(f)][static_cast<int>(s)];
}

inline const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::NNI0: return "NNI0";
    case MoveKind::NNIplus: return "NNIplus";
    case MoveKind::NNIminus: return "NNIminus";
    case MoveKind::PR0: return "PR0";
    case MoveKind::PRplus: return "PRplus";
    case MoveKind::PRminus: return "PRminus";
    case MoveKind::TBR0: return "TBR0";
    case MoveKind::TBRplus: return "TBRplus";
    case MoveKind::TBRminus: return "TBRminus";
  }
  return "?";
}

inline MoveKind move_kind_from_string(const std::string& s) {
  for (int i = 0; i < 9; ++i)
    if (s == to_string(static_cast<MoveKind>(i))) return static_cast<MoveKind>(i);
  throw Error(ErrorKind::InvalidParameter, "unknown move kind '" + s + "'");
}

// Payload conventions (all ids refer to the network the move is applied to):
//   zero-moves  edge   = moved edge (for NNI0 the pruned edge f)
//               end    = pruned endpoint when only one end moves (PR0, NNI0,
//                        one-ended TBR0); -1 for a TBR0 moving both ends
//               axis   = NNI0 axis edge
//               target_a, target_b = edges receiving the regrafted end(s);
//                        a target edge is located after the pruned ends were
//                        suppressed, i.e. by the merged edge containing it
//   plus-moves  target_a, target_b = the two subdivided edges (may coincide
//               for TBR+/PR+, giving a pair of parallel edges)
//   minus-moves edge = removed edge
struct Move {
  MoveKind kind = MoveKind::TBR0;
  EdgeId edge = -1;
  VertexId end = -1;
  EdgeId axis = -1;
  EdgeId target_a = -1;
  EdgeId target_b = -1;

  static Move tbr0(EdgeId e, EdgeId a, EdgeId b) { return Move{MoveKind::TBR0, e, -1, -1, a, b}; }
  static Move tbr0_end(EdgeId e, VertexId end, EdgeId a) { return Move{MoveKind::TBR0, e, end, -1, a, -1}; }
  static Move pr0(EdgeId e, VertexId end, EdgeId a) { return Move{MoveKind::PR0, e, end, -1, a, -1}; }
  static Move nni0(EdgeId axis, EdgeId f, VertexId u, EdgeId target) {
    return Move{MoveKind::NNI0, f, u, axis, target, -1};
  }
  static Move plus(Family f, EdgeId a, EdgeId b) { return Move{make_kind(f, Sign::Plus), -1, -1, -1, a, b}; }
  static Move minus(Family f, EdgeId e) { return Move{make_kind(f, Sign::Minus), e, -1, -1, -1, -1}; }

  friend bool operator==(const Move&, const Move&) = default;
};

inline std::string to_string(const Move& m) {
  std::ostringstream out;
  out << to_string(m.kind) << "(";
  switch (sign(m.kind)) {
    case Sign::Plus: out << "a=" << m.target_a << ",b=" << m.target_b; break;
    case Sign::Minus: out << "edge=" << m.edge; break;
    case Sign::Zero:
      if (m.kind == MoveKind::NNI0)
        out << "axis=" << m.axis << ",edge=" << m.edge << ",at=" << m.end << ",target=" << m.target_a;
      else if (m.end >= 0)
        out << "edge=" << m.edge << ",at=" << m.end << ",target=" << m.target_a;
      else
        out << "edge=" << m.edge << ",a=" << m.target_a << ",b=" << m.target_b;
      break;
  }
  out << ")";
  return out.str();
}

// Result of a successful application together with the bookkeeping needed to
// relate the two networks.
struct Applied {
  Network network;
  std::vector<EdgeId> edge_map;      // source edge -> result edge containing it; a moved edge maps to its new copy; -1 if removed
  std::vector<VertexId> vertex_map;  // source vertex -> result vertex, -1 if suppressed
  std::vector<EdgeId> origin;        // result edge -> source edge it lies in (-1 for an edge added by a plus-move)
  EdgeId added_edge = -1;            // edge created by the regraft or by the plus-move
  std::array<VertexId, 2> added_vertices{-1, -1};
  std::array<EdgeId, 2> merged{-1, -1};  // edges left where pruned/removed ends were suppressed
  Move inverse;
};

struct Attempt {
  std::optional<Applied> applied;
  ErrorKind error = ErrorKind::InvalidMove;
  std::string message;

  explicit operator bool() const { return applied.has_value(); }
};

namespace detail {

inline Attempt fail(ErrorKind k, std::string msg) {
  Attempt a;
  a.error = k;
  a.message = std::move(msg);
  return a;
}

inline bool in_triangle(const LabelledGraph& g, EdgeId e) {
  VertexId u = g.edge(e).u, v = g.edge(e).v;
  for (VertexId w : g.neighbours(u))
    if (w != u && w != v && g.multiplicity(w, v) > 0) return true;
  return false;
}

inline bool adjacent(const LabelledGraph& g, EdgeId a, EdgeId b) {
  const Edge &x = g.edge(a), &y = g.edge(b);
  return a != b && (x.touches(y.u) || x.touches(y.v));
}

class MoveApplier {
 public:
  MoveApplier(const Network& n, const Move& m) : n_(n), g_(n.graph()), m_(m), ws_(g_) {}

  Attempt run() {
    const int E = g_.edge_count();
    auto valid_edge = [&](EdgeId e) { return e >= 0 && e < E; };
    auto valid_vertex = [&](VertexId v) { return v >= 0 && v < g_.vertex_count(); };
    switch (sign(m_.kind)) {
      case Sign::Plus: {
        if (!valid_edge(m_.target_a) || !valid_edge(m_.target_b))
          return fail(ErrorKind::InvalidMove, "subdivision edge out of range");
        if (m_.kind == MoveKind::NNIplus && !adjacent(g_, m_.target_a, m_.target_b))
          return fail(ErrorKind::NotAdjacent, "NNI+ needs two distinct adjacent edges");
        auto s1 = ws_.subdivide(m_.target_a);
        auto s2 = ws_.subdivide(m_.target_b);  // same id again splits the piece at the old u end
        added_vertices_ = {s1.vertex, s2.vertex};
        added_ = ws_.add_edge(s1.vertex, s2.vertex);
        return finish();
      }
      case Sign::Minus: {
        if (!valid_edge(m_.edge)) return fail(ErrorKind::InvalidMove, "edge out of range");
        if (m_.kind == MoveKind::NNIminus && !in_triangle(g_, m_.edge))
          return fail(ErrorKind::NotATriangle, "edge " + std::to_string(m_.edge) + " is not in a triangle");
        const Edge e = g_.edge(m_.edge);
        ws_.remove_edge(m_.edge);
        if (!suppress_end(e.u, 0) || !suppress_end(e.v, 1))
          return fail(ErrorKind::WouldCreateLoop, "removing the edge leaves a loop");
        return finish();
      }
      case Sign::Zero: break;
    }
    if (!valid_edge(m_.edge)) return fail(ErrorKind::InvalidMove, "edge out of range");
    const Edge e = g_.edge(m_.edge);
    if (m_.kind == MoveKind::NNI0) {
      if (!valid_edge(m_.axis) || !valid_vertex(m_.end) || !valid_edge(m_.target_a))
        return fail(ErrorKind::InvalidMove, "payload out of range");
      const Edge ax = g_.edge(m_.axis);
      if (g_.is_labelled(ax.u) || g_.is_labelled(ax.v))
        return fail(ErrorKind::InvalidMove, "NNI axis must be an internal edge");
      if (!ax.touches(m_.end) || !e.touches(m_.end) || m_.edge == m_.axis)
        return fail(ErrorKind::InvalidMove, "pruned edge must share the prune vertex with the axis");
      VertexId v = ax.other(m_.end);
      if (m_.target_a == m_.axis || m_.target_a == m_.edge || !g_.edge(m_.target_a).touches(v))
        return fail(ErrorKind::InvalidMove, "NNI target must be another edge at the far end of the axis");
      return one_end(m_.edge, m_.end, m_.target_a);
    }
    if (m_.kind == MoveKind::PR0 || m_.end >= 0) {
      if (!valid_vertex(m_.end) || !valid_edge(m_.target_a))
        return fail(ErrorKind::InvalidMove, "payload out of range");
      if (!e.touches(m_.end)) return fail(ErrorKind::InvalidMove, "pruned end is not an endpoint of the edge");
      if (g_.is_labelled(m_.end)) return fail(ErrorKind::InvalidMove, "cannot prune an edge at a leaf");
      if (m_.target_a == m_.edge) return fail(ErrorKind::InvalidMove, "cannot regraft onto the moved edge");
      return one_end(m_.edge, m_.end, m_.target_a);
    }
    // TBR0 moving both ends of an internal edge.
    if (g_.is_labelled(e.u) || g_.is_labelled(e.v))
      return fail(ErrorKind::InvalidMove, "external edges move only at their non-leaf end");
    if (!valid_edge(m_.target_a) || !valid_edge(m_.target_b) || m_.target_a == m_.edge || m_.target_b == m_.edge)
      return fail(ErrorKind::InvalidMove, "regraft targets must be other edges");
    ws_.remove_edge(m_.edge);
    if (!suppress_end(e.u, 0) || !suppress_end(e.v, 1))
      return fail(ErrorKind::WouldCreateLoop, "pruning leaves a loop");
    EdgeId ra = ws_.resolve(m_.target_a), rb = ws_.resolve(m_.target_b);
    auto s1 = ws_.subdivide(ra);
    auto s2 = ws_.subdivide(rb);
    added_vertices_ = {s1.vertex, s2.vertex};
    added_ = ws_.add_edge(s1.vertex, s2.vertex);
    return finish();
  }

 private:
  bool suppress_end(VertexId v, int slot) {
    auto r = ws_.suppress_if_degree_two(v);
    if (!r) return false;
    merged_ws_[slot] = *r;
    return true;
  }

  Attempt one_end(EdgeId moved, VertexId at, EdgeId target) {
    VertexId stay = g_.edge(moved).other(at);
    ws_.remove_edge(moved);
    if (!suppress_end(at, 0)) return fail(ErrorKind::WouldCreateLoop, "pruning leaves a loop");
    auto s = ws_.subdivide(ws_.resolve(target));
    added_vertices_ = {s.vertex, -1};
    pieces_ = {s.kept, s.piece};
    added_ = ws_.add_edge(s.vertex, stay);
    return finish();
  }

  Attempt finish() {
    auto c = ws_.compact();
    if (auto v = find_violation(c.graph)) {
      switch (v->kind) {
        case ErrorKind::Improper: return fail(ErrorKind::WouldBeImproper, v->message);
        case ErrorKind::Loop: return fail(ErrorKind::WouldCreateLoop, v->message);
        default: return fail(ErrorKind::WouldDisconnect, v->message);
      }
    }
    Applied out;
    const Sign s = sign(m_.kind);
    const Family f = family(m_.kind);
    out.edge_map = c.edge_map;
    out.vertex_map.assign(c.vertex_map.begin(), c.vertex_map.begin() + g_.vertex_count());
    out.origin = c.origin;
    auto ws_new = [&](EdgeId e) { return e < 0 ? -1 : c.workspace_to_new[ws_.resolve(e)]; };
    out.added_edge = added_ < 0 ? -1 : c.workspace_to_new[added_];
    for (int i = 0; i < 2; ++i) {
      out.added_vertices[i] = added_vertices_[i] < 0 ? -1 : c.vertex_map[added_vertices_[i]];
      out.merged[i] = merged_ws_[i] < 0 ? -1 : ws_new(merged_ws_[i]);
    }
    if (s == Sign::Zero) {
      out.origin[out.added_edge] = m_.edge;
      out.edge_map[m_.edge] = out.added_edge;
    }
    if (s == Sign::Plus) {
      out.inverse = Move::minus(f, out.added_edge);
    } else if (s == Sign::Minus) {
      out.inverse = Move::plus(f, out.merged[0], out.merged[1]);
    } else if (m_.kind == MoveKind::NNI0) {
      VertexId v = out.vertex_map[g_.edge(m_.axis).other(m_.end)];
      EdgeId axis = c.workspace_to_new[pieces_[0]];
      if (!c.graph.edge(axis).touches(v)) axis = c.workspace_to_new[pieces_[1]];
      out.inverse = Move::nni0(axis, out.added_edge, out.added_vertices[0], out.merged[0]);
    } else if (m_.kind == MoveKind::PR0 || m_.end >= 0) {
      out.inverse = Move{m_.kind, out.added_edge, out.added_vertices[0], -1, out.merged[0], -1};
    } else {
      out.inverse = Move::tbr0(out.added_edge, out.merged[0], out.merged[1]);
    }
    out.network = Network::trusted(std::move(c.graph));
    Attempt a;
    a.applied = std::move(out);
    return a;
  }

  const Network& n_;
  const LabelledGraph& g_;
  Move m_;
  Workspace ws_;
  EdgeId added_ = -1;
  std::array<VertexId, 2> added_vertices_{-1, -1};
  std::array<EdgeId, 2> merged_ws_{-1, -1};
  std::array<EdgeId, 2> pieces_{-1, -1};
};

}  // namespace detail

// Non-throwing application.
inline Attempt try_apply(const Network& n, const Move& m) { return detail::MoveApplier(n, m).run(); }

inline Applied apply_tracked(const Network& n, const Move& m) {
  Attempt a = try_apply(n, m);
  if (!a) throw Error(a.error, to_string(m) + ": " + a.message);
  return std::move(*a.applied);
}

inline Network apply(const Network& n, const Move& m) { return apply_tracked(n, m).network; }

// A move on apply(n, m) that leads back to (a network isomorphic to) n.
inline Move invert(const Network& n, const Move& m, const Network& /*result*/) {
  return apply_tracked(n, m).inverse;
}

// The same move expressed on an isomorphic copy.
inline Move translate(const Move& m, const Isomorphism& iso) {
  auto e = [&](EdgeId x) { return x < 0 ? -1 : iso.edge[x]; };
  auto v = [&](VertexId x) { return x < 0 ? -1 : iso.vertex[x]; };
  return Move{m.kind, e(m.edge), v(m.end), e(m.axis), e(m.target_a), e(m.target_b)};
}

// ---------------------------------------------------------------------------
// Kind sets and exhaustive payload enumeration.

using KindSet = unsigned;

constexpr KindSet kind_bit(MoveKind k) { return 1u << static_cast<unsigned>(k); }

namespace kinds {
constexpr KindSet nni0 = kind_bit(MoveKind::NNI0);
constexpr KindSet nni = nni0 | kind_bit(MoveKind::NNIplus) | kind_bit(MoveKind::NNIminus);
constexpr KindSet pr0 = kind_bit(MoveKind::PR0);
constexpr KindSet pr = pr0 | kind_bit(MoveKind::PRplus) | kind_bit(MoveKind::PRminus);
constexpr KindSet tbr0 = kind_bit(MoveKind::TBR0);
constexpr KindSet tbr = tbr0 | kind_bit(MoveKind::TBRplus) | kind_bit(MoveKind::TBRminus);
constexpr KindSet tbr_plus = kind_bit(MoveKind::TBRplus);
constexpr KindSet tbr_minus = kind_bit(MoveKind::TBRminus);
}  // namespace kinds

inline bool contains(KindSet s, MoveKind k) { return (s & kind_bit(k)) != 0; }

// Accepts comma-separated names: tbr, pr, nni (all three signs) or a single
// kind such as tbr0, tbr+, tbrplus, nni-, PR0.
inline KindSet parse_kind_set(const std::string& text) {
  KindSet out = 0;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::string t;
    for (char c : item)
      if (c != ' ') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    Family f;
    std::string rest;
    if (t.rfind("tbr", 0) == 0) f = Family::TBR, rest = t.substr(3);
    else if (t.rfind("nni", 0) == 0) f = Family::NNI, rest = t.substr(3);
    else if (t.rfind("pr", 0) == 0) f = Family::PR, rest = t.substr(2);
    else throw Error(ErrorKind::InvalidParameter, "unknown move kind '" + item + "'");
    if (rest.empty()) {
      for (Sign s : {Sign::Zero, Sign::Plus, Sign::Minus}) out |= kind_bit(make_kind(f, s));
    } else if (rest == "0" || rest == "zero") {
      out |= kind_bit(make_kind(f, Sign::Zero));
    } else if (rest == "+" || rest == "plus") {
      out |= kind_bit(make_kind(f, Sign::Plus));
    } else if (rest == "-" || rest == "minus") {
      out |= kind_bit(make_kind(f, Sign::Minus));
    } else {
      throw Error(ErrorKind::InvalidParameter, "unknown move kind '" + item + "'");
    }
  }
  return out;
}

// Every syntactically valid payload of the requested kinds (results may still
// be rejected by apply).
inline std::vector<Move> enumerate_moves(const Network& n, KindSet ks) {
  const auto& g = n.graph();
  const int E = g.edge_count();
  std::vector<Move> out;
  auto internal = [&](EdgeId e) { return !n.is_external(e); };
  for (Family f : {Family::NNI, Family::PR, Family::TBR}) {
    if (contains(ks, make_kind(f, Sign::Plus)))
      for (EdgeId a = 0; a < E; ++a)
        for (EdgeId b = a; b < E; ++b)
          if (f != Family::NNI || detail::adjacent(g, a, b)) out.push_back(Move::plus(f, a, b));
    if (contains(ks, make_kind(f, Sign::Minus)))
      for (EdgeId e = 0; e < E; ++e)
        if (f != Family::NNI || detail::in_triangle(g, e)) out.push_back(Move::minus(f, e));
  }
  if (contains(ks, MoveKind::NNI0))
    for (EdgeId axis = 0; axis < E; ++axis) {
      if (!internal(axis)) continue;
      for (VertexId u : {g.edge(axis).u, g.edge(axis).v}) {
        VertexId v = g.edge(axis).other(u);
        for (EdgeId f : g.incident(u)) {
          if (f == axis) continue;
          for (EdgeId t : g.incident(v))
            if (t != axis && t != f) out.push_back(Move::nni0(axis, f, u, t));
        }
      }
    }
  for (MoveKind k : {MoveKind::PR0, MoveKind::TBR0}) {
    if (!contains(ks, k)) continue;
    for (EdgeId e = 0; e < E; ++e)
      for (VertexId at : {g.edge(e).u, g.edge(e).v}) {
        if (g.is_labelled(at)) continue;
        for (EdgeId a = 0; a < E; ++a)
          if (a != e) out.push_back(Move{k, e, at, -1, a, -1});
      }
  }
  if (contains(ks, MoveKind::TBR0))
    for (EdgeId e = 0; e < E; ++e) {
      if (!internal(e)) continue;
      for (EdgeId a = 0; a < E; ++a)
        for (EdgeId b = a; b < E; ++b)
          if (a != e && b != e) out.push_back(Move::tbr0(e, a, b));
    }
  return out;
}

struct Neighbor {
  Network network;
  Move witness;
};

using Neighborhood = std::map<CanonicalKey, Neighbor>;

// Isomorphism classes one move away (identity class excluded). The witness
// is the first successful payload in enumeration order.
inline Neighborhood neighbors(const Network& n, KindSet ks) {
  const CanonicalKey self = canonical_key(n);
  Neighborhood out;
  for (const Move& m : enumerate_moves(n, ks)) {
    Attempt a = try_apply(n, m);
    if (!a) continue;
    CanonicalKey k = canonical_key(a.applied->network);
    if (k == self) continue;
    out.try_emplace(std::move(k), Neighbor{std::move(a.applied->network), m});
  }
  return out;
}

// A start network plus moves; `networks()` replays it.
struct MoveSequence {
  Network start;
  std::vector<Move> moves;

  std::vector<Network> networks() const {
    std::vector<Network> out{start};
    for (const Move& m : moves) out.push_back(apply(out.back(), m));
    return out;
  }
  Network end() const { return networks().back(); }
  std::size_t size() const { return moves.size(); }
};

}  // namespace phylonet
