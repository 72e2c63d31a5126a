#pragma once

#include <string>

#include "json.hpp"
#include "phylonet/canonical.hpp"
#include "phylonet/caterpillar.hpp"
#include "phylonet/errors.hpp"
#include "phylonet/fixtures.hpp"
#include "phylonet/moves.hpp"
#include "phylonet/reduce.hpp"
#include "phylonet/rewrite.hpp"
#include "phylonet/search.hpp"

namespace phylonet::json_io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Payload fields that are -1 are left out.
inline json to_json(const Move& m) {
  json j{{"kind", to_string(m.kind)}};
  auto put = [&](const char* name, int v) {
    if (v >= 0) j[name] = v;
  };
  put("edge", m.edge);
  put("end", m.end);
  put("axis", m.axis);
  put("target_a", m.target_a);
  put("target_b", m.target_b);
  return j;
}

inline Move move_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorKind::SyntaxError, "a move needs a string field 'kind'");
  Move m;
  m.kind = move_kind_from_string(j["kind"].get<std::string>());
  auto get = [&](const char* name) -> int {
    if (!j.contains(name)) return -1;
    if (!j[name].is_number_integer()) throw Error(ErrorKind::SyntaxError, std::string("move field '") + name + "' must be an integer");
    return j[name].get<int>();
  };
  m.edge = get("edge");
  m.end = get("end");
  m.axis = get("axis");
  m.target_a = get("target_a");
  m.target_b = get("target_b");
  return m;
}

inline Move parse_move(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SyntaxError, std::string("bad move JSON: ") + e.what());
  }
  return move_from_json(j);
}

// The graph in its own vertex and edge ids, which move payloads refer to.
inline json graph_json(const LabelledGraph& g) {
  json leaves = json::object(), edges = json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.is_labelled(v)) leaves[std::to_string(v)] = g.label(v);
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return json{{"vertices", g.vertex_count()}, {"leaves", leaves}, {"edges", edges}};
}

inline json to_json(const MoveSequence& s) {
  json moves = json::array(), keys = json::array();
  for (const Move& m : s.moves) moves.push_back(to_json(m));
  for (const Network& n : s.networks()) keys.push_back(canonical_key(n).hex());
  return json{{"length", s.size()}, {"start", graph_json(s.start.graph())}, {"moves", moves}, {"keys", keys}};
}

inline json to_json(const RewriteReport& r) {
  return json{{"n", r.n},       {"r", r.r},         {"bound", r.bound},
              {"tags", r.tags}, {"input", to_json(r.input)}, {"output", to_json(r.output)}};
}

inline json to_json(const CaterpillarResult& c) {
  json stages = json::array();
  for (const auto& s : c.stages) stages.push_back({{"name", s.name}, {"moves", s.moves}, {"budget", s.budget}});
  return json{{"length", c.sequence.size()},
              {"budget", c.budget},
              {"within_budget", c.within_budget()},
              {"base_tree", canonical_key(c.base).hex()},
              {"stages", stages},
              {"sequence", to_json(c.sequence)}};
}

inline json to_json(const DistanceResult& d) {
  json j{{"reachable", d.reachable()}};
  j["distance"] = d.distance ? json(*d.distance) : json(nullptr);
  j["max_depth"] = d.max_depth;
  j["tier_cap"] = d.tier_cap;
  j["explored"] = d.explored;
  j["witness"] = to_json(d.witness);
  return j;
}

inline json to_json(const FigureReport& r) {
  json claims = json::array(), values = json::object(), seqs = json::array();
  for (const auto& c : r.claims) claims.push_back({{"name", c.name}, {"holds", c.holds}});
  for (const auto& [k, v] : r.values) values[k] = v;
  for (const auto& s : r.sequences) seqs.push_back(to_json(s));
  return json{{"id", r.id}, {"ok", r.ok()}, {"claims", claims}, {"values", values}, {"sequences", seqs}};
}

inline json to_json(const AgreementForest& f) {
  return json{{"size", f.size()}, {"components", f.components}};
}

// Top-level envelope for every --json output.
inline json envelope(const std::string& command, json body) {
  json j{{"schema", kSchemaVersion}, {"command", command}};
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

}  // namespace phylonet::json_io
