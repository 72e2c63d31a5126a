#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phylonet/phylonet.hpp"

using namespace phylonet;
using json_io::json;

namespace {

// Bad flag values detected after CLI11 parsing; reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool json = false;
  int threads = 1;
};

Globals g;

void emit(const std::string& command, const json& body, const std::string& human) {
  if (g.json) std::cout << json_io::envelope(command, body).dump(2) << "\n";
  else std::cout << human;
}

KindSet kinds_flag(const std::string& text) {
  try {
    return parse_kind_set(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// tier | all | tree-based | level:K | tier-range:LO..HI. `r` fills in plain "tier".
ClassConstraint class_flag(const std::string& text, int r) {
  try {
    if (text == "tier") return ClassConstraint::tier(r);
    if (text == "all") return ClassConstraint::all();
    if (text == "tree-based") return ClassConstraint::tree_based();
    if (text.rfind("level:", 0) == 0) return ClassConstraint::level_at_most(std::stoi(text.substr(6)));
    if (text.rfind("tier:", 0) == 0) return ClassConstraint::tier(std::stoi(text.substr(5)));
    if (text.rfind("tier-range:", 0) == 0) {
      const std::string rest = text.substr(11);
      const auto dots = rest.find("..");
      if (dots != std::string::npos)
        return ClassConstraint::tier_range(std::stoi(rest.substr(0, dots)), std::stoi(rest.substr(dots + 2)));
    }
  } catch (const std::logic_error&) {
  }
  throw UsageError("unknown class '" + text + "'");
}

LabelledGraph load_relaxed(const std::string& path) { return validate_relaxed(parse_graph(read_file(path))); }

std::string write_upnf(const std::string& path, const Network& n) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::SyntaxError, "cannot write " + path);
  out << serialize(n);
  return path;
}

std::vector<Move> moves_flag(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SyntaxError, std::string("bad --move JSON: ") + e.what());
  }
  std::vector<Move> out;
  if (j.is_array())
    for (const auto& x : j) out.push_back(json_io::move_from_json(x));
  else
    out.push_back(json_io::move_from_json(j));
  return out;
}

std::string moves_text(const MoveSequence& s) {
  std::string out;
  for (const Move& m : s.moves) out += to_string(m) + "\n";
  return out;
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

// ---------------------------------------------------------------------------

void cmd_validate(const std::string& file) {
  Network n = load(file);
  emit("validate", {{"valid", true}, {"n", n.leaf_count()}, {"r", n.reticulation_number()}},
       "valid: n=" + std::to_string(n.leaf_count()) + " r=" + std::to_string(n.reticulation_number()) + "\n");
}

void cmd_canon(const std::string& file) {
  const std::string key = canonical_key(load(file)).hex();
  emit("canon", {{"key", key}}, key + "\n");
}

void cmd_neighbors(const std::string& file, const std::string& kind) {
  const KindSet ks = kinds_flag(kind);
  Network n = load(file);
  json list = json::array();
  std::string human;
  for (const auto& [k, nb] : neighbors(n, ks)) {
    list.push_back({{"key", k.hex()}, {"r", nb.network.reticulation_number()}, {"move", json_io::to_json(nb.witness)}});
    human += k.hex() + " " + to_string(nb.witness) + "\n";
  }
  emit("neighbors", {{"count", list.size()}, {"neighbors", list}}, human);
}

void cmd_stats(const std::string& file) {
  Network n = load(file);
  json bl = json::array();
  std::vector<std::string> sizes;
  for (const Blob& b : blobs(n)) {
    bl.push_back({{"vertices", b.vertices.size()}, {"edges", b.edges.size()}, {"level", b.cyclomatic}});
    sizes.push_back(std::to_string(b.vertices.size()) + "v/" + std::to_string(b.edges.size()) + "e/level " +
                    std::to_string(b.cyclomatic));
  }
  const bool tb = is_tree_based(n);
  json body{{"n", n.leaf_count()},   {"r", n.reticulation_number()}, {"level", level(n)},
            {"tree_based", tb},      {"blobs", bl}};
  std::ostringstream h;
  h << "n: " << n.leaf_count() << "\nr: " << n.reticulation_number() << "\nlevel: " << level(n)
    << "\ntree-based: " << (tb ? "yes" : "no") << "\nblobs: " << (sizes.empty() ? "none" : join(sizes, ", ")) << "\n";
  emit("stats", body, h.str());
}

void cmd_displayed(const std::string& file) {
  Network n = load(file);
  json list = json::array();
  std::string human;
  for (const auto& [k, t] : displayed_trees(n)) {
    list.push_back({{"key", k.hex()}, {"upnf", serialize(t)}});
    human += "# " + k.hex() + "\n" + serialize(t);
  }
  emit("displayed-trees", {{"count", list.size()}, {"trees", list}}, human);
}

void cmd_gadget_caterpillar(int n, int r) {
  Network c = make_sorted_handcuffed_caterpillar(n, r);
  emit("gadget", {{"upnf", serialize(c)}}, serialize(c));
}

void cmd_gadget_handcuff(const std::string& base, int a, int b, int r) {
  Network h = make_handcuffed(load(base), a, b, r);
  emit("gadget", {{"upnf", serialize(h)}}, serialize(h));
}

void cmd_canonical_display(const std::vector<std::string>& files, int n) {
  std::vector<Network> parts;
  for (const auto& f : files) parts.push_back(Network::on_subset(parse_graph(read_file(f))));
  Network out = canonical_display_network(parts, n);
  emit("canonical-display", {{"upnf", serialize(out)}}, serialize(out));
}

void cmd_rewrite(const std::string& what, const std::string& file, const std::string& move_text) {
  Network n = load(file);
  if (what == "caterpillar") {
    CaterpillarResult c = to_sorted_caterpillar(n);
    std::ostringstream h;
    h << moves_text(c.sequence) << "length: " << c.sequence.size() << " (budget " << c.budget << ")\n";
    for (const auto& s : c.stages) h << "stage " << s.name << ": " << s.moves << " / " << s.budget << "\n";
    emit("rewrite", {{"rewrite", what}, {"result", json_io::to_json(c)}}, h.str());
    return;
  }
  if (move_text.empty()) throw UsageError("rewrite " + what + " needs --move");
  const std::vector<Move> ms = moves_flag(move_text);
  const MoveSequence seq{n, ms};
  auto single = [&]() -> const Move& {
    if (ms.size() != 1) throw UsageError("rewrite " + what + " takes a single move");
    return ms.front();
  };
  RewriteReport rep;
  if (what == "tbr0-to-pr") rep = tbr0_to_pr(n, single());
  else if (what == "pr0-to-nni") rep = pr0_to_nni(n, single());
  else if (what == "prminus-to-nni") rep = prminus_to_nni(n, single());
  else if (what == "normalize") rep = normalize_order(seq);
  else if (what == "merge-plus-minus") rep = merge_plus_minus(seq);
  else if (what == "swap-zero-plus") rep = swap_zero_plus(seq);
  else if (what == "swap-plus-zero-for-tree") rep = swap_plus_zero_for_tree(seq);
  else throw UsageError("unknown rewrite '" + what + "'");
  std::ostringstream h;
  h << moves_text(rep.output) << "length: " << rep.output.size();
  if (rep.bound >= 0) h << " (bound " << rep.bound << ")";
  h << "\ntags: " << join(rep.tags, ", ") << "\n";
  emit("rewrite", {{"rewrite", what}, {"report", json_io::to_json(rep)}}, h.str());
}

void cmd_distance(const std::string& fa, const std::string& fb, const std::string& kind, const std::string& cls,
                  int max_depth, int tier_cap) {
  const KindSet ks = kinds_flag(kind);
  Network a = load(fa), b = load(fb);
  const ClassConstraint c = class_flag(cls, a.reticulation_number());
  SearchOptions opt;
  opt.max_depth = max_depth;
  if (tier_cap >= 0) opt.tier_cap = tier_cap;
  opt.threads = g.threads;
  DistanceResult d = bfs_distance(a, b, ks, c, opt);
  std::ostringstream h;
  if (d.reachable()) h << "distance: " << *d.distance << "\n" << moves_text(d.witness);
  else h << "unreachable (max depth " << d.max_depth << ", tier cap " << d.tier_cap << ")\n";
  emit("distance", {{"kind", kind}, {"class", c.describe()}, {"result", json_io::to_json(d)}}, h.str());
}

void cmd_space(int n, int r, const std::string& kind, const std::string& cls, const std::string& report) {
  const KindSet ks = kinds_flag(kind);
  const ClassConstraint c = class_flag(cls, r);
  SpaceOptions opt;
  opt.r_max = r;
  opt.threads = g.threads;
  std::vector<std::string> items;
  std::stringstream ss(report);
  for (std::string it; std::getline(ss, it, ',');) {
    if (it != "nodes" && it != "diameter" && it != "degree-histogram" && it != "components")
      throw UsageError("unknown report item '" + it + "'");
    items.push_back(it);
  }
  SpaceGraph sp = enumerate_space(n, c, ks, opt);
  json body{{"n", n}, {"class", c.describe()}, {"kind", kind}};
  std::ostringstream h;
  for (const auto& it : items) {
    if (it == "nodes") {
      body["nodes"] = sp.size();
      h << "nodes: " << sp.size() << "\n";
    } else if (it == "components") {
      const auto comps = space_components(sp);
      body["components"] = comps.size();
      h << "components: " << comps.size() << "\n";
    } else if (it == "diameter") {
      const int d = diameter(sp, g.threads);
      body["diameter"] = d;
      h << "diameter: " << d << "\n";
    } else {
      json hist = json::object();
      h << "degree-histogram:";
      for (auto [deg, count] : degree_histogram(sp)) {
        hist[std::to_string(deg)] = count;
        h << " " << deg << ":" << count;
      }
      body["degree_histogram"] = hist;
      h << "\n";
    }
  }
  emit("space", body, h.str());
}

int cmd_verify(const std::string& id, bool quick) {
  bool known = false;
  for (const auto& f : fixtures()) known |= f.id == id;
  if (!known) throw UsageError("unknown figure '" + id + "'");
  FigureOptions opt;
  opt.full = !quick;
  opt.threads = g.threads;
  FigureReport rep = check_figure(id, opt);
  std::ostringstream h;
  for (const auto& c : rep.claims) h << (c.holds ? "ok   " : "FAIL ") << c.name << "\n";
  for (const auto& [k, v] : rep.values) h << k << " = " << v << "\n";
  emit("verify", json_io::to_json(rep), h.str());
  if (const Claim* c = rep.first_failure()) {
    std::cerr << Error(ErrorKind::FixtureFailed, id + ": " + c->name).what() << "\n";
    return 1;
  }
  return 0;
}

void cmd_reduce_handcuff(const std::string& f1, const std::string& f2, int r, const std::string& prefix) {
  auto [n1, n2] = handcuff_reduction(load(f1), load(f2), r);
  const std::string p1 = write_upnf(prefix + "-1.upn", n1), p2 = write_upnf(prefix + "-2.upn", n2);
  emit("reduce", {{"reduction", "handcuff"}, {"r", r}, {"outputs", {p1, p2}}}, p1 + "\n" + p2 + "\n");
}

void cmd_reduce_utc(const std::string& fm, const std::string& ft, const std::string& prefix) {
  UtcInstance inst = utc_to_pr_reduction(load_relaxed(fm), load(ft));
  const std::string pn = write_upnf(prefix + "-network.upn", inst.network);
  const std::string pt = write_upnf(prefix + "-tree.upn", inst.tree);
  emit("reduce", {{"reduction", "utc"}, {"r", inst.r}, {"outputs", {pn, pt}}},
       pn + "\n" + pt + "\nr: " + std::to_string(inst.r) + "\n");
}

void cmd_tree_distance(const std::string& f1, const std::string& f2) {
  AgreementForest f = maximum_agreement_forest(load(f1), load(f2));
  emit("tree-distance", {{"distance", f.size() - 1}, {"forest", json_io::to_json(f)}},
       std::to_string(f.size() - 1) + "\n");
}

void cmd_fixtures(const std::string& only) {
  json list = json::array();
  std::string human;
  bool any = false;
  for (const auto& f : fixtures()) {
    if (!only.empty() && f.id != only) continue;
    any = true;
    json nets = json::object();
    human += "# fixture " + f.id + ": " + f.summary + "\n";
    for (const auto& [name, graph] : f.networks) {
      nets[name] = serialize(graph);
      human += "## " + name + "\n" + serialize(graph);
    }
    list.push_back({{"id", f.id}, {"summary", f.summary}, {"networks", nets}});
  }
  if (!any) throw UsageError("unknown fixture '" + only + "'");
  emit("fixtures", {{"fixtures", list}}, human);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unrooted phylogenetic networks: validation, rearrangement moves, distances and reductions"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", g.json, "Emit versioned JSON");
  app.add_option("--threads", g.threads, "Worker threads for searches")->check(CLI::PositiveNumber);

  std::function<int()> run;
  auto act = [&](CLI::App* sub, std::function<void()> fn) {
    sub->callback([&run, fn] { run = [fn] { fn(); return 0; }; });
  };

  std::string file, file2, kind = "tbr", cls = "tier", move, prefix, report = "nodes", id, which;
  std::vector<std::string> files;
  int n = 0, r = 0, a = 0, b = 0, max_depth = -1, tier_cap = -1, display_n = 0;
  bool quick = false;

  auto* v = app.add_subcommand("validate", "Check that a UPNF file is a proper network");
  v->add_option("FILE", file)->required();
  act(v, [&] { cmd_validate(file); });

  auto* c = app.add_subcommand("canon", "Print the canonical key in hex");
  c->add_option("FILE", file)->required();
  act(c, [&] { cmd_canon(file); });

  auto* nb = app.add_subcommand("neighbors", "Classes one move away, with a witness move each");
  nb->add_option("FILE", file)->required();
  nb->add_option("--kind", kind, "Move kinds, e.g. tbr0, tbr, pr, nni, nni0,nni+");
  act(nb, [&] { cmd_neighbors(file, kind); });

  auto* st = app.add_subcommand("stats", "Leaves, reticulation number, level, tree-basedness, blobs");
  st->add_option("FILE", file)->required();
  act(st, [&] { cmd_stats(file); });

  auto* dt = app.add_subcommand("displayed-trees", "Trees displayed by a network");
  dt->add_option("FILE", file)->required();
  act(dt, [&] { cmd_displayed(file); });

  auto* gd = app.add_subcommand("gadget", "Build gadget networks");
  gd->require_subcommand(1);
  auto* gc = gd->add_subcommand("caterpillar", "Sorted handcuffed caterpillar");
  gc->add_option("--n", n)->required();
  gc->add_option("--r", r)->required();
  act(gc, [&] { cmd_gadget_caterpillar(n, r); });
  auto* gh = gd->add_subcommand("handcuff", "Handcuff two leaves of a base network");
  gh->add_option("BASE", file)->required();
  gh->add_option("--a", a)->required();
  gh->add_option("--b", b)->required();
  gh->add_option("--r", r)->required();
  act(gh, [&] { cmd_gadget_handcuff(file, a, b, r); });

  auto* cd = app.add_subcommand("canonical-display", "Smallest canonical network displaying all given parts");
  cd->add_option("PARTS", files)->required();
  cd->add_option("--n", display_n, "Leaf count (default: largest label)");
  act(cd, [&] { cmd_canonical_display(files, display_n); });

  auto* rw = app.add_subcommand("rewrite", "Rewrite a move or sequence into another move family");
  rw->add_option("WHAT", which,
                 "tbr0-to-pr | pr0-to-nni | prminus-to-nni | normalize | merge-plus-minus | swap-zero-plus | "
                 "swap-plus-zero-for-tree | caterpillar")
      ->required();
  rw->add_option("FILE", file)->required();
  rw->add_option("--move", move, "A move as a JSON object, or a JSON array of moves");
  act(rw, [&] { cmd_rewrite(which, file, move); });

  auto* ds = app.add_subcommand("distance", "Exact distance by breadth-first search");
  ds->add_option("A", file)->required();
  ds->add_option("B", file2)->required();
  ds->add_option("--kind", kind);
  ds->add_option("--class", cls, "tier | all | tree-based | level:K | tier:R | tier-range:LO..HI");
  ds->add_option("--max-depth", max_depth);
  ds->add_option("--tier-cap", tier_cap);
  act(ds, [&] { cmd_distance(file, file2, kind, cls, max_depth, tier_cap); });

  auto* sp = app.add_subcommand("space", "Enumerate a space of networks");
  sp->add_option("--n", n)->required();
  sp->add_option("--r", r)->required();
  sp->add_option("--kind", kind);
  sp->add_option("--class", cls, "tier (tier r) | all | tree-based | level:K (tiers 0..r)");
  sp->add_option("--report", report, "Comma-separated: nodes, components, diameter, degree-histogram");
  act(sp, [&] { cmd_space(n, r, kind, cls, report); });

  auto* vf = app.add_subcommand("verify", "Check the claims attached to a built-in figure fixture");
  vf->add_option("FIGURE", id)->required();
  vf->add_flag("--quick", quick, "Skip checks that need whole neighbourhoods of large networks");
  vf->callback([&] { run = [&] { return cmd_verify(id, quick); }; });

  auto* rd = app.add_subcommand("reduce", "Hardness reduction gadgets");
  rd->require_subcommand(1);
  auto* rh = rd->add_subcommand("handcuff", "Two trees to two handcuffed networks");
  rh->add_option("T1", file)->required();
  rh->add_option("T2", file2)->required();
  rh->add_option("--r", r)->required();
  rh->add_option("--out-prefix", prefix)->required();
  act(rh, [&] { cmd_reduce_handcuff(file, file2, r, prefix); });
  auto* ru = rd->add_subcommand("utc", "Possibly improper network and tree to a PR-distance instance");
  ru->add_option("M", file)->required();
  ru->add_option("T", file2)->required();
  ru->add_option("--out-prefix", prefix)->required();
  act(ru, [&] { cmd_reduce_utc(file, file2, prefix); });

  auto* td = app.add_subcommand("tree-distance", "TBR distance of two trees via a maximum agreement forest");
  td->add_option("T1", file)->required();
  td->add_option("T2", file2)->required();
  act(td, [&] { cmd_tree_distance(file, file2); });

  auto* fx = app.add_subcommand("fixtures", "Built-in figure networks");
  fx->require_subcommand(1);
  auto* fl = fx->add_subcommand("list", "Print every fixture in UPNF");
  act(fl, [&] { cmd_fixtures(""); });
  auto* fs = fx->add_subcommand("show", "Print one fixture in UPNF");
  fs->add_option("ID", id)->required();
  act(fs, [&] { cmd_fixtures(id); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return run ? run() : 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
