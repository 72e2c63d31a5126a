#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "phylonet/canonical.hpp"
#include "phylonet/network.hpp"
#include "phylonet/trees.hpp"
#include "phylonet/upnf.hpp"
#include "phylonet/workspace.hpp"

using namespace phylonet;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidMove;
}

Network star3() { return network_from_pairs({{0, 1}, {0, 2}, {0, 3}}, {{1, 1}, {2, 2}, {3, 3}}); }

}  // namespace

TEST(Validate, StarOnThreeLeavesIsATree) {
  Network s = star3();
  EXPECT_EQ(s.reticulation_number(), 0);
  EXPECT_TRUE(s.is_tree());
}

TEST(Validate, ReportsEachViolation) {
  EXPECT_EQ(kind_of([] { Network(LabelledGraph(3, {{0, 1}, {1, 1}, {1, 2}}, {1, 0, 2})); }), ErrorKind::Loop);
  EXPECT_EQ(kind_of([] { Network(LabelledGraph(2, {{0, 1}}, {1, 1})); }), ErrorKind::BadLabeling);
  EXPECT_EQ(kind_of([] { Network(LabelledGraph(2, {{0, 1}}, {1, 3})); }), ErrorKind::BadLabeling);
  EXPECT_EQ(kind_of([] { Network(LabelledGraph(1, {}, {1})); }), ErrorKind::BadLabeling);
  EXPECT_EQ(kind_of([] { Network(LabelledGraph(3, {{0, 1}, {1, 2}}, {1, 0, 2})); }), ErrorKind::BadDegree);
  EXPECT_EQ(kind_of([] { Network(LabelledGraph(4, {{0, 1}, {2, 3}}, {1, 2, 3, 4})); }), ErrorKind::Disconnected);
}

TEST(Validate, PendantBlobIsImproperWithWitness) {
  // Leaves 1,2 on c=3; x=4 carries leaf 3 and leads to a leafless blob {5,6,7}.
  LabelledGraph g(8, {{0, 3}, {1, 3}, {3, 4}, {4, 2}, {4, 5}, {5, 6}, {5, 7}, {6, 7}, {6, 7}},
                  {1, 2, 3, 0, 0, 0, 0, 0});
  try {
    Network n(g);
    FAIL() << "improper network accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Improper);
    EXPECT_EQ(e.witness(), 4);
  }
  EXPECT_FALSE(every_edge_on_leaf_path(g));
}

TEST(CutEdges, TreeHasOnlyCutEdges) {
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    Network t = random_tree(3 + i % 6, rng);
    EXPECT_EQ(cut_edges(t.graph()).size(), static_cast<std::size_t>(t.edge_count()));
  }
}

TEST(CutEdges, ParallelPairWithPendants) {
  LabelledGraph g(4, {{0, 2}, {2, 3}, {2, 3}, {3, 1}}, {1, 2, 0, 0});
  EXPECT_EQ(cut_edges(g), (std::vector<EdgeId>{0, 3}));
}

TEST(CutEdges, MatchesDeletionOracle) {
  std::mt19937 rng(11);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    auto g = oracle::random_cubic_multigraph(2 + i % 4, 2 * (1 + i % 4), rng);
    if (!is_connected(g)) continue;
    ++checked;
    EXPECT_EQ(cut_edges(g), oracle::cut_edges(g));
  }
  EXPECT_GT(checked, 100);
  EXPECT_THROW(cut_edges(LabelledGraph(4, {{0, 1}, {2, 3}}, {1, 2, 3, 4})), Error);
}

TEST(Properness, CutEdgeAndPathFormulationsAgree) {
  std::mt19937 rng(5);
  int proper = 0, improper = 0;
  for (int i = 0; i < 3000; ++i) {
    auto g = oracle::random_cubic_multigraph(2 + i % 3, 2 * (2 + i % 3) - (i % 3) % 2, rng);
    if (!is_connected(g)) continue;
    bool a = !improper_cut_edge(g).has_value();
    EXPECT_EQ(a, every_edge_on_leaf_path(g));
    (a ? proper : improper)++;
  }
  EXPECT_GT(proper, 20);
  EXPECT_GT(improper, 20);
}

TEST(Properness, RandomNetworksSatisfyCounts) {
  std::mt19937 rng(3);
  for (int i = 0; i < 60; ++i) {
    int n = 2 + i % 5, r = i % 4;
    Network net = random_network(n, r, rng);
    EXPECT_EQ(net.reticulation_number(), r);
    EXPECT_EQ(net.edge_count(), 2 * n + 3 * r - 3);
    EXPECT_EQ(net.vertex_count(), 2 * n + 2 * r - 2);
    EXPECT_EQ(net.is_tree(), r == 0);
    EXPECT_FALSE(find_violation(net.graph()).has_value());
  }
}

TEST(Suboperations, SubdivideThenSuppressRoundTrips) {
  std::mt19937 rng(2);
  for (int i = 0; i < 30; ++i) {
    Network n = random_network(4, i % 3, rng);
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
      LabelledGraph s = subdivide(n.graph(), e);
      EXPECT_EQ(s.vertex_count(), n.vertex_count() + 1);
      LabelledGraph back = suppress(s, s.vertex_count() - 1);
      EXPECT_TRUE(oracle::isomorphic(back, n.graph()));
    }
  }
}

TEST(Suboperations, SuppressOnParallelPairCreatesLoop) {
  LabelledGraph g(3, {{0, 1}, {1, 2}, {1, 2}}, {1, 0, 0});
  EXPECT_EQ(kind_of([&] { suppress(g, 2); }), ErrorKind::WouldCreateLoop);
}

TEST(Suboperations, SuppressNextToTriangleGivesParallelPair) {
  // Path a-v-b plus edge {a,b}.
  LabelledGraph g(3, {{0, 1}, {1, 2}, {0, 2}}, {0, 0, 0});
  LabelledGraph s = suppress(g, 1);
  EXPECT_EQ(s.vertex_count(), 2);
  EXPECT_EQ(s.multiplicity(0, 1), 2);
}

TEST(Canonical, InvariantUnderRenaming) {
  std::mt19937 rng(17);
  for (int i = 0; i < 100; ++i) {
    Network n = random_network(2 + i % 5, i % 4, rng);
    EXPECT_EQ(canonical_key(n), canonical_key(shuffled(n, rng)));
  }
}

TEST(Canonical, QuartetsAreDistinct) {
  auto a = tree_from_newick("((1,2),(3,4));");
  auto b = tree_from_newick("((1,3),(2,4));");
  auto c = tree_from_newick("((1,4),(2,3));");
  EXPECT_NE(canonical_key(a), canonical_key(b));
  EXPECT_NE(canonical_key(a), canonical_key(c));
  EXPECT_NE(canonical_key(b), canonical_key(c));
  EXPECT_FALSE(oracle::isomorphic(a.graph(), b.graph()));
  EXPECT_EQ(all_trees(4).size(), 3u);
}

TEST(Canonical, LabelSwapOnAsymmetricNetwork) {
  auto t = tree_from_newick("((1,2),3,(4,5));");
  auto s = tree_from_newick("((1,3),2,(4,5));");
  EXPECT_NE(canonical_key(t), canonical_key(s));
  auto u = tree_from_newick("((2,1),3,(5,4));");
  EXPECT_EQ(canonical_key(t), canonical_key(u));
}

TEST(Canonical, DistinguishesMultiplicity) {
  // Same underlying simple path 1-x-2, parallel pair on different sides.
  LabelledGraph a(3, {{0, 1}, {0, 1}, {1, 2}}, {1, 0, 2});
  LabelledGraph b(3, {{0, 1}, {1, 2}, {1, 2}}, {1, 0, 2});
  LabelledGraph c(3, {{1, 2}, {0, 1}, {2, 1}}, {1, 0, 2});
  EXPECT_NE(canonical_key(a), canonical_key(b));
  EXPECT_EQ(canonical_key(b), canonical_key(c));
  EXPECT_FALSE(oracle::isomorphic(a, b));
}

TEST(Canonical, AgreesWithBruteForceOnSmallNetworks) {
  std::mt19937 rng(23);
  int pairs = 0;
  for (int i = 0; i < 300; ++i) {
    int n = 2 + i % 4, r = i % 3;
    if (2 * n + 2 * r - 2 > 12) continue;
    Network a = random_network(n, r, rng);
    Network b = (i % 3 == 0) ? shuffled(a, rng) : random_network(n, r, rng);
    ++pairs;
    EXPECT_EQ(canonical_key(a) == canonical_key(b), oracle::isomorphic(a.graph(), b.graph()))
        << serialize(a) << serialize(b);
  }
  EXPECT_GT(pairs, 200);
}

TEST(Canonical, TierOneFourLeafClassesMatchBruteForcePartition) {
  auto tiers = tiers_up_to(4, 1);
  const auto& t1 = tiers[1];
  for (std::size_t i = 0; i < t1.size(); ++i)
    for (std::size_t j = i + 1; j < t1.size(); ++j) EXPECT_FALSE(oracle::isomorphic(t1[i].graph(), t1[j].graph()));
}

TEST(Upnf, RoundTrip) {
  std::mt19937 rng(29);
  for (int i = 0; i < 100; ++i) {
    Network n = random_network(2 + i % 6, i % 4, rng);
    std::string text = serialize(n);
    Network back = parse(text);
    EXPECT_EQ(canonical_key(back), canonical_key(n));
    EXPECT_EQ(serialize(back), text);
    EXPECT_EQ(serialize(shuffled(n, rng)), text);
  }
}

TEST(Upnf, Errors) {
  EXPECT_EQ(kind_of([] { parse("upnf 1\nleaf 0 1\nleaf 1 1\nedge 0 1\n"); }), ErrorKind::BadLabeling);
  EXPECT_EQ(kind_of([] { parse("upnf 1\nleaf 0 1\nleaf 1 2\nedge 0 1\nedge 3 3\n"); }), ErrorKind::Loop);
  EXPECT_EQ(kind_of([] { parse("upnf 2\n"); }), ErrorKind::SyntaxError);
  try {
    parse("upnf 1\nleaf 0 1\nedge 0 x\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
    EXPECT_EQ(e.witness(), 3);
  }
}

TEST(Upnf, CommentsAndParallelEdges) {
  Network n = parse("# two leaves on a 1-burl\nupnf 1\nleaf 7 1\nleaf 9 2 # second\nedge 7 3\nedge 3 4\nedge 3 4\nedge 4 9\n");
  EXPECT_EQ(n.reticulation_number(), 1);
  EXPECT_EQ(n.graph().multiplicity(n.edge(1).u, n.edge(1).v), 2);
}
