#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "phylonet/search.hpp"
#include "phylonet/upnf.hpp"

using namespace phylonet;

namespace {

void expect_valid_witness(const DistanceResult& d, const Network& b, const ClassConstraint& c, KindSet ks) {
  ASSERT_TRUE(d.reachable());
  EXPECT_EQ(static_cast<int>(d.witness.size()), *d.distance);
  auto nets = d.witness.networks();
  for (const Network& n : nets) {
    EXPECT_FALSE(find_violation(n.graph()).has_value());
    EXPECT_TRUE(c.admits(n));
  }
  for (const Move& m : d.witness.moves) EXPECT_TRUE(contains(ks, m.kind));
  EXPECT_EQ(canonical_key(nets.back()), canonical_key(b));
}

}  // namespace

TEST(Distance, QuartetsAreOneApart) {
  auto a = tree_from_newick("((1,2),(3,4));");
  auto b = tree_from_newick("((1,3),(2,4));");
  auto d = bfs_distance(a, b, kinds::tbr0, ClassConstraint::tier(0));
  ASSERT_TRUE(d.reachable());
  EXPECT_EQ(*d.distance, 1);
  expect_valid_witness(d, b, ClassConstraint::tier(0), kinds::tbr0);
}

TEST(Distance, SelfIsZero) {
  std::mt19937 rng(1);
  Network n = random_network(5, 2, rng);
  auto d = bfs_distance(n, shuffled(n, rng), kinds::tbr, ClassConstraint::all());
  EXPECT_EQ(d.distance, 0);
  EXPECT_EQ(d.witness.size(), 0u);
}

TEST(Distance, ErrorsAndUnreachable) {
  auto t4 = caterpillar(4);
  auto t5 = caterpillar(5);
  EXPECT_THROW(bfs_distance(t4, t5, kinds::tbr, ClassConstraint::all()), Error);
  Network h = make_handcuffed(t4, 1, 2, 1);
  try {
    bfs_distance(t4, h, kinds::tbr, ClassConstraint::tier(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConstraintViolated);
  }
  // Tier 0 to tier 2 needs two moves.
  Network h2 = make_handcuffed(t4, 1, 3, 2);
  SearchOptions opt;
  opt.max_depth = 1;
  auto d = bfs_distance(t4, h2, kinds::tbr, ClassConstraint::all(), opt);
  EXPECT_FALSE(d.reachable());
  EXPECT_EQ(d.max_depth, 1);
  EXPECT_EQ(d.tier_cap, 3);
  opt.max_depth = 2;
  auto d2 = bfs_distance(t4, h2, kinds::tbr, ClassConstraint::all(), opt);
  EXPECT_EQ(d2.distance, 2);
}

TEST(Distance, AgreesWithSingleSourceSearchOnWholeTier) {
  // The bidirectional search against plain BFS over the enumerated space.
  for (auto [n, r, ks] : {std::tuple{4, 1, kinds::tbr0}, std::tuple{4, 1, kinds::nni0}, std::tuple{5, 0, kinds::pr0},
                          std::tuple{3, 2, kinds::pr0}}) {
    SpaceGraph g = enumerate_space(n, ClassConstraint::tier(r), ks);
    auto levels = bfs_levels(g, 0);
    for (std::size_t j = 0; j < g.size(); j += 3) {
      auto d = bfs_distance(g.nodes[0], g.nodes[j], ks, ClassConstraint::tier(r));
      ASSERT_TRUE(d.reachable());
      EXPECT_EQ(*d.distance, levels[j]);
      expect_valid_witness(d, g.nodes[j], ClassConstraint::tier(r), ks);
    }
  }
}

TEST(Distance, SymmetricForZeroMoves) {
  std::mt19937 rng(4);
  for (int i = 0; i < 12; ++i) {
    Network a = random_network(4 + i % 2, i % 2, rng);
    Network b = random_network(4 + i % 2, i % 2, rng);
    for (KindSet ks : {kinds::nni0, kinds::pr0, kinds::tbr0}) {
      auto c = ClassConstraint::tier(a.reticulation_number());
      EXPECT_EQ(bfs_distance(a, b, ks, c).distance, bfs_distance(b, a, ks, c).distance);
    }
  }
}

TEST(Distance, TreeToNetworkIsClosestDisplayedTreePlusTier) {
  auto trees = all_trees(4);
  auto tiers = tiers_up_to(4, 1);
  for (const Network& n : tiers[1])
    for (const Network& t : trees) {
      int best = 1 << 20;
      for (const auto& [k, d] : displayed_trees(n))
        best = std::min(best, *bfs_distance(t, d, kinds::tbr0, ClassConstraint::tier(0)).distance);
      auto d = bfs_distance(t, n, kinds::tbr, ClassConstraint::all());
      EXPECT_EQ(d.distance, best + 1);
      expect_valid_witness(d, n, ClassConstraint::all(), kinds::tbr);
    }
}

TEST(Space, TreeCountsMatchDoubleFactorial) {
  for (int n = 3; n <= 6; ++n)
    EXPECT_EQ(static_cast<long>(enumerate_space(n, ClassConstraint::tier(0), kinds::tbr0).size()),
              oracle::tree_count(n));
}

TEST(Space, TierCountsMatchStubMatchingEnumeration) {
  for (auto [n, r] : {std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 1}, std::pair{4, 1}}) {
    auto classes = oracle::all_networks(n, r);
    SpaceGraph g = enumerate_space(n, ClassConstraint::tier(r), kinds::nni0);
    EXPECT_EQ(g.size(), classes.size()) << n << "," << r;
    for (const auto& c : classes) EXPECT_GE(g.index_of(canonical_key(c)), 0);
  }
}

TEST(Space, EveryNodeSatisfiesItsClass) {
  SpaceOptions opt;
  opt.r_max = 2;
  for (auto c : {ClassConstraint::tree_based(), ClassConstraint::level_at_most(1)}) {
    SpaceGraph g = enumerate_space(4, c, kinds::tbr, opt);
    for (const Network& n : g.nodes) {
      EXPECT_TRUE(c.admits(n));
      EXPECT_LE(n.reticulation_number(), 2);
    }
  }
}

TEST(Space, NodeCap) {
  SpaceOptions opt;
  opt.node_cap = 10;
  try {
    enumerate_space(5, ClassConstraint::tier(0), kinds::tbr0, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
  }
}

TEST(Diameter, SmallTreeSpaces) {
  EXPECT_EQ(diameter(enumerate_space(3, ClassConstraint::tier(0), kinds::tbr0)), 0);
  EXPECT_EQ(diameter(enumerate_space(4, ClassConstraint::tier(0), kinds::tbr0)), 1);
  int d5 = diameter(enumerate_space(5, ClassConstraint::tier(0), kinds::tbr0));
  EXPECT_LE(d5, tree_tbr_diameter_bound(5));
  EXPECT_EQ(tree_tbr_diameter_bound(5), 2);
}

TEST(Diameter, DisconnectedSpaceIsReported) {
  // Plus moves alone never join two trees.
  SpaceGraph g = enumerate_space(4, ClassConstraint::tier(0), kinds::tbr_plus);
  EXPECT_EQ(space_components(g).size(), 3u);
  try {
    diameter(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DisconnectedSpace);
  }
}

TEST(Connectedness, TiersUnderNniZero) {
  for (auto [n, r] : {std::pair{3, 0}, std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 0}, std::pair{4, 1},
                      std::pair{4, 2}, std::pair{5, 0}, std::pair{5, 1}})
    EXPECT_TRUE(is_connected(enumerate_space(n, ClassConstraint::tier(r), kinds::nni0))) << n << "," << r;
}

TEST(Connectedness, TreeBasedAndLevelOneUnderTbrAndPr) {
  SpaceOptions opt;
  opt.r_max = 2;
  for (int n : {3, 4})
    for (auto c : {ClassConstraint::tree_based(), ClassConstraint::level_at_most(1)})
      for (KindSet ks : {kinds::tbr, kinds::pr}) EXPECT_TRUE(is_connected(enumerate_space(n, c, ks, opt)));
}

TEST(Diameter, TierBoundsHold) {
  for (auto [n, r] : {std::pair{3, 1}, std::pair{4, 1}}) {
    SpaceGraph g = enumerate_space(n, ClassConstraint::tier(r), kinds::tbr);
    EXPECT_LE(diameter(g), tree_tbr_diameter_bound(n) + r);
  }
  for (auto [n, r] : {std::pair{3, 2}, std::pair{4, 1}, std::pair{5, 1}}) {
    SpaceGraph g = enumerate_space(n, ClassConstraint::tier(r), kinds::pr0);
    EXPECT_LE(diameter(g), n + 2 * r);
  }
}

TEST(Isometry, TreesInsideLowTiers) {
  std::vector<std::pair<Network, Network>> pairs;
  auto trees = all_trees(5);
  for (std::size_t i = 0; i < trees.size(); i += 2)
    for (std::size_t j = i; j < trees.size(); j += 3) pairs.emplace_back(trees[i], trees[j]);
  auto rows = isometry_audit(ClassConstraint::tier(0), ClassConstraint::tier_range(0, 1), kinds::tbr, pairs);
  for (const auto& row : rows) {
    ASSERT_TRUE(row.inner.has_value());
    EXPECT_FALSE(row.gap());
  }
  auto same = isometry_audit(ClassConstraint::tier(0), ClassConstraint::all(), kinds::tbr, {{trees[0], trees[0]}});
  EXPECT_EQ(same[0].inner, 0);
  EXPECT_EQ(same[0].outer, 0);
}

TEST(Parallel, ThreadsGiveIdenticalResults) {
  SpaceOptions one, four;
  four.threads = 4;
  SpaceGraph a = enumerate_space(4, ClassConstraint::tier(1), kinds::tbr0, one);
  SpaceGraph b = enumerate_space(4, ClassConstraint::tier(1), kinds::tbr0, four);
  EXPECT_EQ(a.keys, b.keys);
  EXPECT_EQ(a.adjacency, b.adjacency);
  EXPECT_EQ(diameter(a, 1), diameter(b, 4));
}
