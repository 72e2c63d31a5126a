#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "phylonet/canonical.hpp"
#include "phylonet/moves.hpp"
#include "phylonet/trees.hpp"
#include "phylonet/upnf.hpp"

using namespace phylonet;

namespace {

std::set<CanonicalKey> keys(const Neighborhood& nb) {
  std::set<CanonicalKey> out;
  for (const auto& [k, v] : nb) out.insert(k);
  return out;
}

bool subset(const std::set<CanonicalKey>& a, const std::set<CanonicalKey>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Two-leaf network: 1-a, a-b, a-c, b-c, b-d, c-d, d-2.
Network square() {
  return network_from_pairs({{1, 10}, {10, 11}, {10, 12}, {11, 12}, {11, 13}, {12, 13}, {13, 2}},
                            {{1, 1}, {2, 2}});
}

template <class Rng>
Move random_valid_move(const Network& n, KindSet ks, Rng& rng, Applied* out = nullptr) {
  auto all = enumerate_moves(n, ks);
  while (true) {
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    Move m = all[pick(rng)];
    Attempt a = try_apply(n, m);
    if (!a) continue;
    if (out) *out = std::move(*a.applied);
    return m;
  }
}

}  // namespace

TEST(Apply, ZeroMoveKeepsTierAndPlusRaisesIt) {
  Network n1 = caterpillar(6);
  // Move an internal edge of the caterpillar to the two outer cherries.
  EdgeId internal = -1;
  for (EdgeId e = 0; e < n1.edge_count(); ++e)
    if (!n1.is_external(e)) internal = e;
  ASSERT_GE(internal, 0);
  Network n2 = apply(n1, Move::tbr0(internal, n1.leaf_edge(1), n1.leaf_edge(6)));
  EXPECT_EQ(n2.reticulation_number(), 0);
  Network n3 = apply(n2, Move::plus(Family::TBR, n2.leaf_edge(2), n2.leaf_edge(5)));
  EXPECT_EQ(n3.reticulation_number(), 1);
  Network n4 = apply(n3, Move::plus(Family::TBR, 0, 0));
  EXPECT_EQ(n4.reticulation_number(), 2);
}

TEST(Apply, MinusOnCutEdgeWouldDisconnect) {
  Network t = caterpillar(5);
  for (EdgeId e = 0; e < t.edge_count(); ++e) {
    Attempt a = try_apply(t, Move::minus(Family::TBR, e));
    ASSERT_FALSE(a);
    EXPECT_EQ(a.error, ErrorKind::WouldDisconnect);
  }
  try {
    apply(t, Move::minus(Family::TBR, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WouldDisconnect);
  }
}

TEST(Apply, NniRestrictions) {
  Network sq = square();
  // The chord {b,c} lies in two triangles.
  EXPECT_TRUE(try_apply(sq, Move::minus(Family::NNI, 3)));
  Network sq2 = network_from_pairs({{1, 10}, {10, 11}, {10, 12}, {11, 13}, {12, 13}, {11, 14}, {12, 15},
                                    {13, 16}, {14, 15}, {14, 3}, {15, 4}, {16, 2}, {16, 5}},
                                   {{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}});
  EXPECT_EQ(try_apply(sq2, Move::minus(Family::NNI, 1)).error, ErrorKind::NotATriangle);
  EXPECT_EQ(try_apply(sq2, Move::plus(Family::NNI, 0, 4)).error, ErrorKind::NotAdjacent);
  EXPECT_EQ(try_apply(sq2, Move::plus(Family::NNI, 0, 0)).error, ErrorKind::NotAdjacent);
  EXPECT_TRUE(try_apply(sq2, Move::plus(Family::NNI, 0, 1)));
}

TEST(Apply, LoopAndImproperResultsAreRejected) {
  // Across the whole of tier 2 on three leaves some payloads must fail for
  // each reason and every success must validate.
  std::set<ErrorKind> reasons;
  auto tiers = tiers_up_to(3, 2);
  for (const Network& net : tiers[2])
    for (const Move& m : enumerate_moves(net, kinds::tbr | kinds::nni)) {
      Attempt a = try_apply(net, m);
      if (!a) {
        reasons.insert(a.error);
        continue;
      }
      EXPECT_FALSE(find_violation(a.applied->network.graph()).has_value());
    }
  EXPECT_TRUE(reasons.count(ErrorKind::WouldBeImproper));
  EXPECT_TRUE(reasons.count(ErrorKind::WouldCreateLoop));
  EXPECT_TRUE(reasons.count(ErrorKind::WouldDisconnect));
}

TEST(Invert, PlusInvertsToMinusOfAddedEdge) {
  Network t = caterpillar(4);
  Move m = Move::plus(Family::TBR, 0, 3);
  Applied a = apply_tracked(t, m);
  Move inv = invert(t, m, a.network);
  EXPECT_EQ(inv.kind, MoveKind::TBRminus);
  EXPECT_EQ(inv.edge, a.added_edge);
  EXPECT_TRUE(isomorphic(apply(a.network, inv), t));
}

TEST(Invert, NniZeroInvertsAcrossTheSameAxis) {
  Network t = tree_from_newick("((1,2),(3,4));");
  Neighborhood nb = neighbors(t, kinds::nni0);
  ASSERT_EQ(nb.size(), 2u);
  for (const auto& [k, nbr] : nb) {
    Applied a = apply_tracked(t, nbr.witness);
    EXPECT_EQ(a.inverse.kind, MoveKind::NNI0);
    // The axis stays the single internal edge.
    EXPECT_FALSE(a.network.is_external(a.inverse.axis));
    EXPECT_TRUE(isomorphic(apply(a.network, a.inverse), t));
  }
}

TEST(Invert, RandomRoundTrips) {
  std::mt19937 rng(41);
  const KindSet all = kinds::tbr | kinds::pr | kinds::nni;
  int count = 0;
  for (int i = 0; i < 1000; ++i) {
    Network n = random_network(2 + i % 5, i % 4, rng);
    Applied a;
    Move m = random_valid_move(n, all, rng, &a);
    Move inv = invert(n, m, a.network);
    Network back = apply(a.network, inv);
    ASSERT_TRUE(isomorphic(back, n)) << to_string(m) << "\n" << serialize(n);
    EXPECT_EQ(family(inv.kind), family(m.kind));
    if (sign(m.kind) == Sign::Zero) EXPECT_EQ(sign(inv.kind), Sign::Zero);
    if (sign(m.kind) == Sign::Plus) EXPECT_EQ(sign(inv.kind), Sign::Minus);
    if (sign(m.kind) == Sign::Minus) EXPECT_EQ(sign(inv.kind), Sign::Plus);
    ++count;
  }
  EXPECT_EQ(count, 1000);
}

TEST(Neighbors, ThreeLeafTreeHasNoTbrZeroNeighbours) {
  Network s = network_from_pairs({{0, 1}, {0, 2}, {0, 3}}, {{1, 1}, {2, 2}, {3, 3}});
  EXPECT_TRUE(neighbors(s, kinds::tbr0).empty());
  EXPECT_TRUE(neighbors(s, kinds::pr0).empty());
  EXPECT_TRUE(neighbors(s, kinds::nni0).empty());
}

TEST(Neighbors, QuartetReachesTheOtherTwo) {
  auto trees = all_trees(4);
  std::set<CanonicalKey> all;
  for (const auto& t : trees) all.insert(canonical_key(t));
  ASSERT_EQ(all.size(), 3u);
  for (const auto& t : trees) {
    auto nb = keys(neighbors(t, kinds::tbr0));
    EXPECT_EQ(nb.size(), 2u);
    EXPECT_FALSE(nb.count(canonical_key(t)));
    for (const auto& k : nb) EXPECT_TRUE(all.count(k));
  }
}

TEST(Neighbors, NniPlusGrowsTriangleAtAVertex) {
  std::mt19937 rng(3);
  Network n3 = random_network(5, 1, rng);
  // Pick an unlabelled vertex x and two of its edges.
  VertexId x = -1;
  for (VertexId v = 0; v < n3.vertex_count(); ++v)
    if (!n3.is_leaf(v)) x = v;
  const auto& inc = n3.incident(x);
  Network n4 = apply(n3, Move::plus(Family::NNI, inc[0], inc[1]));
  EXPECT_EQ(n4.reticulation_number(), 2);
  EXPECT_TRUE(keys(neighbors(n3, kind_bit(MoveKind::NNIplus))).count(canonical_key(n4)));
}

TEST(Neighbors, WitnessesReproduceTheirClass) {
  std::mt19937 rng(9);
  for (int i = 0; i < 10; ++i) {
    Network n = random_network(4, i % 3, rng);
    for (const auto& [k, nb] : neighbors(n, kinds::tbr | kinds::nni))
      EXPECT_EQ(canonical_key(apply(n, nb.witness)), k);
  }
}

TEST(Neighbors, ContainmentNniPrTbr) {
  auto check = [](const Network& n) {
    auto nni = keys(neighbors(n, kinds::nni));
    auto pr = keys(neighbors(n, kinds::pr));
    auto tbr = keys(neighbors(n, kinds::tbr));
    EXPECT_TRUE(subset(nni, pr)) << serialize(n);
    EXPECT_TRUE(subset(pr, tbr)) << serialize(n);
  };
  auto tiers = tiers_up_to(4, 1);
  for (const auto& tier : tiers)
    for (const auto& n : tier) check(n);
  std::mt19937 rng(13);
  for (int i = 0; i < 30; ++i) check(random_network(2 + i % 4, i % 3, rng));
}

TEST(Neighbors, Symmetry) {
  std::mt19937 rng(19);
  for (int i = 0; i < 12; ++i) {
    Network n = random_network(3 + i % 2, i % 3, rng);
    CanonicalKey self = canonical_key(n);
    for (MoveKind k : {MoveKind::TBR0, MoveKind::PR0, MoveKind::NNI0, MoveKind::TBRplus, MoveKind::NNIplus,
                       MoveKind::NNIminus}) {
      MoveKind mirror = make_kind(family(k), sign(k) == Sign::Plus    ? Sign::Minus
                                             : sign(k) == Sign::Minus ? Sign::Plus
                                                                      : Sign::Zero);
      for (const auto& [key, nb] : neighbors(n, kind_bit(k)))
        EXPECT_TRUE(neighbors(nb.network, kind_bit(mirror)).count(self)) << to_string(k);
    }
  }
}

TEST(KindSets, Parsing) {
  EXPECT_EQ(parse_kind_set("tbr"), kinds::tbr);
  EXPECT_EQ(parse_kind_set("nni0"), kinds::nni0);
  EXPECT_EQ(parse_kind_set("TBR+,tbr-"), kinds::tbr_plus | kinds::tbr_minus);
  EXPECT_EQ(parse_kind_set("prplus"), kind_bit(MoveKind::PRplus));
  EXPECT_THROW(parse_kind_set("bogus"), Error);
}
