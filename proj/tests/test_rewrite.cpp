#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "phylonet/caterpillar.hpp"
#include "phylonet/rewrite.hpp"
#include "phylonet/trees.hpp"
#include "phylonet/upnf.hpp"

using namespace phylonet;

namespace {

// Replays a sequence with per-step validation and compares its end with
// `end` using the backtracking isomorphism test.
::testing::AssertionResult valid_with_end(const MoveSequence& s, const Network& end) {
  Network cur = s.start;
  for (const Move& m : s.moves) {
    Attempt a = try_apply(cur, m);
    if (!a) return ::testing::AssertionFailure() << "invalid step " << to_string(m) << ": " << a.message;
    if (find_violation(a.applied->network.graph())) return ::testing::AssertionFailure() << "invalid intermediate";
    cur = std::move(a.applied->network);
  }
  if (!oracle::isomorphic(cur.graph(), end.graph())) return ::testing::AssertionFailure() << "endpoint differs";
  return ::testing::AssertionSuccess();
}

template <class Rng>
std::optional<Move> random_move(const Network& n, KindSet ks, Rng& rng) {
  auto all = enumerate_moves(n, ks);
  std::shuffle(all.begin(), all.end(), rng);
  for (const Move& m : all)
    if (try_apply(n, m)) return m;
  return std::nullopt;
}

std::map<std::string, int> tally;

void count_tags(const RewriteReport& r) {
  for (const auto& t : r.tags) ++tally[t];
}

bool parallel(const Network& n) { return detail::has_parallel_edges(n); }

}  // namespace

TEST(TbrToPr, RandomInstances) {
  std::mt19937 rng(1);
  int two = 0;
  for (int i = 0; i < 150; ++i) {
    Network n = random_network(3 + i % 4, i % 4, rng);
    auto m = random_move(n, kinds::tbr0, rng);
    if (!m) continue;
    RewriteReport rep = tbr0_to_pr(n, *m);
    EXPECT_LE(rep.output.size(), 2u);
    for (const Move& x : rep.output.moves) EXPECT_EQ(x.kind, MoveKind::PR0);
    EXPECT_TRUE(valid_with_end(rep.output, apply(n, *m)));
    two += rep.output.size() == 2;
    count_tags(rep);
  }
  EXPECT_GT(two, 10);
}

TEST(TbrToPr, InternalEdgeOfTreeAndCutEdgeOfTwoBlobs) {
  std::mt19937 rng(2);
  Network t = random_tree(6, rng);
  for (EdgeId e = 0; e < t.edge_count(); ++e) {
    if (t.is_external(e)) continue;
    for (EdgeId a = 0; a < t.edge_count(); ++a)
      for (EdgeId b = 0; b < t.edge_count(); b += 3) {
        Move m = Move::tbr0(e, a, b);
        if (!try_apply(t, m)) continue;
        EXPECT_TRUE(valid_with_end(tbr0_to_pr(t, m).output, apply(t, m)));
      }
  }
  // Two cycles joined by a cut-edge; move both ends of that edge.
  Network h = make_handcuffed(make_handcuffed(caterpillar(5), 1, 2, 1), 4, 5, 1);
  int tried = 0;
  for (EdgeId e : cut_edges(h.graph())) {
    if (h.is_external(e)) continue;
    for (const Move& m : enumerate_moves(h, kinds::tbr0)) {
      if (m.edge != e || m.end >= 0 || !try_apply(h, m)) continue;
      RewriteReport rep = tbr0_to_pr(h, m);
      EXPECT_TRUE(valid_with_end(rep.output, apply(h, m)));
      if (++tried > 40) break;
    }
  }
  EXPECT_GT(tried, 0);
}

TEST(TbrToPr, OneEndFormIsAlreadyAPrune) {
  Network t = caterpillar(5);
  auto m = enumerate_moves(t, kinds::pr0).front();
  Move tbr = Move::tbr0_end(m.edge, m.end, m.target_a);
  if (!isomorphic(apply(t, tbr), t)) EXPECT_EQ(tbr0_to_pr(t, tbr).output.size(), 1u);
}

TEST(PrToNni, RandomInstancesMoveOnlyTheEdge) {
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    Network n = random_network(2 + i % 5, i % 4, rng);
    auto m = random_move(n, kinds::pr0, rng);
    if (!m) continue;
    Network end = apply(n, *m);
    RewriteReport rep = pr0_to_nni(n, *m);
    EXPECT_LE(static_cast<long>(rep.output.size()), 2L * n.edge_count());
    EXPECT_TRUE(valid_with_end(rep.output, end));
    // Follow the edge: each step moves it and nothing else.
    Network cur = n;
    EdgeId e = m->edge;
    const bool simple = !parallel(n) && !parallel(end);
    for (const Move& x : rep.output.moves) {
      EXPECT_EQ(x.kind, MoveKind::NNI0);
      EXPECT_EQ(x.edge, e);
      Applied a = apply_tracked(cur, x);
      for (EdgeId g = 0; g < a.network.edge_count(); ++g)
        if (g != a.added_edge) EXPECT_NE(a.origin[g], e);
      e = a.added_edge;
      cur = std::move(a.network);
      if (simple) EXPECT_FALSE(parallel(cur));
    }
    count_tags(rep);
  }
}

TEST(PrToNni, SlideOneEdgeAndTwoStepPath) {
  // ((1,2),3,(4,5)): move 1's parent end along the path to the far cherry.
  Network t = tree_from_newick("((1,2),3,(4,5));");
  VertexId p1 = t.edge(t.leaf_edge(1)).other(t.leaf(1));
  EdgeId e = t.leaf_edge(1);
  for (EdgeId f = 0; f < t.edge_count(); ++f) {
    Move m = Move::pr0(e, p1, f);
    if (!try_apply(t, m) || isomorphic(apply(t, m), t)) continue;
    RewriteReport rep = pr0_to_nni(t, m);
    EXPECT_GE(rep.output.size(), 1u);
    EXPECT_LE(rep.output.size(), 3u);
    EXPECT_TRUE(valid_with_end(rep.output, apply(t, m)));
  }
}

TEST(PrMinusToNni, Cases) {
  // e in a triangle: a single NNI-.
  Network h = make_handcuffed(caterpillar(4), 1, 2, 1);
  std::mt19937 rng(4);
  for (int i = 0; i < 150; ++i) {
    Network n = random_network(3 + i % 4, 1 + i % 3, rng);
    auto m = random_move(n, kind_bit(MoveKind::PRminus), rng);
    if (!m) continue;
    RewriteReport rep = prminus_to_nni(n, *m);
    ASSERT_FALSE(rep.output.moves.empty());
    EXPECT_EQ(rep.output.moves.back().kind, MoveKind::NNIminus);
    for (std::size_t k = 0; k + 1 < rep.output.size(); ++k) EXPECT_EQ(rep.output.moves[k].kind, MoveKind::NNI0);
    EXPECT_TRUE(valid_with_end(rep.output, apply(n, *m)));
    if (detail::in_triangle(n.graph(), m->edge)) EXPECT_EQ(rep.output.size(), 1u);
    const Edge ed = n.edge(m->edge);
    if (n.graph().multiplicity(ed.u, ed.v) >= 2) EXPECT_EQ(rep.output.size(), 2u);
    count_tags(rep);
  }
  (void)h;
}

TEST(Merge, PlusMinusPairs) {
  std::mt19937 rng(5);
  int cancelled = 0, merged = 0;
  for (int i = 0; i < 120; ++i) {
    Network n = random_network(3 + i % 4, i % 3, rng);
    auto p = random_move(n, kinds::tbr_plus, rng);
    ASSERT_TRUE(p);
    Network mid = apply(n, *p);
    auto q = random_move(mid, kinds::tbr_minus, rng);
    if (!q) continue;
    MoveSequence s{n, {*p, *q}};
    RewriteReport rep = merge_plus_minus(s);
    EXPECT_LE(rep.output.size(), 1u);
    EXPECT_TRUE(valid_with_end(rep.output, s.end()));
    (rep.output.size() == 0 ? cancelled : merged)++;
    // The reverse order.
    if (n.reticulation_number() > 0) {
      auto mm = random_move(n, kinds::tbr_minus, rng);
      if (!mm) continue;
      Network low = apply(n, *mm);
      auto pp = random_move(low, kinds::tbr_plus, rng);
      MoveSequence s2{n, {*mm, *pp}};
      EXPECT_TRUE(valid_with_end(merge_plus_minus(s2).output, s2.end()));
    }
  }
  EXPECT_GT(merged, 20);
  // Adding an edge and removing it again cancels.
  Network t = caterpillar(4);
  Applied a = apply_tracked(t, Move::plus(Family::TBR, 0, 3));
  RewriteReport rep = merge_plus_minus(MoveSequence{t, {Move::plus(Family::TBR, 0, 3), Move::minus(Family::TBR, a.added_edge)}});
  EXPECT_EQ(rep.output.size(), 0u);
  EXPECT_EQ(rep.tags.front(), "moves-cancel");
  (void)cancelled;
}

TEST(Swap, ZeroPlus) {
  std::mt19937 rng(6);
  for (int i = 0; i < 120; ++i) {
    Network n = i % 2 ? random_tree(5, rng) : random_network(3 + i % 3, 1 + i % 2, rng);
    auto z = random_move(n, kinds::tbr0, rng);
    if (!z) continue;
    Network mid = apply(n, *z);
    auto p = random_move(mid, kinds::tbr_plus, rng);
    MoveSequence s{n, {*z, *p}};
    RewriteReport rep = swap_zero_plus(s);
    EXPECT_LE(rep.output.size(), 2u);
    ASSERT_FALSE(rep.output.moves.empty());
    EXPECT_EQ(sign(rep.output.moves[0].kind), Sign::Plus);
    EXPECT_TRUE(valid_with_end(rep.output, s.end()));
    count_tags(rep);
  }
}

TEST(Swap, PlusZeroForTrees) {
  std::mt19937 rng(7);
  int done = 0, na = 0;
  for (int i = 0; i < 150; ++i) {
    Network t = random_tree(4 + i % 3, rng);
    auto p = random_move(t, kinds::tbr_plus, rng);
    Network mid = apply(t, *p);
    auto z = random_move(mid, kinds::tbr0, rng);
    if (!z) continue;
    MoveSequence s{t, {*p, *z}};
    try {
      RewriteReport rep = swap_plus_zero_for_tree(s);
      ASSERT_EQ(rep.output.size(), 2u);
      EXPECT_EQ(sign(rep.output.moves[0].kind), Sign::Zero);
      EXPECT_TRUE(rep.output.networks()[1].is_tree());
      EXPECT_TRUE(valid_with_end(rep.output, s.end()));
      ++done;
      count_tags(rep);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotApplicable);
      ++na;
    }
  }
  EXPECT_GT(done, 30);
  // Not from a tree.
  Network n = random_network(4, 1, rng);
  MoveSequence s{n, {*random_move(n, kinds::tbr_plus, rng)}};
  s.moves.push_back(*random_move(s.end(), kinds::tbr0, rng));
  EXPECT_THROW(swap_plus_zero_for_tree(s), Error);
}

TEST(Descend, ToDisplayedTrees) {
  EXPECT_TRUE(descend_to_tree(caterpillar(5), caterpillar(5)).moves.empty());
  Network h = make_handcuffed(caterpillar(5), 1, 3, 2);
  auto s = descend_to_tree(h, caterpillar(5));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(valid_with_end(s, caterpillar(5)));
  std::mt19937 rng(8);
  for (int i = 0; i < 40; ++i) {
    Network n = random_network(3 + i % 4, 1 + i % 4, rng);
    for (const auto& [k, t] : displayed_trees(n)) {
      auto seq = descend_to_tree(n, t);
      EXPECT_EQ(static_cast<int>(seq.size()), n.reticulation_number());
      for (const Move& m : seq.moves) EXPECT_EQ(m.kind, MoveKind::TBRminus);
      EXPECT_TRUE(valid_with_end(seq, t));
    }
  }
  try {
    descend_to_tree(caterpillar(4), tree_from_newick("((1,3),(2,4));"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDisplayed);
  }
}

TEST(Normalize, NoMinusBeforePlus) {
  std::mt19937 rng(9);
  for (int i = 0; i < 60; ++i) {
    Network n = random_network(3 + i % 3, 1 + i % 2, rng);
    MoveSequence s{n, {}};
    Network cur = n;
    for (int k = 0; k < 3 + i % 3; ++k) {
      KindSet ks = k == 0 ? kinds::tbr_minus : k + 1 == 3 + i % 3 ? kinds::tbr_plus : kinds::tbr;
      auto m = random_move(cur, ks, rng);
      if (!m) break;
      s.moves.push_back(*m);
      cur = apply(cur, *m);
    }
    RewriteReport rep = normalize_order(s);
    EXPECT_LE(rep.output.size(), s.size());
    EXPECT_TRUE(valid_with_end(rep.output, cur));
    bool seen_minus = false;
    for (const Move& m : rep.output.moves) {
      if (sign(m.kind) == Sign::Minus) seen_minus = true;
      if (sign(m.kind) == Sign::Plus) EXPECT_FALSE(seen_minus);
    }
  }
  // Adjacent minus then plus becomes one zero move or nothing.
  Network h = make_handcuffed(caterpillar(5), 2, 4, 1);
  auto m = *random_move(h, kinds::tbr_minus, rng);
  Network low = apply(h, m);
  auto p = *random_move(low, kinds::tbr_plus, rng);
  RewriteReport rep = normalize_order(MoveSequence{h, {m, p}});
  EXPECT_LE(rep.output.size(), 1u);
  // Already ordered sequences are left alone.
  MoveSequence ordered{caterpillar(4), {Move::plus(Family::TBR, 0, 3)}};
  EXPECT_EQ(normalize_order(ordered).output.moves, ordered.moves);
}

TEST(Rewrite, TagSummary) {
  for (const auto& [k, v] : tally) std::cout << "  " << k << ": " << v << "\n";
}

namespace {

void expect_pipeline(const Network& n) {
  CaterpillarResult res = to_sorted_caterpillar(n);
  const int r = n.reticulation_number();
  for (const Move& m : res.sequence.moves) ASSERT_EQ(m.kind, MoveKind::NNI0);
  Network cur = n;
  for (const Move& m : res.sequence.moves) {
    cur = apply(cur, m);
    ASSERT_EQ(cur.reticulation_number(), r);
  }
  EXPECT_TRUE(oracle::isomorphic(cur.graph(), make_sorted_handcuffed_caterpillar(n.leaf_count(), r).graph()));
  for (const auto& s : res.stages) EXPECT_LE(s.moves, s.budget) << s.name << "\n" << serialize(n);
  EXPECT_TRUE(res.within_budget());
}

}  // namespace

TEST(Caterpillar, SortedInputGivesEmptySequence) {
  for (int n = 2; n <= 5; ++n)
    for (int r = 0; r <= 3; ++r) EXPECT_EQ(to_sorted_caterpillar(make_sorted_handcuffed_caterpillar(n, r)).sequence.size(), 0u);
}

TEST(Caterpillar, Trees) {
  std::mt19937 rng(10);
  for (int i = 0; i < 40; ++i) expect_pipeline(random_tree(2 + i % 7, rng));
}

TEST(Caterpillar, SmallTiers) {
  for (int n = 2; n <= 4; ++n) {
    auto tiers = tiers_up_to(n, n == 2 ? 3 : 2);
    for (const auto& tier : tiers)
      for (const Network& net : tier) expect_pipeline(net);
  }
}

TEST(Caterpillar, RandomNetworks) {
  std::mt19937 rng(11);
  for (int i = 0; i < 60; ++i) expect_pipeline(random_network(2 + i % 6, 1 + i % 4, rng));
}
