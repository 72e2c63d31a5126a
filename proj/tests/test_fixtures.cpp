#include <gtest/gtest.h>

#include "phylonet/fixtures.hpp"
#include "phylonet/reduce.hpp"

using namespace phylonet;

TEST(Fixtures, EveryNetworkIsValid) {
  for (const auto& f : fixtures())
    for (const auto& [name, g] : f.networks) {
      // The improper network of the tree-network example is only valid in relaxed mode.
      const bool relaxed = f.id == "tree-network-example" && name == "M";
      EXPECT_FALSE(find_violation(g, relaxed ? Properness::Relaxed : Properness::Required).has_value())
          << f.id << " " << name;
      if (relaxed) EXPECT_TRUE(find_violation(g).has_value());
    }
}

TEST(Fixtures, UnknownIdThrows) {
  try {
    fixture("no-such-figure");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParameter);
  }
}

TEST(Fixtures, AllClaimsHold) {
  for (const auto& f : fixtures()) {
    FigureReport rep = check_figure(f.id, FigureOptions{});
    for (const auto& c : rep.claims) EXPECT_TRUE(c.holds) << f.id << ": " << c.name << " " << c.detail;
  }
}

TEST(Fixtures, PzDistanceIsTwo) {
  FigureReport rep = check_figure("pz-but-no-zp", FigureOptions{});
  EXPECT_EQ(rep.values.at("distance"), 2);
  EXPECT_EQ(rep.values.at("tbr-_neighbours"), 2);
}
