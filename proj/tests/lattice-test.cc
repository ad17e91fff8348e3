// tests/lattice-test.cc

// Copyright 2026  The nerlat Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "nerlat/lattice.h"
#include "test-util.h"

namespace nerlat {
namespace {

using testing::BruteForcePaths;
using testing::DiamondLattice;
using testing::RandomLattice;

const ScaleConfig kScales;

TEST(LatticeTest, DiamondShape) {
  Lattice lat = DiamondLattice();
  EXPECT_EQ(lat.NumNodes(), 6u);
  EXPECT_EQ(lat.NumArcs(), 6u);
  EXPECT_EQ(CountPaths(lat), 2.0);
}

TEST(LatticeTest, DiamondPosteriors) {
  Lattice lat = DiamondLattice();
  ArcPosteriors p = ForwardBackward(lat, kScales);
  for (int a : {0, 1, 2}) EXPECT_NEAR(p.posterior[a], 0.75, 1e-12);
  for (int a : {3, 4, 5}) EXPECT_NEAR(p.posterior[a], 0.25, 1e-12);
  EXPECT_NEAR(p.total_logprob, 0.0, 1e-12);
  EXPECT_NEAR(p.final_posterior[lat.IndexOf(5)], 1.0, 1e-12);
}

TEST(LatticeTest, DiamondBestPathAndNBest) {
  Lattice lat = DiamondLattice();
  Hypothesis best = BestPath(lat, kScales);
  EXPECT_EQ(best.words, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_NEAR(best.total_score, std::log(0.75), 1e-12);
  EXPECT_EQ(best.word_times.front(), std::make_pair(0, 10));
  auto nb = NBest(lat, kScales, 5);
  ASSERT_EQ(nb.size(), 2u);
  EXPECT_EQ(nb[1].words, (std::vector<std::string>{"a", "bedok", "c"}));
  EXPECT_NEAR(nb[1].total_score, std::log(0.25), 1e-12);
}

TEST(LatticeTest, SingleArc) {
  Lattice lat = ParseLattice("0 1 hello -5.0 -1.0\n1\n");
  ArcPosteriors p = ForwardBackward(lat, kScales);
  EXPECT_NEAR(p.posterior[0], 1.0, 1e-15);
  EXPECT_EQ(BestPath(lat, kScales).words, std::vector<std::string>{"hello"});
}

TEST(LatticeTest, EpsilonArcsCarryNoWord) {
  Lattice lat = ParseLattice("0 1 <eps> -1 0\n1 2 x -1 0\n0 2 x -3 0\n2\n");
  Hypothesis h = BestPath(lat, kScales);
  EXPECT_EQ(h.words, std::vector<std::string>{"x"});
  EXPECT_EQ(h.arcs.size(), 2u);
  // Both paths read "x", so the n-best list has one entry.
  EXPECT_EQ(NBest(lat, kScales, 3).size(), 1u);
}

TEST(LatticeTest, TiesBreakByWords) {
  Lattice lat = ParseLattice("0 1 zeta -1 -1\n0 1 alpha -1 -1\n1\n");
  EXPECT_EQ(BestPath(lat, kScales).words, std::vector<std::string>{"alpha"});
  auto nb = NBest(lat, kScales, 2);
  ASSERT_EQ(nb.size(), 2u);
  EXPECT_EQ(nb[0].words, std::vector<std::string>{"alpha"});
  EXPECT_EQ(nb[1].words, std::vector<std::string>{"zeta"});
}

TEST(LatticeTest, NonSinkFinal) {
  // Node 1 is final and also continues to node 2.
  Lattice lat = ParseLattice("0 1 a -10 0\n1 2 b -10 0\n1\n2\n");
  ArcPosteriors p = ForwardBackward(lat, kScales);
  EXPECT_NEAR(p.posterior[0], 1.0, 1e-12);
  double stop = 1.0 / (1.0 + std::exp(-1.0));
  EXPECT_NEAR(p.final_posterior[lat.IndexOf(1)], stop, 1e-12);
  EXPECT_NEAR(p.posterior[1], 1.0 - stop, 1e-12);
  EXPECT_EQ(BestPath(lat, kScales).words, std::vector<std::string>{"a"});
}

TEST(LatticeTest, TextRoundTrip) {
  Lattice lat = DiamondLattice();
  Lattice back = ParseLattice(WriteLattice(lat));
  EXPECT_EQ(back.UtteranceId(), "diamond");
  ASSERT_EQ(back.NumArcs(), lat.NumArcs());
  for (size_t a = 0; a < lat.NumArcs(); ++a) {
    EXPECT_EQ(back.Arcs()[a].word, lat.Arcs()[a].word);
    EXPECT_NEAR(back.Arcs()[a].lm_score, lat.Arcs()[a].lm_score, 1e-8);
  }
  EXPECT_EQ(back.TimeOfIndex(back.IndexOf(5)), 30);
  EXPECT_EQ(WriteLattice(back), WriteLattice(ParseLattice(WriteLattice(back))));
}

TEST(LatticeTest, MultipleBlocks) {
  auto lats = ReadLattices("UTT u1\n0 1 a -1 0\n1\n\nUTT u2\n0 1 b -1 0\n1\n");
  ASSERT_EQ(lats.size(), 2u);
  EXPECT_EQ(lats[1].UtteranceId(), "u2");
  EXPECT_TRUE(ReadLattices("\n\n").empty());
}

TEST(LatticeTest, TimesInferred) {
  Lattice lat = ParseLattice("0 1 a -1 0\n1 2 b -1 0\n0 2 c -1 0\n2\n");
  EXPECT_EQ(lat.TimeOfIndex(lat.IndexOf(2)), 2);
  Lattice given = ParseLattice("NODE 0 0\nNODE 1 7\nNODE 2 9\n0 1 a -1 0\n1 2 b -1 0\n2\n");
  EXPECT_EQ(given.TimeOfIndex(given.IndexOf(1)), 7);
}

TEST(LatticeTest, ExplicitStart) {
  Lattice lat = ParseLattice("START 3\n0 1 a -1 0\n3 0 b -1 0\n1\n");
  EXPECT_EQ(lat.StartNode(), 3);
  EXPECT_EQ(BestPath(lat, kScales).words, (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(ParseLattice(WriteLattice(lat)).StartNode(), 3);
}

TEST(LatticeTest, RejectsMalformedInput) {
  auto fails_with = [](const std::string &text, const std::string &needle) {
    try {
      ReadLattices(text);
    } catch (const Error &e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  EXPECT_TRUE(fails_with("0 1 a -1 0\n1 0 b -1 0\n1\n", "cycle"));
  EXPECT_TRUE(fails_with("0 1 a -1 0\n7\n", "dangling node id 7"));
  EXPECT_TRUE(fails_with("0 1 a nan 0\n1\n", "non-finite"));
  EXPECT_TRUE(fails_with("0 1 a inf 0\n1\n", "non-finite"));
  EXPECT_TRUE(fails_with("0 1 a -1\n1\n", "expected"));
  EXPECT_TRUE(fails_with("NODE 0 5\nNODE 1 2\n0 1 a -1 0\n1\n", "backwards"));
  EXPECT_TRUE(fails_with("x 1 a -1 0\n1\n", "bad node id"));
  EXPECT_TRUE(fails_with("UTT a\n0 1 a -1 0\nUTT b\n", "UTT header"));
  EXPECT_TRUE(fails_with("0 1 a -1 0\n1\n0 2 b x 0\n", "line 3"));
}

TEST(LatticeTest, NoPathErrors) {
  Lattice lat("u", {{0, 0}, {1, 1}, {2, 1}}, {{0, 1, "a", -1, 0}}, 0, {2});
  EXPECT_THROW(ForwardBackward(lat, kScales), Error);
  EXPECT_THROW(BestPath(lat, kScales), Error);
  EXPECT_THROW(NBest(lat, kScales, 1), Error);
  Lattice c = Connect(lat);
  EXPECT_EQ(c.NumNodes(), 1u);
  EXPECT_EQ(c.NumArcs(), 0u);
  EXPECT_THROW(ForwardBackward(Lattice(), kScales), Error);
  EXPECT_THROW(NBest(DiamondLattice(), kScales, 0), Error);
}

TEST(LatticeTest, ConnectDropsDeadEnds) {
  Lattice lat = ParseLattice("0 1 a -1 0\n1 2 b -1 0\n1 3 dead -1 0\n4 2 orphan -1 0\n2\n");
  Lattice c = Connect(lat);
  EXPECT_EQ(c.NumArcs(), 2u);
  EXPECT_EQ(c.NumNodes(), 3u);
  EXPECT_FALSE(c.HasNode(3));
  EXPECT_FALSE(c.HasNode(4));
}

TEST(LatticeTest, ScalesValidated) {
  EXPECT_THROW(ArcWeights(DiamondLattice(), ScaleConfig{0.0, 1.0}), Error);
  EXPECT_THROW(ArcWeights(DiamondLattice(), ScaleConfig{0.1, -1.0}), Error);
}

TEST(LatticeTest, EnumerateCap) {
  EXPECT_EQ(EnumeratePaths(DiamondLattice(), kScales, 2).size(), 2u);
  EXPECT_THROW(EnumeratePaths(DiamondLattice(), kScales, 1), Error);
}

// Property checks against explicit path enumeration.
class RandomLatticeTest : public ::testing::TestWithParam<int> {};

TEST_P(RandomLatticeTest, MatchesEnumeration) {
  Rng rng(1000 + GetParam());
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  Lattice lat = RandomLattice(rng, static_cast<int>(rng.Range(2, 12)), 2000, vocab);
  ScaleConfig sc{rng.Uniform(0.05, 1.0), rng.Uniform(0.5, 2.0)};

  auto expect = testing::OraclePosteriors(lat, sc);
  ArcPosteriors p = ForwardBackward(lat, sc);
  for (size_t a = 0; a < lat.NumArcs(); ++a) EXPECT_NEAR(p.posterior[a], expect[a], 1e-9);
  for (double s : testing::CutSums(lat, p)) EXPECT_NEAR(s, 1.0, 1e-9);

  auto paths = BruteForcePaths(lat, sc);
  auto best = *std::min_element(paths.begin(), paths.end(), testing::OracleBetter);
  Hypothesis h = BestPath(lat, sc);
  EXPECT_NEAR(h.total_score, best.weight, 1e-9);
  EXPECT_EQ(h.words, best.words);

  auto oracle = testing::OracleNBest(lat, sc);
  auto nb = NBest(lat, sc, 20);
  ASSERT_EQ(nb.size(), std::min<size_t>(20, oracle.size()));
  for (size_t i = 0; i < nb.size(); ++i) {
    EXPECT_NEAR(nb[i].total_score, oracle[i].weight, 1e-9);
    EXPECT_EQ(nb[i].words, oracle[i].words);
  }

  auto en = EnumeratePaths(lat, sc, 10000);
  EXPECT_EQ(en.size(), paths.size());
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomLatticeTest, ::testing::Range(0, 60));

}  // namespace
}  // namespace nerlat
