// tests/boost-test.cc

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

#include "nerlat/boost.h"
#include "test-util.h"

namespace nerlat {
namespace {

const ScaleConfig kScales;

TEST(BoostTest, IndexEntries) {
  InvertedIndex idx = BuildIndex({testing::DiamondLattice()}, kScales);
  EXPECT_EQ(idx.Size(), 6u);
  auto hits = Search(idx, "a");
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].start, 0);
  EXPECT_EQ(hits[0].end, 10);
  auto bedok = Search(idx, "bedok");
  ASSERT_EQ(bedok.size(), 1u);
  EXPECT_EQ(bedok[0].utterance_id, "diamond");
  EXPECT_EQ(bedok[0].arc_index, 4);
  EXPECT_NEAR(bedok[0].log_posterior, std::log(0.25), 1e-12);
  EXPECT_TRUE(Search(idx, "tampines").empty());
}

TEST(BoostTest, BonusAddsToLogPosterior) {
  InvertedIndex idx = BuildIndex({testing::DiamondLattice()}, kScales);
  InvertedIndex boosted = BoostIndex(idx, {"bedok"}, std::log(2.0));
  auto e = Search(boosted, "bedok").at(0);
  EXPECT_NEAR(e.log_posterior, std::log(0.5), 1e-12);
  EXPECT_DOUBLE_EQ(e.bonus, std::log(2.0));
  EXPECT_EQ(Search(boosted, "b"), Search(idx, "b"));
  EXPECT_THROW(BoostIndex(idx, {"bedok"}, -1.0), Error);
  EXPECT_THROW(BoostIndex(idx, {"bedok"}, NAN), Error);
}

TEST(BoostTest, FlipThreshold) {
  Lattice lat = testing::DiamondLattice();
  const double b_star = std::log(3.0);
  auto words = [&](double b) { return JoinTokens(BoostedBestPath(lat, {"bedok"}, b, kScales).words); };
  EXPECT_EQ(words(0.0), "a b c");
  EXPECT_EQ(words(b_star * (1.0 - 1e-6)), "a b c");
  EXPECT_EQ(words(b_star * (1.0 + 1e-6)), "a bedok c");
  EXPECT_EQ(words(kDefaultBoostBonus), "a bedok c");
}

TEST(BoostTest, ZeroBonusIsIdentity) {
  Lattice lat = testing::DiamondLattice();
  InvertedIndex boosted = BoostIndex(BuildIndex({lat}, kScales), {"bedok"}, 0.0);
  EXPECT_EQ(WriteLattice(RegenerateLattice(lat, boosted, kScales)), WriteLattice(lat));
}

TEST(BoostTest, OnlyNamedArcsChange) {
  Rng rng(8);
  std::vector<Lattice> lats;
  for (int i = 0; i < 4; ++i)
    lats.push_back(testing::RandomLattice(rng, 8, 100, {"a", "b", "bedok", "jurong"}, 0.1,
                                          "u" + std::to_string(i)));
  ScaleConfig sc{0.1, 2.0};
  InvertedIndex boosted = BoostIndex(BuildIndex(lats, sc, 2), {"bedok", "jurong"}, 1.5);
  for (const auto &lat : lats) {
    Lattice out = RegenerateLattice(lat, boosted, sc);
    ASSERT_EQ(out.NumArcs(), lat.NumArcs());
    for (size_t a = 0; a < lat.NumArcs(); ++a) {
      const Arc &x = lat.Arcs()[a], &y = out.Arcs()[a];
      EXPECT_EQ(x.source, y.source);
      EXPECT_EQ(x.target, y.target);
      EXPECT_EQ(x.acoustic_score, y.acoustic_score);
      bool ne = x.word == "bedok" || x.word == "jurong";
      if (ne) EXPECT_NEAR(y.lm_score, x.lm_score + 0.75, 1e-12);
      else EXPECT_EQ(x.lm_score, y.lm_score);
    }
  }
}

TEST(BoostTest, ParallelIndexMatchesSerial) {
  Rng rng(2);
  std::vector<Lattice> lats;
  for (int i = 0; i < 6; ++i)
    lats.push_back(testing::RandomLattice(rng, 9, 100, {"a", "b", "c"}, 0.1, "u" + std::to_string(i)));
  EXPECT_EQ(WriteIndex(BuildIndex(lats, kScales, 1)), WriteIndex(BuildIndex(lats, kScales, 3)));
}

TEST(BoostTest, DanglingEntry) {
  Lattice lat = testing::DiamondLattice();
  IndexEntry e{"bedok", "diamond", 10, 20, 0.0, 1, 1.0};
  InvertedIndex bad(InvertedIndex::Map{{"bedok", {e}}});
  EXPECT_THROW(RegenerateLattice(lat, bad, kScales), Error);
  e.arc_index = 99;
  EXPECT_THROW(RegenerateLattice(lat, InvertedIndex(InvertedIndex::Map{{"bedok", {e}}}), kScales),
               Error);
  // Entries for other utterances are ignored.
  e.utterance_id = "other";
  EXPECT_NO_THROW(
      RegenerateLattice(lat, InvertedIndex(InvertedIndex::Map{{"bedok", {e}}}), kScales));
  EXPECT_THROW(InvertedIndex(InvertedIndex::Map{{"jurong", {e}}}), Error);
}

TEST(BoostTest, IndexFileRoundTrip) {
  InvertedIndex idx = BuildIndex({testing::DiamondLattice()}, kScales);
  InvertedIndex boosted = BoostIndex(idx, {"bedok"}, kDefaultBoostBonus);
  for (const auto *x : {&idx, &boosted}) {
    std::string text = WriteIndex(*x);
    EXPECT_EQ(WriteIndex(ReadIndex(text)), text);
  }
  EXPECT_NE(WriteIndex(boosted).find("bedok\tdiamond\t10\t20\t"), std::string::npos);
  EXPECT_THROW(ReadIndex("a\tu\t1\t2\t-1\n"), ParseError);
  EXPECT_THROW(ReadIndex("a\tu\t3\t2\t-1\t0\n"), ParseError);
  EXPECT_THROW(ReadIndex("a\tu\t1\t2\tx\t0\n"), ParseError);
  EXPECT_EQ(ReadTokenSet("bedok\njurong tampines\n\n").size(), 3u);
}

}  // namespace
}  // namespace nerlat
