// tests/synth-test.cc

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

#include "nerlat/synth.h"

namespace nerlat {
namespace {

SynthConfig SmallConfig() {
  SynthConfig c;
  c.num_frequent = 12;
  c.num_rare = 6;
  c.num_oov = 6;
  c.train_sentences = 800;
  c.test_sentences = 40;
  c.num_candidates = 3;
  c.confusion_depth = 3;
  c.min_first_pass_oov_ne_wer = 0.0;
  return c;
}

TEST(SynthTest, ClassificationMatchesConstruction) {
  SynthConfig cfg;
  cfg.num_frequent = 50;
  cfg.num_rare = 10;
  cfg.num_oov = 10;
  SynthCorpus c = GenerateCorpus(cfg);
  NEInventory inv = ClassifyNes(c.NeList(), c.train, cfg.threshold);
  std::set<std::string> rare, oov;
  for (const auto &e : c.rare) rare.insert(e.word);
  for (const auto &e : c.oov) oov.insert(e.word);
  EXPECT_EQ(inv.rare, rare);
  EXPECT_EQ(inv.oov, oov);
  EXPECT_TRUE(inv.excluded.empty());
  // Frequent entities clear the threshold and are not in the NE list.
  std::vector<std::string> freq;
  for (const auto &e : c.frequent) freq.push_back(e.word);
  EXPECT_TRUE(ClassifyNes(freq, c.train, cfg.threshold).All().empty());
  // Every NE occurs test_occurrences times in the test references.
  std::map<std::string, size_t> test_counts;
  for (const auto &[utt, ref] : c.test)
    for (const auto &w : ref) ++test_counts[w];
  for (const auto &w : c.NeList()) EXPECT_EQ(test_counts[w], cfg.test_occurrences) << w;
}

TEST(SynthTest, ConfigValidation) {
  SynthConfig c = SmallConfig();
  c.threshold = 1;
  EXPECT_THROW(GenerateCorpus(c), Error);
  c = SmallConfig();
  c.test_occurrences = 1;
  EXPECT_THROW(c.Check(), Error);
  c = SmallConfig();
  c.num_frequent = 4;
  EXPECT_THROW(c.Check(), Error);
  c = SmallConfig();
  c.ne_margin_sigma = -1.0;
  EXPECT_THROW(c.Check(), Error);
}

TEST(SynthTest, Deterministic) {
  auto a = FixtureFiles(GenerateFixture(SmallConfig()));
  auto b = FixtureFiles(GenerateFixture(SmallConfig()));
  EXPECT_EQ(a, b);
  SynthConfig other = SmallConfig();
  other.seed = 2;
  EXPECT_NE(FixtureFiles(GenerateFixture(other)).at("train.txt"), a.at("train.txt"));
  EXPECT_EQ(a.size(), 7u);
}

TEST(SynthTest, LatticesSurviveTextFormat) {
  SynthFixture f = GenerateFixture(SmallConfig());
  std::string text = WriteLattices(f.lattices);
  auto back = ReadLattices(text);
  ASSERT_EQ(back.size(), f.lattices.size());
  for (size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i].Arcs(), f.lattices[i].Arcs());
  EXPECT_EQ(WriteLattices(back), text);
}

TEST(SynthTest, ReferenceInEveryLattice) {
  SynthFixture f = GenerateFixture(SmallConfig());
  ASSERT_EQ(f.lattices.size(), f.corpus.test.size());
  size_t i = 0;
  for (const auto &[utt, ref] : f.corpus.test) {
    const Lattice &lat = f.lattices[i++];
    EXPECT_EQ(lat.UtteranceId(), utt);
    ASSERT_EQ(lat.NumNodes(), ref.size() + 1);
    for (size_t k = 0; k < ref.size(); ++k) {
      bool found = false;
      for (int32_t a : lat.OutArcs(lat.IndexOf(static_cast<int32_t>(k))))
        found |= lat.Arcs()[a].word == ref[k];
      EXPECT_TRUE(found) << utt << " position " << k;
    }
    for (const Arc &a : lat.Arcs()) EXPECT_EQ(a.lm_score, 0.0);
  }
}

TEST(SynthTest, ZeroSigmaReferenceIsBest) {
  SynthConfig c = SmallConfig();
  c.ne_margin_sigma = 0.0;
  c.filler_margin_sigma = 0.0;
  SynthFixture f = GenerateFixture(c);
  size_t i = 0;
  for (const auto &[utt, ref] : f.corpus.test)
    EXPECT_EQ(BestPath(f.lattices[i++], ScaleConfig{}).words, ref) << utt;
}

TEST(SynthTest, CandidatesShareType) {
  SynthConfig cfg = SmallConfig();
  SynthFixture f = GenerateFixture(cfg);
  auto cats = EntityCategories(f.corpus);
  std::set<std::string> frequent;
  for (const auto &e : f.corpus.frequent) frequent.insert(e.word);
  ASSERT_EQ(f.candidates.size(), f.corpus.NeList().size());
  for (const auto &[ne, cands] : f.candidates) {
    EXPECT_EQ(cands.size(), cfg.num_candidates);
    for (const auto &c : cands) {
      EXPECT_TRUE(frequent.count(c)) << c;
      EXPECT_EQ(cats.at(c), cats.at(ne));
    }
  }
}

TEST(SynthTest, FirstPassFloor) {
  SynthConfig c = SmallConfig();
  c.min_first_pass_oov_ne_wer = 101.0;
  c.max_attempts = 2;
  EXPECT_THROW(GenerateFixture(c), Error);
  c.min_first_pass_oov_ne_wer = 1.0;
  c.ne_margin_mean = 5.0;
  c.ne_margin_sigma = 1.0;
  SynthFixture f = GenerateFixture(c);
  EXPECT_GE(f.first_pass_oov_ne_wer, 1.0);
}

TEST(SynthTest, ConfigFile) {
  SynthConfig c = SmallConfig();
  c.seed = 17;
  c.multiword_prob = 0.25;
  std::string text = WriteSynthConfig(c);
  EXPECT_EQ(WriteSynthConfig(ParseSynthConfig(text)), text);
  EXPECT_EQ(ParseSynthConfig("# comment\nseed = 5\n\n").seed, 5u);
  EXPECT_THROW(ParseSynthConfig("seeds=5\n"), Error);
  EXPECT_THROW(ParseSynthConfig("seed=5\nseed=6\n"), Error);
  EXPECT_THROW(ParseSynthConfig("seed 5\n"), Error);
  EXPECT_THROW(ParseSynthConfig("seed=five\n"), Error);
  EXPECT_THROW(ParseSynthConfig("threshold=1\n"), Error);
  EXPECT_EQ(WriteSynthConfig(AblationPreset()), WriteSynthConfig(SynthConfig{}));
}

}  // namespace
}  // namespace nerlat
