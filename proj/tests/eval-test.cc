// tests/eval-test.cc

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

#include "nerlat/eval.h"

namespace nerlat {
namespace {

std::vector<std::string> T(const std::string &s) { return SplitTokens(s); }

size_t EditDistance(const std::vector<std::string> &a, const std::vector<std::string> &b) {
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

TEST(EvalTest, Classify) {
  std::vector<Sentence> train{{"bedok", "bedok", "jurong"}};
  NEInventory inv = ClassifyNes({"bedok", "jurong", "punggol"}, train, 2);
  EXPECT_EQ(inv.excluded, (std::set<std::string>{"bedok"}));
  EXPECT_EQ(inv.rare, (std::set<std::string>{"jurong"}));
  EXPECT_EQ(inv.oov, (std::set<std::string>{"punggol"}));
  EXPECT_EQ(inv.counts.at("bedok"), 2);
  EXPECT_THROW(ClassifyNes({}, train, 0), Error);
}

TEST(EvalTest, AlignmentTieBreak) {
  // Equal cost: one substitution beats a deletion plus insertion.
  auto al = Align(T("a b"), T("a c"));
  EXPECT_EQ(al.Errors(), 1u);
  EXPECT_EQ(al.Count(EditOp::kSub), 1u);
  // Substitute the first word and delete the second rather than the reverse.
  al = Align(T("x y"), T("z"));
  ASSERT_EQ(al.ops.size(), 2u);
  EXPECT_EQ(al.ops[0].op, EditOp::kDel);
  EXPECT_EQ(al.ops[1].op, EditOp::kSub);
  EXPECT_EQ(*al.ops[1].ref, "y");
  al = Align({}, T("p q"));
  EXPECT_EQ(al.Count(EditOp::kIns), 2u);
}

TEST(EvalTest, NeWerFixtures) {
  std::vector<Sentence> train{{"jurong"}};
  NEInventory inv = ClassifyNes({"jurong", "punggol", "mei_ling"}, train, 10);
  std::vector<RefHyp> pairs{
      {T("go to punggol now"), T("go to bedok now")},     // sub of oov
      {T("meet mei_ling at jurong"), T("meet mei_ling at jurong")},
      {T("jurong east"), T("east")},                       // del of rare
      {T("punggol"), T("punggol punggol")},                // insertion only
  };
  NeWerResult r = NeWer(pairs, inv);
  EXPECT_EQ(r.total, 5u);
  EXPECT_EQ(r.errors, 2u);
  EXPECT_EQ(r.oov_total, 3u);
  EXPECT_EQ(r.oov_errors, 1u);
  EXPECT_EQ(r.rare_total, 2u);
  EXPECT_EQ(r.rare_errors, 1u);
  EXPECT_DOUBLE_EQ(*r.Overall(), 40.0);
  // The overall rate is the occurrence-weighted mean of the two classes.
  double mixed = (*r.Rare() * r.rare_total + *r.Oov() * r.oov_total) / r.total;
  EXPECT_DOUBLE_EQ(*r.Overall(), mixed);

  WerStats w = ComputeWerStats(pairs);
  EXPECT_EQ(w.ref_words, 11u);
  EXPECT_EQ(w.substitutions, 1u);
  EXPECT_EQ(w.deletions, 1u);
  EXPECT_EQ(w.insertions, 1u);
  EXPECT_DOUBLE_EQ(w.Wer(), 300.0 / 11.0);
}

TEST(EvalTest, NoEntitiesIsAbsent) {
  NEInventory inv = ClassifyNes({"punggol"}, {}, 10);
  NeWerResult r = NeWer({{T("a b"), T("a")}}, inv);
  EXPECT_FALSE(r.Overall().has_value());
  EXPECT_EQ(FormatRate(r.Overall()), "absent");
  EXPECT_THROW(Wer({{{}, T("a")}}), Error);
}

TEST(EvalTest, ScoreReport) {
  NEInventory inv = ClassifyNes({"punggol"}, {}, 10);
  std::vector<RefHyp> pairs{{T("go punggol"), T("go bedok")}};
  std::string rep = ScoreReport(ComputeWerStats(pairs), NeWer(pairs, inv));
  EXPECT_EQ(rep,
            "WER=50.00\nNE-WER=100.00\nNE-WER_rare=absent\nNE-WER_oov=100.00\nE_NE=1\nN_NE=1\n");
}

TEST(EvalTest, RandomPairsMatchEditDistance) {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> ref, hyp;
    for (int64_t i = rng.Range(0, 8); i > 0; --i) ref.push_back("w" + std::to_string(rng.Below(4)));
    for (int64_t i = rng.Range(0, 8); i > 0; --i) hyp.push_back("w" + std::to_string(rng.Below(4)));
    Alignment al = Align(ref, hyp);
    EXPECT_EQ(al.Errors(), EditDistance(ref, hyp));
    std::vector<std::string> r2, h2;
    for (const auto &p : al.ops) {
      if (p.ref) r2.push_back(*p.ref);
      if (p.hyp) h2.push_back(*p.hyp);
      EXPECT_EQ(p.op == EditOp::kMatch, p.ref && p.hyp && *p.ref == *p.hyp);
    }
    EXPECT_EQ(r2, ref);
    EXPECT_EQ(h2, hyp);
  }
}

TEST(EvalTest, Transcripts) {
  Transcripts t = ReadTranscripts("u1\tgo to bedok\nu2 meet mei_ling\n\nu3\t\n");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.at("u1"), T("go to bedok"));
  EXPECT_EQ(t.at("u2"), T("meet mei_ling"));
  EXPECT_TRUE(t.at("u3").empty());
  EXPECT_EQ(ReadTranscripts(WriteTranscripts(t)), t);
  EXPECT_THROW(ReadTranscripts("u1\ta\nu1\tb\n"), ParseError);
  auto pairs = PairTranscripts(t, Transcripts{{"u1", T("go")}});
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0].second, T("go"));
  EXPECT_TRUE(pairs[1].second.empty());
  EXPECT_THROW(PairTranscripts(t, Transcripts{{"u9", T("go")}}), Error);
}

}  // namespace
}  // namespace nerlat
