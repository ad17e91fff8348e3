// tests/augment-test.cc

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

#include "nerlat/augment.h"

namespace nerlat {
namespace {

NeuralLM TwoDimModel() {
  NeuralLMConfig c;
  c.dim = 2;
  NeuralLM lm({"tampines", "bedok", "jurong", "clementi", "go"}, c);
  lm.RandomInit(11);
  lm.MutableE().row(lm.WordId("tampines")) << 1.0, 1.0;
  lm.MutableE().row(lm.WordId("bedok")) << 3.0, 1.0;
  lm.MutableE().row(lm.WordId("jurong")) << 1.0, -1.0;
  return lm;
}

TEST(AugmentTest, WorkedExample) {
  NeuralLM lm = TwoDimModel();
  AugmentationPlan p{"tampines", {"bedok", "jurong"}, 0.09, false};
  NeuralLM out = AugmentEmbeddings(lm, {p});
  auto row = out.E().row(out.WordId("tampines"));
  EXPECT_NEAR(row[0], 2.09, 1e-15);
  EXPECT_NEAR(row[1], 0.09, 1e-15);
}

TEST(AugmentTest, OtherParametersUntouched) {
  NeuralLM lm = TwoDimModel();
  NeuralLM out = AugmentEmbeddings(lm, {{"tampines", {"bedok", "jurong"}, 0.5, false}});
  for (Eigen::Index r = 0; r < lm.E().rows(); ++r) {
    if (r != lm.WordId("tampines")) {
      EXPECT_TRUE(out.E().row(r) == lm.E().row(r));
    }
  }
  EXPECT_TRUE(out.Wx() == lm.Wx());
  EXPECT_TRUE(out.Wh() == lm.Wh());
  EXPECT_TRUE(out.Bh() == lm.Bh());
  EXPECT_TRUE(out.Bo() == lm.Bo());
}

TEST(AugmentTest, PlansReadOriginalEmbeddings) {
  NeuralLM lm = TwoDimModel();
  // bedok is both a target and another plan's candidate.
  std::vector<AugmentationPlan> plans{{"bedok", {"jurong"}, 0.0, false},
                                      {"tampines", {"bedok"}, 0.0, false}};
  NeuralLM out = AugmentEmbeddings(lm, plans);
  EXPECT_TRUE(out.E().row(out.WordId("tampines")) == lm.E().row(lm.WordId("bedok")));
  EXPECT_TRUE(out.E().row(out.WordId("bedok")) == lm.E().row(lm.WordId("jurong")));
  std::reverse(plans.begin(), plans.end());
  EXPECT_TRUE(AugmentEmbeddings(lm, plans).E() == out.E());
}

TEST(AugmentTest, ThetaSweep) {
  NeuralLM lm = TwoDimModel();
  Eigen::RowVector2d e(1.0, 1.0), mean(2.0, 0.0);
  for (double theta : {0.0, 0.01, 0.09, 1.0}) {
    NeuralLM out = AugmentEmbeddings(lm, {{"tampines", {"bedok", "jurong"}, theta, false}});
    EXPECT_TRUE(out.E().row(out.WordId("tampines")).isApprox(theta * e + mean, 1e-15));
  }
}

TEST(AugmentTest, MissingTargetAppended) {
  NeuralLM lm = TwoDimModel();
  NeuralLM out = AugmentEmbeddings(lm, {{"punggol", {"bedok", "jurong"}, 0.01, true}});
  ASSERT_TRUE(out.InVocab("punggol"));
  EXPECT_EQ(out.VocabSize(), lm.VocabSize() + 1);
  auto row = out.E().row(out.WordId("punggol"));
  EXPECT_DOUBLE_EQ(row[0], 2.0);
  EXPECT_DOUBLE_EQ(row[1], 0.0);
}

TEST(AugmentTest, Errors) {
  NeuralLM lm = TwoDimModel();
  EXPECT_THROW(AugmentEmbeddings(lm, {{"tampines", {"nowhere"}, 0.1, false}}), Error);
  EXPECT_THROW(AugmentEmbeddings(lm, {{"tampines", {}, 0.1, false}}), Error);
  EXPECT_THROW(AugmentEmbeddings(lm, {{"tampines", {"tampines"}, 0.1, false}}), Error);
  EXPECT_THROW(AugmentEmbeddings(lm, {{"tampines", {"bedok"}, -1.0, false}}), Error);
  EXPECT_THROW(AugmentEmbeddings(lm, {{"tampines", {"bedok"}, 0.1, false},
                                      {"tampines", {"jurong"}, 0.1, false}}),
               Error);
}

TEST(AugmentTest, BuildPlans) {
  std::vector<Sentence> train{{"go", "bedok"}, {"go", "jurong"}};
  NEInventory inv = ClassifyNes({"bedok", "punggol"}, train, 10);
  std::set<std::string> vocab{"tampines", "jurong", "clementi", "bedok"};
  CandidateMap m{{"bedok", {"tampines", "jurong", "clementi"}},
                 {"punggol", {"jurong", "clementi", "tampines"}}};
  auto plans = BuildPlans(inv, m, vocab, 2);
  ASSERT_EQ(plans.size(), 2u);
  EXPECT_EQ(plans[0].target, "bedok");
  EXPECT_FALSE(plans[0].oov);
  EXPECT_DOUBLE_EQ(plans[0].theta, kDefaultThetaRare);
  EXPECT_EQ(plans[0].candidates, (std::vector<std::string>{"tampines", "jurong"}));
  EXPECT_TRUE(plans[1].oov);
  EXPECT_DOUBLE_EQ(plans[1].theta, kDefaultThetaOov);
  EXPECT_THROW(BuildPlans(inv, m, vocab, 4), Error);
  EXPECT_THROW(BuildPlans(inv, m, {"tampines"}, 2), Error);
  EXPECT_THROW(BuildPlans(inv, {{"bedok", {"jurong"}}}, vocab, 1), Error);
  EXPECT_THROW(BuildPlans(inv, m, vocab, 0), Error);
  EXPECT_NE(WritePlans(plans).find("punggol\toov\t0.01\tjurong clementi"), std::string::npos);
}

TEST(AugmentTest, SelectFrequentCandidates) {
  std::vector<Sentence> train{{"bedok", "bedok", "jurong"}, {"clementi", "jurong", "bedok"},
                              {"yishun"}};
  auto m = SelectFrequentCandidates({"bedok", "punggol"},
                                    {"bedok", "jurong", "clementi", "yishun", "unseen"}, train, 2);
  EXPECT_EQ(m.at("bedok"), (std::vector<std::string>{"jurong", "clementi"}));
  EXPECT_EQ(m.at("punggol"), (std::vector<std::string>{"bedok", "jurong"}));
  EXPECT_THROW(SelectFrequentCandidates({"x"}, {"bedok"}, train, 2), Error);
}

TEST(AugmentTest, CandidateFileRoundTrip) {
  CandidateMap m{{"bedok", {"jurong", "clementi"}}, {"punggol", {"yishun"}}};
  EXPECT_EQ(ReadCandidateMap(WriteCandidateMap(m)), m);
  EXPECT_THROW(ReadCandidateMap("bedok jurong\n"), ParseError);
  EXPECT_THROW(ReadCandidateMap("a\tb\na\tc\n"), ParseError);
}

}  // namespace
}  // namespace nerlat
