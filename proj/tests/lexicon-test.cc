// tests/lexicon-test.cc

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

#include "nerlat/lexicon.h"

namespace nerlat {
namespace {

using P = Pronunciation;

TEST(LexiconTest, GraphemizeExamples) {
  EXPECT_EQ(Graphemize("a"), (P{"a_S"}));
  EXPECT_EQ(Graphemize("bedok"), (P{"b_B", "e_I", "d_I", "o_I", "k_E"}));
  EXPECT_EQ(Graphemize("boon_lay"),
            (P{"b_B", "o_I", "o_I", "n_I", "SIL_I", "l_I", "a_I", "y_E"}));
  EXPECT_EQ(Graphemize("7"), (P{"7_S"}));
  EXPECT_EQ(Graphemize("don't"), (P{"d_B", "o_I", "n_I", "'_I", "t_E"}));
}

TEST(LexiconTest, GraphemizeRejects) {
  EXPECT_THROW(Graphemize(""), Error);
  EXPECT_THROW(Graphemize("Bedok"), Error);
  EXPECT_THROW(Graphemize("a-b"), Error);
  EXPECT_THROW(Graphemize("_ab"), Error);
  EXPECT_THROW(Graphemize("ab_"), Error);
  EXPECT_THROW(Graphemize("a__b"), Error);
}

TEST(LexiconTest, RoundTripAndTags) {
  Rng rng(7);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789'";
  for (int trial = 0; trial < 500; ++trial) {
    std::string w;
    int parts = static_cast<int>(rng.Range(1, 3));
    for (int p = 0; p < parts; ++p) {
      if (p) w += '_';
      int len = static_cast<int>(rng.Range(1, 8));
      for (int i = 0; i < len; ++i) w += alphabet[rng.Below(alphabet.size())];
    }
    P units = Graphemize(w);
    EXPECT_EQ(Ungraphemize(units), w);
    size_t singles = 0;
    for (const auto &u : units) {
      if (u == kJoinUnit) continue;
      ASSERT_EQ(u.size(), 3u);
      std::string tag = u.substr(1);
      EXPECT_TRUE(tag == "_B" || tag == "_I" || tag == "_E" || tag == "_S") << u;
      singles += tag == "_S";
    }
    EXPECT_EQ(singles, w.size() == 1 ? 1u : 0u);
  }
}

TEST(LexiconTest, JoinMultiword) {
  EXPECT_EQ(JoinMultiword({"boon", "lay"}), "boon_lay");
  EXPECT_EQ(JoinMultiword({"bedok"}), "bedok");
  EXPECT_EQ(JoinMultiword({"ang", "mo", "kio"}), "ang_mo_kio");
  EXPECT_THROW(JoinMultiword({}), Error);
  EXPECT_THROW(JoinMultiword({"a", ""}), Error);
}

TEST(LexiconTest, ExpandCounts) {
  Lexicon base = BuildGraphemicLexicon({"go", "to", "road"});
  ExpansionResult r = ExpandLexicon(base, std::vector<std::string>{"bedok", "boon_lay"});
  EXPECT_EQ(r.lexicon.NumWords(), 5u);
  EXPECT_EQ(r.added, 2u);
  EXPECT_EQ(base.NumWords(), 3u);
  ExpansionResult again = ExpandLexicon(r.lexicon, std::vector<std::string>{"bedok"});
  EXPECT_EQ(again.added, 0u);
  EXPECT_EQ(again.lexicon.NumWords(), 5u);
  EXPECT_EQ(WriteLexicon(again.lexicon), WriteLexicon(r.lexicon));
  for (const auto &[w, prons] : r.lexicon.Entries())
    for (const auto &p : prons)
      for (const auto &u : p) EXPECT_TRUE(r.lexicon.Units().count(u));
}

TEST(LexiconTest, ExpandAtReportedScale) {
  // 16,345 baseline tokens plus 506 new unique tokens.
  std::set<std::string> words;
  char buf[16];
  for (int i = 0; i < 16345; ++i) {
    std::snprintf(buf, sizeof(buf), "w%05d", i);
    words.insert(buf);
  }
  std::vector<std::string> add;
  for (int i = 0; i < 506; ++i) {
    std::snprintf(buf, sizeof(buf), "oov%03d", i);
    add.push_back(buf);
  }
  add.push_back("w00000");  // already present
  ExpansionResult r = ExpandLexicon(BuildGraphemicLexicon(words), add);
  EXPECT_EQ(r.added, 506u);
  EXPECT_EQ(r.lexicon.NumWords(), 16851u);
}

TEST(LexiconTest, PhoneticNeedsPronunciations) {
  Lexicon ph(LexiconKind::kPhonetic);
  ph.Add("tomato", {"t", "ah", "m", "ey", "t", "ow"});
  ph.Add("tomato", {"t", "ah", "m", "aa", "t", "ow"});
  EXPECT_EQ(ph.Entries().at("tomato").size(), 2u);
  EXPECT_THROW(ExpandLexicon(ph, std::vector<std::string>{"bedok"}), Error);
  ExpansionResult r = ExpandLexicon(ph, std::map<std::string, std::vector<P>>{
                                            {"bedok", {{"b", "eh", "d", "ao", "k"}}}});
  EXPECT_EQ(r.added, 1u);
  EXPECT_EQ(r.lexicon.Kind(), LexiconKind::kPhonetic);
}

TEST(LexiconTest, GraphemicSinglePronunciation) {
  Lexicon g = BuildGraphemicLexicon({"ab"});
  EXPECT_NO_THROW(g.Add("ab", Graphemize("ab")));
  EXPECT_THROW(g.Add("ab", {"x_S"}), Error);
}

TEST(LexiconTest, FileRoundTrip) {
  Lexicon g = BuildGraphemicLexicon({"boon_lay", "a", "bedok"});
  std::string text = WriteLexicon(g);
  EXPECT_EQ(text.substr(0, 18), "# kind: graphemic\n");
  Lexicon back = ReadLexicon(text);
  EXPECT_EQ(WriteLexicon(back), text);
  EXPECT_THROW(ReadLexicon("a\ta_S\n"), ParseError);
  EXPECT_THROW(ReadLexicon("# kind: klingon\n"), ParseError);
  EXPECT_THROW(ReadLexicon("# kind: graphemic\nab a_B b_E\n"), ParseError);
}

}  // namespace
}  // namespace nerlat
