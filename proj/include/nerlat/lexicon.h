// nerlat/lexicon.h

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

// Graphemic lexicons. Each letter of a word becomes one unit tagged with its
// position in the word: _B (begin), _I (internal), _E (end), _S (singleton).
// The underscore that joins multi-word named entities becomes the unit
// SIL_I. Phonetic lexicons are accepted as input only.

#ifndef NERLAT_LEXICON_H_
#define NERLAT_LEXICON_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nerlat/base.h"

namespace nerlat {

inline const std::string kJoinUnit = "SIL_I";

enum class LexiconKind { kGraphemic, kPhonetic };

inline std::string KindName(LexiconKind k) {
  return k == LexiconKind::kGraphemic ? "graphemic" : "phonetic";
}

using Pronunciation = std::vector<std::string>;

/// "boon_lay" -> b_B o_I o_I n_I SIL_I l_I a_I y_E.
inline Pronunciation Graphemize(const std::string &word) {
  if (word.empty()) throw Error("cannot graphemize an empty word");
  for (size_t i = 0; i < word.size(); ++i) {
    char c = word[i];
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'' || c == '_';
    if (!ok) throw Error("unsupported character '" + std::string(1, c) + "' in '" + word + "'");
    if (c == '_' && (i == 0 || i + 1 == word.size() || word[i - 1] == '_'))
      throw Error("misplaced underscore in '" + word + "'");
  }
  Pronunciation units;
  units.reserve(word.size());
  if (word.size() == 1) {
    units.push_back(word + "_S");
    return units;
  }
  for (size_t i = 0; i < word.size(); ++i) {
    if (word[i] == '_') {
      units.push_back(kJoinUnit);
      continue;
    }
    const char *tag = i == 0 ? "_B" : i + 1 == word.size() ? "_E" : "_I";
    units.push_back(std::string(1, word[i]) + tag);
  }
  return units;
}

/// Inverse of Graphemize: strips position tags, SIL units become '_'.
inline std::string Ungraphemize(const Pronunciation &units) {
  std::string word;
  for (const auto &u : units) {
    if (u == kJoinUnit) {
      word += '_';
      continue;
    }
    if (u.size() != 3 || u[1] != '_') throw Error("not a grapheme unit: " + u);
    word += u[0];
  }
  return word;
}

/// Multi-word named entities are joined with '_'.
inline std::string JoinMultiword(const std::vector<std::string> &words) {
  if (words.empty()) throw Error("cannot join an empty word list");
  for (const auto &w : words)
    if (w.empty()) throw Error("cannot join an empty token");
  return JoinTokens(words, "_");
}

class Lexicon {
 public:
  explicit Lexicon(LexiconKind kind = LexiconKind::kGraphemic) : kind_(kind) {}

  LexiconKind Kind() const { return kind_; }
  const std::map<std::string, std::vector<Pronunciation>> &Entries() const {
    return entries_;
  }
  const std::set<std::string> &Units() const { return units_; }
  size_t NumWords() const { return entries_.size(); }
  bool Contains(const std::string &w) const { return entries_.count(w) != 0; }
  std::set<std::string> Words() const {
    std::set<std::string> out;
    for (const auto &[w, p] : entries_) out.insert(w);
    return out;
  }

  /// Graphemic lexicons hold exactly one pronunciation per word.
  void Add(const std::string &word, Pronunciation pron) {
    if (word.empty() || pron.empty()) throw Error("empty lexicon entry");
    auto &prons = entries_[word];
    if (kind_ == LexiconKind::kGraphemic && !prons.empty()) {
      if (prons.front() != pron)
        throw Error("graphemic lexicon allows one pronunciation per word: " + word);
      return;
    }
    if (std::find(prons.begin(), prons.end(), pron) != prons.end()) return;
    for (const auto &u : pron) units_.insert(u);
    prons.push_back(std::move(pron));
  }

 private:
  LexiconKind kind_;
  std::map<std::string, std::vector<Pronunciation>> entries_;
  std::set<std::string> units_;
};

inline Lexicon BuildGraphemicLexicon(const std::set<std::string> &words) {
  Lexicon lex(LexiconKind::kGraphemic);
  for (const auto &w : words) lex.Add(w, Graphemize(w));
  return lex;
}

struct ExpansionResult {
  Lexicon lexicon;
  size_t added = 0;
};

/// Adds graphemic entries for words not yet present. Phonetic lexicons need
/// pronunciations from elsewhere; see the overload below.
inline ExpansionResult ExpandLexicon(const Lexicon &lex,
                                     const std::vector<std::string> &new_words) {
  if (lex.Kind() != LexiconKind::kGraphemic)
    throw Error("phonetic lexicon expansion needs supplied pronunciations");
  ExpansionResult r{lex, 0};
  for (const auto &w : new_words) {
    if (r.lexicon.Contains(w)) continue;
    r.lexicon.Add(w, Graphemize(w));
    ++r.added;
  }
  return r;
}

inline ExpansionResult ExpandLexicon(
    const Lexicon &lex, const std::map<std::string, std::vector<Pronunciation>> &prons) {
  ExpansionResult r{lex, 0};
  for (const auto &[w, ps] : prons) {
    if (r.lexicon.Contains(w)) continue;
    if (ps.empty()) throw Error("no pronunciation supplied for " + w);
    for (const auto &p : ps) r.lexicon.Add(w, p);
    ++r.added;
  }
  return r;
}

// Text format: "# kind: graphemic|phonetic" header, then
// "word<TAB>unit unit ..." with one pronunciation per line.

inline std::string WriteLexicon(const Lexicon &lex) {
  std::string out = "# kind: " + KindName(lex.Kind()) + "\n";
  for (const auto &[w, prons] : lex.Entries())
    for (const auto &p : prons) out += w + "\t" + JoinTokens(p) + "\n";
  return out;
}

inline Lexicon ReadLexicon(const std::string &text) {
  auto lines = SplitLines(text);
  std::optional<Lexicon> lex;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string &line = lines[i];
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("kind:");
      if (pos == std::string::npos) continue;
      auto toks = SplitWhitespace(std::string_view(line).substr(pos + 5));
      if (toks.size() != 1) throw ParseError(i + 1, "malformed kind header");
      if (lex) throw ParseError(i + 1, "duplicate kind header");
      if (toks[0] == "graphemic") lex.emplace(LexiconKind::kGraphemic);
      else if (toks[0] == "phonetic") lex.emplace(LexiconKind::kPhonetic);
      else throw ParseError(i + 1, "unknown lexicon kind '" + std::string(toks[0]) + "'");
      continue;
    }
    if (!lex) throw ParseError(i + 1, "missing '# kind:' header");
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError(i + 1, "expected word<TAB>units");
    auto units = SplitTokens(std::string_view(line).substr(tab + 1));
    if (units.empty()) throw ParseError(i + 1, "empty pronunciation");
    try {
      lex->Add(line.substr(0, tab), std::move(units));
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(i + 1, e.what());
    }
  }
  if (!lex) throw ParseError(1, "missing '# kind:' header");
  return *lex;
}

}  // namespace nerlat

#endif  // NERLAT_LEXICON_H_
