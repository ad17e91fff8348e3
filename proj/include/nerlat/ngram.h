// nerlat/ngram.h

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

// Interpolated Kneser-Ney backoff n-gram models with one absolute discount
// per order, D = n1 / (n1 + 2 n2), estimated from the count-of-counts of the
// counts used at that order (raw counts at the top order, continuation
// counts below, raw counts for n-grams that start with <s>). The unigram
// level interpolates with the uniform distribution over the vocabulary.
//
// Probabilities are stored as log10, as in ARPA files.

#ifndef NERLAT_NGRAM_H_
#define NERLAT_NGRAM_H_

#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nerlat/base.h"

namespace nerlat {

inline const std::string kBos = "<s>";
inline const std::string kEos = "</s>";
inline const std::string kUnk = "<unk>";

/// log10 probability written for <s>, which is never predicted.
inline constexpr double kArpaLogZero = -99.0;

using Sentence = std::vector<std::string>;

class NGramLM {
 public:
  struct Entry {
    double logprob = 0.0;  // log10
    double backoff = 0.0;  // log10
    bool has_backoff = false;
  };
  using Key = std::vector<int32_t>;
  using Table = std::map<Key, Entry>;

  NGramLM() = default;

  /// `tables[k]` holds (k+1)-grams. Models without <s>, </s> or <unk> load,
  /// but cannot score sentences or unknown words.
  NGramLM(std::vector<std::string> vocab, std::vector<Table> tables)
      : vocab_(std::move(vocab)), tables_(std::move(tables)) {
    if (tables_.empty()) throw Error("n-gram model needs at least one order");
    for (size_t i = 0; i < vocab_.size(); ++i)
      if (!ids_.emplace(vocab_[i], static_cast<int32_t>(i)).second)
        throw Error("duplicate vocabulary word " + vocab_[i]);
    auto id_or_none = [&](const std::string &w) {
      auto it = ids_.find(w);
      return it == ids_.end() ? -1 : it->second;
    };
    bos_ = id_or_none(kBos);
    eos_ = id_or_none(kEos);
    unk_ = id_or_none(kUnk);
    for (size_t k = 0; k < tables_.size(); ++k)
      for (const auto &[key, e] : tables_[k]) {
        if (key.size() != k + 1) throw Error("n-gram stored at the wrong order");
        for (int32_t id : key)
          if (id < 0 || id >= static_cast<int32_t>(vocab_.size()))
            throw Error("n-gram refers to a word outside the vocabulary");
        if (!std::isfinite(e.logprob) || !std::isfinite(e.backoff))
          throw Error("non-finite n-gram value");
      }
    for (size_t i = 0; i < vocab_.size(); ++i)
      if (!tables_[0].count({static_cast<int32_t>(i)}))
        throw Error("vocabulary word without unigram: " + vocab_[i]);
  }

  int Order() const { return static_cast<int>(tables_.size()); }
  const std::vector<std::string> &Vocab() const { return vocab_; }
  const Table &TableOf(int order) const { return tables_.at(order - 1); }
  const std::vector<Table> &Tables() const { return tables_; }
  bool InVocab(const std::string &w) const { return ids_.count(w) != 0; }
  /// Unknown words map to <unk>.
  int32_t WordId(const std::string &w) const {
    auto it = ids_.find(w);
    if (it != ids_.end()) return it->second;
    if (unk_ < 0) throw Error("'" + w + "' is not in the vocabulary and the model has no " + kUnk);
    return unk_;
  }
  int32_t BosId() const { return Special(bos_, kBos); }
  int32_t EosId() const { return Special(eos_, kEos); }

  /// log10 p(word | history) by the standard backoff recursion.
  double LogProbIds(int32_t word, std::span<const int32_t> history) const {
    size_t max_ctx = tables_.size() - 1;
    if (history.size() > max_ctx) history = history.subspan(history.size() - max_ctx);
    double acc = 0.0;
    Key key;
    for (size_t len = history.size();; --len) {
      auto ctx = history.subspan(history.size() - len);
      key.assign(ctx.begin(), ctx.end());
      key.push_back(word);
      const Table &t = tables_[len];
      auto it = t.find(key);
      if (it != t.end()) return acc + it->second.logprob;
      if (len == 0) break;
      key.pop_back();
      auto ct = tables_[len - 1].find(key);
      if (ct != tables_[len - 1].end() && ct->second.has_backoff) acc += ct->second.backoff;
    }
    // Unreachable for a valid model: every vocabulary word has a unigram.
    throw Error("word without unigram entry");
  }

  double LogProb(const std::string &word, const std::vector<std::string> &history) const {
    Key h;
    for (const auto &w : history) h.push_back(WordId(w));
    return LogProbIds(WordId(word), h);
  }

  /// log10 probability of the words followed by </s>, starting after <s>.
  double SentenceLogProb(const Sentence &words) const {
    Key hist{BosId()};
    double total = 0.0;
    for (const auto &w : words) {
      int32_t id = WordId(w);
      total += LogProbIds(id, hist);
      hist.push_back(id);
    }
    return total + LogProbIds(EosId(), hist);
  }

  /// Per-word perplexity (</s> counted) over a set of sentences.
  double Perplexity(const std::vector<Sentence> &sentences) const {
    double lp = 0.0;
    size_t n = 0;
    for (const auto &s : sentences) {
      lp += SentenceLogProb(s);
      n += s.size() + 1;
    }
    return std::pow(10.0, -lp / static_cast<double>(n));
  }

 private:
  static int32_t Special(int32_t id, const std::string &w) {
    if (id < 0) throw Error("model has no " + w);
    return id;
  }

  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int32_t> ids_;
  std::vector<Table> tables_;
  int32_t bos_ = 0, eos_ = 0, unk_ = 0;
};

struct KneserNeyReport {
  std::vector<double> discounts;  // per order, 1-based at index order-1
  std::vector<std::string> warnings;
};

/// Trains an interpolated Kneser-Ney model. Tokens outside `vocab` map to
/// <unk>; an empty `vocab` means "every corpus token".
inline NGramLM TrainKneserNey(const std::vector<Sentence> &corpus, int order,
                              const std::set<std::string> &vocab = {},
                              KneserNeyReport *report = nullptr) {
  if (order < 1 || order > 5) throw Error("n-gram order must be in [1,5]");
  if (corpus.empty()) throw Error("empty training corpus");
  std::set<std::string> words = vocab;
  if (words.empty())
    for (const auto &s : corpus) words.insert(s.begin(), s.end());
  words.insert(kBos);
  words.insert(kEos);
  words.insert(kUnk);
  std::vector<std::string> vlist(words.begin(), words.end());  // sorted
  std::unordered_map<std::string, int32_t> ids;
  for (size_t i = 0; i < vlist.size(); ++i) ids[vlist[i]] = static_cast<int32_t>(i);
  const int32_t bos = ids[kBos], eos = ids[kEos], unk = ids[kUnk];
  const double num_predictable = static_cast<double>(vlist.size() - 1);

  // Raw counts for every order.
  std::vector<std::map<NGramLM::Key, double>> raw(order);
  for (const auto &s : corpus) {
    NGramLM::Key padded{bos};
    for (const auto &w : s) {
      auto it = ids.find(w);
      padded.push_back(it == ids.end() ? unk : it->second);
    }
    padded.push_back(eos);
    for (size_t i = 0; i < padded.size(); ++i)
      for (int k = 1; k <= order && i + k <= padded.size(); ++k)
        raw[k - 1][NGramLM::Key(padded.begin() + i, padded.begin() + i + k)] += 1.0;
  }
  for (int k = 1; k <= order; ++k) {
    bool any = false;
    for (auto &[key, c] : raw[k - 1])
      if (!(k == 1 && key[0] == bos)) any = true;
    if (!any)
      throw Error("no observed " + std::to_string(k) + "-grams; lower the order");
  }

  // Counts used for estimation at each order.
  std::vector<std::map<NGramLM::Key, double>> counts(order);
  counts[order - 1] = raw[order - 1];
  for (int k = order - 1; k >= 1; --k) {
    auto &ck = counts[k - 1];
    for (auto &[key, c] : raw[k - 1])
      if (key[0] == bos) ck[key] = c;
    for (auto &[key, c] : raw[k]) {
      NGramLM::Key suffix(key.begin() + 1, key.end());
      if (suffix[0] != bos) ck[suffix] += 1.0;
    }
  }

  KneserNeyReport local;
  KneserNeyReport &rep = report ? *report : local;
  rep.discounts.assign(order, 0.0);
  for (int k = 1; k <= order; ++k) {
    double n1 = 0, n2 = 0;
    for (auto &[key, c] : counts[k - 1]) {
      if (k == 1 && key[0] == bos) continue;
      if (c == 1.0) ++n1;
      if (c == 2.0) ++n2;
    }
    double d = 0.5;
    if (n1 == 0.0) {
      rep.warnings.push_back("order " + std::to_string(k) +
                             ": no singleton counts, using discount 0.5");
    } else {
      d = n1 / (n1 + 2.0 * n2);
    }
    rep.discounts[k - 1] = d;
  }

  std::vector<NGramLM::Table> tables(order);
  // Unigrams.
  {
    double total = 0.0, types = 0.0;
    for (auto &[key, c] : counts[0]) {
      if (key[0] == bos) continue;
      total += c;
      if (c > 0) ++types;
    }
    double d = rep.discounts[0];
    double uniform_mass = d * types / total / num_predictable;
    for (size_t i = 0; i < vlist.size(); ++i) {
      int32_t id = static_cast<int32_t>(i);
      NGramLM::Entry e;
      if (id == bos) {
        e.logprob = kArpaLogZero;
      } else {
        auto it = counts[0].find({id});
        double c = it == counts[0].end() ? 0.0 : it->second;
        e.logprob = std::log10(std::max(c - d, 0.0) / total + uniform_mass);
      }
      tables[0][{id}] = e;
    }
  }
  // Higher orders, each interpolated with the finished lower-order model.
  for (int k = 2; k <= order; ++k) {
    std::vector<NGramLM::Table> lower(tables.begin(), tables.begin() + (k - 1));
    NGramLM lower_lm(vlist, lower);
    std::map<NGramLM::Key, std::pair<double, double>> ctx;  // denom, types
    for (auto &[key, c] : counts[k - 1]) {
      auto &[denom, types] = ctx[NGramLM::Key(key.begin(), key.end() - 1)];
      denom += c;
      if (c > 0) ++types;
    }
    double d = rep.discounts[k - 1];
    for (auto &[key, c] : counts[k - 1]) {
      NGramLM::Key h(key.begin(), key.end() - 1);
      auto [denom, types] = ctx.at(h);
      double gamma = d * types / denom;
      std::span<const int32_t> shorter(h.data() + 1, h.size() - 1);
      double lower_p = std::pow(10.0, lower_lm.LogProbIds(key.back(), shorter));
      NGramLM::Entry e;
      e.logprob = std::log10(std::max(c - d, 0.0) / denom + gamma * lower_p);
      tables[k - 1][key] = e;
    }
    for (auto &[h, dt] : ctx) {
      auto it = tables[k - 2].find(h);
      if (it == tables[k - 2].end()) throw Error("internal: history without entry");
      it->second.backoff = std::log10(d * dt.second / dt.first);
      it->second.has_backoff = true;
    }
  }
  return NGramLM(std::move(vlist), std::move(tables));
}

// ---------------------------------------------------------------------------
// ARPA format, values at 6 decimals.

inline std::string WriteArpa(const NGramLM &lm) {
  std::string out = "\\data\\\n";
  for (int k = 1; k <= lm.Order(); ++k)
    out += "ngram " + std::to_string(k) + "=" + std::to_string(lm.TableOf(k).size()) + "\n";
  for (int k = 1; k <= lm.Order(); ++k) {
    out += "\n\\" + std::to_string(k) + "-grams:\n";
    for (const auto &[key, e] : lm.TableOf(k)) {
      out += FormatFixed(e.logprob, 6) + "\t";
      for (size_t i = 0; i < key.size(); ++i) {
        if (i) out += ' ';
        out += lm.Vocab()[key[i]];
      }
      if (e.has_backoff) out += "\t" + FormatFixed(e.backoff, 6);
      out += "\n";
    }
  }
  out += "\n\\end\\\n";
  return out;
}

inline NGramLM ReadArpa(const std::string &text) {
  auto lines = SplitLines(text);
  size_t i = 0;
  auto skip_blank = [&] {
    while (i < lines.size() && SplitWhitespace(lines[i]).empty()) ++i;
  };
  skip_blank();
  if (i >= lines.size() || lines[i] != "\\data\\") throw ParseError(i + 1, "expected \\data\\");
  ++i;
  std::vector<size_t> declared;
  while (i < lines.size() && lines[i].rfind("ngram ", 0) == 0) {
    auto eq = lines[i].find('=');
    if (eq == std::string::npos) throw ParseError(i + 1, "malformed ngram count line");
    auto k = ParseInt(std::string_view(lines[i]).substr(6, eq - 6));
    auto n = ParseInt(std::string_view(lines[i]).substr(eq + 1));
    if (!k || !n || *n < 0 || *k != static_cast<int64_t>(declared.size()) + 1)
      throw ParseError(i + 1, "malformed ngram count line");
    declared.push_back(static_cast<size_t>(*n));
    ++i;
  }
  if (declared.empty()) throw ParseError(i + 1, "no ngram counts in \\data\\");

  std::vector<std::vector<std::pair<std::vector<std::string>, NGramLM::Entry>>> raw(declared.size());
  std::set<std::string> vocab_set;
  for (size_t k = 1; k <= declared.size(); ++k) {
    skip_blank();
    std::string header = "\\" + std::to_string(k) + "-grams:";
    if (i >= lines.size() || lines[i] != header)
      throw ParseError(i + 1, "expected " + header);
    ++i;
    while (i < lines.size() && !SplitWhitespace(lines[i]).empty() && lines[i][0] != '\\') {
      auto toks = SplitWhitespace(lines[i]);
      if (toks.size() != k + 1 && toks.size() != k + 2)
        throw ParseError(i + 1, "wrong field count for a " + std::to_string(k) + "-gram");
      NGramLM::Entry e;
      auto lp = ParseDouble(toks[0]);
      if (!lp) throw ParseError(i + 1, "bad log probability");
      e.logprob = *lp;
      std::vector<std::string> words;
      for (size_t j = 1; j <= k; ++j) words.emplace_back(toks[j]);
      if (toks.size() == k + 2) {
        auto bo = ParseDouble(toks[k + 1]);
        if (!bo) throw ParseError(i + 1, "bad backoff weight");
        e.backoff = *bo;
        e.has_backoff = true;
      }
      if (k == 1) vocab_set.insert(words[0]);
      raw[k - 1].emplace_back(std::move(words), e);
      ++i;
    }
    if (raw[k - 1].size() != declared[k - 1])
      throw ParseError(i + 1, "\\data\\ declares " + std::to_string(declared[k - 1]) + " " +
                                  std::to_string(k) + "-grams, body has " +
                                  std::to_string(raw[k - 1].size()));
  }
  skip_blank();
  if (i >= lines.size() || lines[i] != "\\end\\") throw ParseError(i + 1, "expected \\end\\");

  std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
  std::unordered_map<std::string, int32_t> ids;
  for (size_t v = 0; v < vocab.size(); ++v) ids[vocab[v]] = static_cast<int32_t>(v);
  std::vector<NGramLM::Table> tables(declared.size());
  for (size_t k = 0; k < raw.size(); ++k)
    for (auto &[words, e] : raw[k]) {
      NGramLM::Key key;
      for (const auto &w : words) {
        auto it = ids.find(w);
        if (it == ids.end()) throw Error("ARPA n-gram uses a word without unigram: " + w);
        key.push_back(it->second);
      }
      if (!tables[k].emplace(std::move(key), e).second)
        throw Error("duplicate ARPA n-gram");
    }
  return NGramLM(std::move(vocab), std::move(tables));
}

/// One sentence per line, whitespace tokenized; blank lines skipped.
inline std::vector<Sentence> ReadCorpus(const std::string &text) {
  std::vector<Sentence> out;
  for (const auto &line : SplitLines(text)) {
    auto toks = SplitTokens(line);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

inline std::string WriteCorpus(const std::vector<Sentence> &corpus) {
  std::string out;
  for (const auto &s : corpus) out += JoinTokens(s) + "\n";
  return out;
}

}  // namespace nerlat

#endif  // NERLAT_NGRAM_H_
