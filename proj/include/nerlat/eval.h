// nerlat/eval.h

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

// Word error rate, named-entity error rate and the inventory of
// underrepresented named entities.
//
// NE-WER = E_NE / N_NE: a reference NE occurrence is an error when the
// alignment substitutes or deletes it. Insertions next to an NE count
// towards WER only.

#ifndef NERLAT_EVAL_H_
#define NERLAT_EVAL_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nerlat/base.h"
#include "nerlat/ngram.h"

namespace nerlat {

struct NEInventory {
  std::set<std::string> rare;  // train count in [1, threshold)
  std::set<std::string> oov;   // train count 0
  std::set<std::string> excluded;  // train count >= threshold
  int64_t threshold = 10;
  std::map<std::string, int64_t> counts;

  bool Contains(const std::string &w) const { return rare.count(w) || oov.count(w); }
  std::set<std::string> All() const {
    std::set<std::string> out = rare;
    out.insert(oov.begin(), oov.end());
    return out;
  }
};

inline NEInventory ClassifyNes(const std::vector<std::string> &ne_list,
                               const std::vector<Sentence> &train, int64_t threshold = 10) {
  if (threshold < 1) throw Error("frequency threshold must be at least 1");
  std::map<std::string, int64_t> all;
  for (const auto &s : train)
    for (const auto &w : s) ++all[w];
  NEInventory inv;
  inv.threshold = threshold;
  for (const auto &ne : ne_list) {
    auto it = all.find(ne);
    int64_t c = it == all.end() ? 0 : it->second;
    inv.counts[ne] = c;
    if (c == 0) inv.oov.insert(ne);
    else if (c < threshold) inv.rare.insert(ne);
    else inv.excluded.insert(ne);
  }
  return inv;
}

enum class EditOp { kMatch, kSub, kIns, kDel };

struct AlignedPair {
  EditOp op;
  std::optional<std::string> ref;
  std::optional<std::string> hyp;
};

struct Alignment {
  std::vector<AlignedPair> ops;

  size_t Errors() const {
    size_t e = 0;
    for (const auto &p : ops) e += p.op != EditOp::kMatch;
    return e;
  }
  size_t Count(EditOp op) const {
    size_t n = 0;
    for (const auto &p : ops) n += p.op == op;
    return n;
  }
};

/// Unit-cost Levenshtein alignment. At equal cost the backtrace prefers
/// match, then substitution, then deletion, then insertion.
inline Alignment Align(const std::vector<std::string> &ref, const std::vector<std::string> &hyp) {
  size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<size_t>> d(n + 1, std::vector<size_t>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (size_t i = 1; i <= n; ++i)
    for (size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1), d[i - 1][j] + 1,
                          d[i][j - 1] + 1});
  Alignment al;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && d[i][j] == d[i - 1][j - 1]) {
      al.ops.push_back({EditOp::kMatch, ref[i - 1], hyp[j - 1]});
      --i, --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      al.ops.push_back({EditOp::kSub, ref[i - 1], hyp[j - 1]});
      --i, --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      al.ops.push_back({EditOp::kDel, ref[i - 1], std::nullopt});
      --i;
    } else {
      al.ops.push_back({EditOp::kIns, std::nullopt, hyp[j - 1]});
      --j;
    }
  }
  std::reverse(al.ops.begin(), al.ops.end());
  return al;
}

using RefHyp = std::pair<std::vector<std::string>, std::vector<std::string>>;

struct WerStats {
  size_t substitutions = 0, deletions = 0, insertions = 0, ref_words = 0;
  double Wer() const {
    if (ref_words == 0) throw Error("WER undefined without reference words");
    return 100.0 * static_cast<double>(substitutions + deletions + insertions) /
           static_cast<double>(ref_words);
  }
};

inline WerStats ComputeWerStats(const std::vector<RefHyp> &pairs) {
  WerStats s;
  for (const auto &[ref, hyp] : pairs) {
    Alignment al = Align(ref, hyp);
    s.substitutions += al.Count(EditOp::kSub);
    s.deletions += al.Count(EditOp::kDel);
    s.insertions += al.Count(EditOp::kIns);
    s.ref_words += ref.size();
  }
  return s;
}

/// Percentage, 100 (S + D + I) / N.
inline double Wer(const std::vector<RefHyp> &pairs) { return ComputeWerStats(pairs).Wer(); }

struct NeWerResult {
  size_t errors = 0, total = 0;
  size_t rare_errors = 0, rare_total = 0;
  size_t oov_errors = 0, oov_total = 0;

  static std::optional<double> Rate(size_t e, size_t n) {
    if (n == 0) return std::nullopt;
    return 100.0 * static_cast<double>(e) / static_cast<double>(n);
  }
  std::optional<double> Overall() const { return Rate(errors, total); }
  std::optional<double> Rare() const { return Rate(rare_errors, rare_total); }
  std::optional<double> Oov() const { return Rate(oov_errors, oov_total); }
};

inline NeWerResult NeWer(const std::vector<RefHyp> &pairs, const NEInventory &inv) {
  NeWerResult r;
  for (const auto &[ref, hyp] : pairs) {
    for (const auto &p : Align(ref, hyp).ops) {
      if (!p.ref || !inv.Contains(*p.ref)) continue;
      bool err = p.op == EditOp::kSub || p.op == EditOp::kDel;
      ++r.total;
      r.errors += err;
      if (inv.rare.count(*p.ref)) {
        ++r.rare_total;
        r.rare_errors += err;
      } else {
        ++r.oov_total;
        r.oov_errors += err;
      }
    }
  }
  return r;
}

// "utt_id<TAB>token token ..." files.
using Transcripts = std::map<std::string, std::vector<std::string>>;

inline Transcripts ReadTranscripts(const std::string &text) {
  Transcripts out;
  auto lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    const auto &line = lines[i];
    if (SplitWhitespace(line).empty()) continue;
    auto tab = line.find('\t');
    std::string utt;
    std::vector<std::string> toks;
    if (tab == std::string::npos) {
      auto all = SplitTokens(line);
      utt = all[0];
      toks.assign(all.begin() + 1, all.end());
    } else {
      utt = line.substr(0, tab);
      toks = SplitTokens(std::string_view(line).substr(tab + 1));
    }
    if (utt.empty()) throw ParseError(i + 1, "missing utterance id");
    if (!out.emplace(utt, std::move(toks)).second)
      throw ParseError(i + 1, "duplicate utterance id " + utt);
  }
  return out;
}

inline std::string WriteTranscripts(const Transcripts &t) {
  std::string out;
  for (const auto &[utt, toks] : t) out += utt + "\t" + JoinTokens(toks) + "\n";
  return out;
}

/// Pairs references with hypotheses by utterance id; a missing hypothesis
/// counts as empty.
inline std::vector<RefHyp> PairTranscripts(const Transcripts &refs, const Transcripts &hyps) {
  std::vector<RefHyp> pairs;
  for (const auto &[utt, ref] : refs) {
    auto it = hyps.find(utt);
    pairs.emplace_back(ref, it == hyps.end() ? std::vector<std::string>{} : it->second);
  }
  for (const auto &[utt, hyp] : hyps)
    if (!refs.count(utt)) throw Error("hypothesis for unknown utterance " + utt);
  return pairs;
}

inline std::string FormatRate(const std::optional<double> &r) {
  return r ? FormatFixed(*r, 2) : std::string("absent");
}

/// key=value lines: WER, NE-WER, NE-WER_rare, NE-WER_oov, E_NE, N_NE.
inline std::string ScoreReport(const WerStats &w, const NeWerResult &ne) {
  std::string out;
  out += "WER=" + FormatFixed(w.Wer(), 2) + "\n";
  out += "NE-WER=" + FormatRate(ne.Overall()) + "\n";
  out += "NE-WER_rare=" + FormatRate(ne.Rare()) + "\n";
  out += "NE-WER_oov=" + FormatRate(ne.Oov()) + "\n";
  out += "E_NE=" + std::to_string(ne.errors) + "\n";
  out += "N_NE=" + std::to_string(ne.total) + "\n";
  return out;
}

}  // namespace nerlat

#endif  // NERLAT_EVAL_H_
