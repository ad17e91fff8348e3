// nerlat/boost.h

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

// Keyword-search style boosting. Every non-epsilon arc of every lattice goes
// into an inverted index with its start/end frame and log posterior; entries
// for named entities get an additive log-domain bonus, and the lattice is
// regenerated with the bonus moved onto the arc LM score (divided by the LM
// scale, so the combined arc weight grows by exactly the bonus).

#ifndef NERLAT_BOOST_H_
#define NERLAT_BOOST_H_

#include <map>
#include <numbers>
#include <set>
#include <tuple>
#include <string>
#include <vector>

#include "nerlat/base.h"
#include "nerlat/lattice.h"

namespace nerlat {

/// ln 4.
inline const double kDefaultBoostBonus = 2.0 * std::numbers::ln2;

struct IndexEntry {
  std::string word;
  std::string utterance_id;
  int32_t start = 0;
  int32_t end = 0;
  double log_posterior = 0.0;
  int32_t arc_index = 0;
  double bonus = 0.0;  // log-domain bonus already applied

  auto SortKey() const { return std::tie(utterance_id, start, end, arc_index); }
  bool operator==(const IndexEntry &) const = default;
};

class InvertedIndex {
 public:
  using Map = std::map<std::string, std::vector<IndexEntry>>;

  InvertedIndex() = default;
  explicit InvertedIndex(Map entries) : entries_(std::move(entries)) {
    for (auto &[w, list] : entries_) {
      for (const auto &e : list)
        if (e.word != w) throw Error("index entry for '" + e.word + "' filed under '" + w + "'");
      std::sort(list.begin(), list.end(),
                [](const IndexEntry &a, const IndexEntry &b) { return a.SortKey() < b.SortKey(); });
    }
  }

  const Map &Entries() const { return entries_; }
  size_t Size() const {
    size_t n = 0;
    for (const auto &[w, l] : entries_) n += l.size();
    return n;
  }

  /// Sorted by (utterance, start); empty when the word is absent.
  std::vector<IndexEntry> Search(const std::string &query) const {
    auto it = entries_.find(query);
    return it == entries_.end() ? std::vector<IndexEntry>{} : it->second;
  }

 private:
  Map entries_;
};

inline std::vector<IndexEntry> IndexLattice(const Lattice &lat, const ScaleConfig &scales) {
  ArcPosteriors post = ForwardBackward(lat, scales);
  std::vector<IndexEntry> out;
  for (size_t a = 0; a < lat.NumArcs(); ++a) {
    const Arc &arc = lat.Arcs()[a];
    if (arc.IsEpsilon()) continue;
    IndexEntry e;
    e.word = arc.word;
    e.utterance_id = lat.UtteranceId();
    e.start = lat.TimeOfIndex(lat.SourceIndex(a));
    e.end = lat.TimeOfIndex(lat.TargetIndex(a));
    e.log_posterior = post.log_posterior[a];
    e.arc_index = static_cast<int32_t>(a);
    out.push_back(std::move(e));
  }
  return out;
}

/// Forward-backward per lattice (utterance-parallel), then one merge.
inline InvertedIndex BuildIndex(const std::vector<Lattice> &lattices, const ScaleConfig &scales,
                                int jobs = 1) {
  std::vector<std::vector<IndexEntry>> per(lattices.size());
  ParallelFor(lattices.size(), jobs, [&](size_t i) { per[i] = IndexLattice(lattices[i], scales); });
  InvertedIndex::Map m;
  for (auto &list : per)
    for (auto &e : list) m[e.word].push_back(std::move(e));
  return InvertedIndex(std::move(m));
}

inline std::vector<IndexEntry> Search(const InvertedIndex &index, const std::string &query) {
  return index.Search(query);
}

/// Adds `bonus` to the log posterior of every entry whose word is in
/// `ne_set`; all other entries are copied unchanged.
inline InvertedIndex BoostIndex(const InvertedIndex &index, const std::set<std::string> &ne_set,
                                double bonus) {
  if (!std::isfinite(bonus) || bonus < 0.0)
    throw Error("boost bonus must be finite and non-negative");
  InvertedIndex::Map m = index.Entries();
  for (auto &[w, list] : m) {
    if (!ne_set.count(w)) continue;
    for (auto &e : list) {
      e.log_posterior += bonus;
      e.bonus += bonus;
    }
  }
  return InvertedIndex(std::move(m));
}

/// Copy of `lat` where every arc with a boosted entry for this utterance has
/// lm_score increased by bonus / lm_scale. Topology is unchanged.
inline Lattice RegenerateLattice(const Lattice &lat, const InvertedIndex &boosted,
                                 const ScaleConfig &scales) {
  scales.Check();
  std::vector<double> ac(lat.NumArcs()), lm(lat.NumArcs());
  for (size_t a = 0; a < lat.NumArcs(); ++a) {
    ac[a] = lat.Arcs()[a].acoustic_score;
    lm[a] = lat.Arcs()[a].lm_score;
  }
  bool changed = false;
  for (const auto &[w, list] : boosted.Entries())
    for (const auto &e : list) {
      if (e.utterance_id != lat.UtteranceId()) continue;
      if (e.arc_index < 0 || static_cast<size_t>(e.arc_index) >= lat.NumArcs() ||
          lat.Arcs()[e.arc_index].word != e.word)
        throw Error("dangling index entry: utterance " + e.utterance_id + ", arc " +
                    std::to_string(e.arc_index) + " ('" + e.word + "')");
      if (e.bonus == 0.0) continue;
      lm[e.arc_index] += e.bonus / scales.lm_scale;
      changed = true;
    }
  return changed ? lat.WithArcScores(ac, lm) : lat;
}

/// best_path(regenerate(lat, boost(index([lat])))).
inline Hypothesis BoostedBestPath(const Lattice &lat, const std::set<std::string> &ne_set,
                                  double bonus, const ScaleConfig &scales) {
  InvertedIndex index = BuildIndex({lat}, scales);
  InvertedIndex boosted = BoostIndex(index, ne_set, bonus);
  return BestPath(RegenerateLattice(lat, boosted, scales), scales);
}

// "word<TAB>utt<TAB>start<TAB>end<TAB>log_posterior<TAB>arc_idx" lines, with
// a seventh bonus column on boosted entries.

inline std::string WriteIndex(const InvertedIndex &index) {
  std::string out;
  for (const auto &[w, list] : index.Entries())
    for (const auto &e : list) {
      out += e.word + "\t" + e.utterance_id + "\t" + std::to_string(e.start) + "\t" +
             std::to_string(e.end) + "\t" + FormatSig(e.log_posterior) + "\t" +
             std::to_string(e.arc_index);
      if (e.bonus != 0.0) out += "\t" + FormatSig(e.bonus);
      out += "\n";
    }
  return out;
}

inline InvertedIndex ReadIndex(const std::string &text) {
  InvertedIndex::Map m;
  auto lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (SplitWhitespace(lines[i]).empty()) continue;
    auto f = SplitOn(lines[i], '\t');
    if (f.size() != 6 && f.size() != 7) throw ParseError(i + 1, "expected 6 or 7 tab-separated fields");
    IndexEntry e;
    e.word = std::string(f[0]);
    e.utterance_id = std::string(f[1]);
    auto s = ParseInt(f[2]), en = ParseInt(f[3]), a = ParseInt(f[5]);
    std::optional<double> lp = f[4] == "-inf" ? std::optional<double>(kLogZero) : ParseDouble(f[4]);
    if (!s || !en || !a || !lp || *s > *en) throw ParseError(i + 1, "malformed index entry");
    e.start = static_cast<int32_t>(*s);
    e.end = static_cast<int32_t>(*en);
    e.arc_index = static_cast<int32_t>(*a);
    e.log_posterior = *lp;
    if (f.size() == 7) {
      auto b = ParseDouble(f[6]);
      if (!b) throw ParseError(i + 1, "malformed bonus");
      e.bonus = *b;
    }
    m[e.word].push_back(std::move(e));
  }
  return InvertedIndex(std::move(m));
}

/// One token per line.
inline std::set<std::string> ReadTokenSet(const std::string &text) {
  std::set<std::string> out;
  for (const auto &line : SplitLines(text))
    for (auto t : SplitWhitespace(line)) out.emplace(t);
  return out;
}

}  // namespace nerlat

#endif  // NERLAT_BOOST_H_
