// nerlat/augment.h

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

// Training-free enrichment of underrepresented words in a trained neural LM:
//
//   E'[u] = theta * E[u] + mean_{c in C_u} E[c]
//
// Candidate rows are always read from the input model, so the order in which
// plans are applied does not matter.

#ifndef NERLAT_AUGMENT_H_
#define NERLAT_AUGMENT_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nerlat/base.h"
#include "nerlat/eval.h"
#include "nerlat/neural-lm.h"

namespace nerlat {

inline constexpr double kDefaultThetaRare = 0.09;
inline constexpr double kDefaultThetaOov = 0.01;
inline constexpr size_t kDefaultNumCandidates = 5;

struct AugmentationPlan {
  std::string target;
  std::vector<std::string> candidates;
  double theta = 0.0;
  bool oov = false;
};

using CandidateMap = std::map<std::string, std::vector<std::string>>;

/// One plan per NE in the inventory, using the first k mapped candidates.
/// Throws if an NE has fewer than k candidates or a candidate is not in
/// `vocab`.
inline std::vector<AugmentationPlan> BuildPlans(const NEInventory &inv,
                                                const CandidateMap &candidates,
                                                const std::set<std::string> &vocab,
                                                size_t k = kDefaultNumCandidates,
                                                double theta_rare = kDefaultThetaRare,
                                                double theta_oov = kDefaultThetaOov) {
  if (k < 1) throw Error("need at least one candidate per plan");
  if (!(theta_rare >= 0.0) || !(theta_oov >= 0.0) || !std::isfinite(theta_rare) ||
      !std::isfinite(theta_oov))
    throw Error("theta must be finite and non-negative");
  std::vector<AugmentationPlan> plans;
  for (const auto &ne : inv.All()) {
    auto it = candidates.find(ne);
    size_t have = it == candidates.end() ? 0 : it->second.size();
    if (have < k)
      throw Error("named entity '" + ne + "' has " + std::to_string(have) +
                  " candidates, need " + std::to_string(k));
    AugmentationPlan p;
    p.target = ne;
    p.oov = inv.oov.count(ne) != 0;
    p.theta = p.oov ? theta_oov : theta_rare;
    p.candidates.assign(it->second.begin(), it->second.begin() + static_cast<long>(k));
    for (const auto &c : p.candidates) {
      if (c == ne) throw Error("named entity '" + ne + "' lists itself as a candidate");
      if (!vocab.count(c)) throw Error("candidate '" + c + "' is not in the LM vocabulary");
    }
    plans.push_back(std::move(p));
  }
  return plans;
}

/// Applies every plan. Targets missing from the model are appended first
/// with a zero row. Parameters not in a target row are copied bit for bit.
inline NeuralLM AugmentEmbeddings(const NeuralLM &lm, const std::vector<AugmentationPlan> &plans) {
  std::set<std::string> targets;
  std::vector<std::string> missing;
  for (const auto &p : plans) {
    if (!targets.insert(p.target).second)
      throw Error("duplicate augmentation target '" + p.target + "'");
    if (p.candidates.empty()) throw Error("plan for '" + p.target + "' has no candidates");
    if (!(p.theta >= 0.0) || !std::isfinite(p.theta))
      throw Error("plan for '" + p.target + "' has invalid theta");
    for (const auto &c : p.candidates) {
      if (c == p.target) throw Error("plan for '" + p.target + "' lists itself");
      if (!lm.InVocab(c)) throw Error("candidate '" + c + "' is not in the LM vocabulary");
    }
    if (!lm.InVocab(p.target)) missing.push_back(p.target);
  }
  const NeuralLM source = missing.empty() ? lm : lm.AppendWords(missing);
  NeuralLM out = source;
  for (const auto &p : plans) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(source.Dim());
    for (const auto &c : p.candidates) mean += source.E().row(source.WordId(c));
    mean /= static_cast<double>(p.candidates.size());
    int32_t t = source.WordId(p.target);
    out.MutableE().row(t) = p.theta * source.E().row(t) + mean;
  }
  return out;
}

/// For each NE, the k most frequent words of its category in the training
/// data (ties by spelling), excluding the NE itself.
inline CandidateMap SelectFrequentCandidates(const std::vector<std::string> &nes,
                                             const std::vector<std::string> &category_words,
                                             const std::vector<Sentence> &train,
                                             size_t k = kDefaultNumCandidates) {
  std::map<std::string, int64_t> counts;
  for (const auto &s : train)
    for (const auto &w : s) ++counts[w];
  std::vector<std::pair<int64_t, std::string>> ranked;
  std::set<std::string> uniq(category_words.begin(), category_words.end());
  for (const auto &w : uniq) {
    auto it = counts.find(w);
    if (it != counts.end()) ranked.emplace_back(-it->second, w);
  }
  std::sort(ranked.begin(), ranked.end());
  CandidateMap out;
  for (const auto &ne : nes) {
    auto &c = out[ne];
    for (const auto &[neg, w] : ranked) {
      if (c.size() >= k) break;
      if (w != ne) c.push_back(w);
    }
    if (c.size() < k)
      throw Error("only " + std::to_string(c.size()) + " frequent candidates for '" + ne + "'");
  }
  return out;
}

// "ne<TAB>cand1 cand2 ..." lines.
inline std::string WriteCandidateMap(const CandidateMap &m) {
  std::string out;
  for (const auto &[ne, cands] : m) out += ne + "\t" + JoinTokens(cands) + "\n";
  return out;
}

inline CandidateMap ReadCandidateMap(const std::string &text) {
  CandidateMap m;
  auto lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (SplitWhitespace(lines[i]).empty()) continue;
    auto tab = lines[i].find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError(i + 1, "expected ne<TAB>candidates");
    std::string ne = lines[i].substr(0, tab);
    if (!m.emplace(ne, SplitTokens(std::string_view(lines[i]).substr(tab + 1))).second)
      throw ParseError(i + 1, "duplicate entry for " + ne);
  }
  return m;
}

/// "target<TAB>class<TAB>theta<TAB>candidates" lines.
inline std::string WritePlans(const std::vector<AugmentationPlan> &plans) {
  std::string out;
  for (const auto &p : plans)
    out += p.target + "\t" + (p.oov ? "oov" : "rare") + "\t" + FormatSig(p.theta) + "\t" +
           JoinTokens(p.candidates) + "\n";
  return out;
}

}  // namespace nerlat

#endif  // NERLAT_AUGMENT_H_
