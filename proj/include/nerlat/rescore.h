// nerlat/rescore.h

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

// Replaces lattice LM scores with a linear interpolation of a Kneser-Ney
// model and a neural LM, per word:
//
//   ln( lambda * p_kn(w | h) + (1 - lambda) * p_nlm(w | h) )
//
// Acoustic scores are never touched.

#ifndef NERLAT_RESCORE_H_
#define NERLAT_RESCORE_H_

#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "nerlat/base.h"
#include "nerlat/lattice.h"
#include "nerlat/neural-lm.h"
#include "nerlat/ngram.h"

namespace nerlat {

struct InterpolationConfig {
  double kn_weight = 0.6;
  ScaleConfig scales;
  size_t nbest_size = 100;
  size_t state_cap = 50000;

  void Check() const {
    if (!(kn_weight >= 0.0 && kn_weight <= 1.0)) throw Error("kn_weight must lie in [0,1]");
    scales.Check();
    if (nbest_size < 1) throw Error("nbest_size must be at least 1");
  }
};

class StateCapExceeded : public Error {
 public:
  explicit StateCapExceeded(size_t cap)
      : Error("lattice expansion exceeded " + std::to_string(cap) +
              " states; rescore this utterance with rescore_nbest instead") {}
};

/// Natural-log interpolated probability from a KN log10 value and a neural
/// probability. The endpoints reduce to the single models exactly.
inline double InterpolateLogProb(double kn_log10, double nlm_prob, double kn_weight) {
  if (kn_weight == 1.0) return kn_log10 * std::numbers::ln10;
  if (kn_weight == 0.0) return std::log(nlm_prob);
  return std::log(kn_weight * std::pow(10.0, kn_log10) + (1.0 - kn_weight) * nlm_prob);
}

namespace internal {

inline const NeuralLM &RequireNeural(const NeuralLM *nlm, double kn_weight) {
  if (!nlm) {
    if (kn_weight != 1.0) throw Error("a neural LM is required unless kn_weight is 1");
    static const NeuralLM kNone;
    return kNone;
  }
  return *nlm;
}

}  // namespace internal

/// Sum over the words and </s>. `nlm` may be null only when kn_weight = 1.
inline double InterpolatedSentenceLogProb(const NGramLM &kn, const NeuralLM *nlm,
                                          const Sentence &sentence,
                                          const InterpolationConfig &cfg) {
  cfg.Check();
  const NeuralLM &neural = internal::RequireNeural(nlm, cfg.kn_weight);
  bool use_nlm = cfg.kn_weight != 1.0;
  std::vector<int32_t> hist{kn.BosId()};
  NeuralLM::StepResult state;
  if (use_nlm) state = neural.Step(neural.InitialState(), neural.BosId());
  double total = 0.0;
  for (size_t t = 0; t <= sentence.size(); ++t) {
    bool eos = t == sentence.size();
    int32_t kid = eos ? kn.EosId() : kn.WordId(sentence[t]);
    double p_nlm = 0.0;
    int32_t nid = 0;
    if (use_nlm) {
      nid = eos ? neural.EosId() : neural.WordId(sentence[t]);
      p_nlm = state.probs[nid];
    }
    total += InterpolateLogProb(kn.LogProbIds(kid, hist), p_nlm, cfg.kn_weight);
    if (eos) break;
    hist.push_back(kid);
    if (use_nlm) state = neural.Step(state.hidden, nid);
  }
  return total;
}

/// Reranks the n-best list with interpolated LM scores. Each hypothesis keeps
/// its acoustic score; lm_score and total_score are recomputed. Ties keep the
/// original order.
inline std::vector<Hypothesis> RescoreNBest(const Lattice &lat, const NGramLM &kn,
                                            const NeuralLM *nlm, const InterpolationConfig &cfg) {
  cfg.Check();
  std::vector<Hypothesis> hyps = NBest(lat, cfg.scales, cfg.nbest_size);
  for (auto &h : hyps) {
    h.lm_score = InterpolatedSentenceLogProb(kn, nlm, h.words, cfg);
    h.total_score = cfg.scales.acoustic_scale * h.acoustic_score + cfg.scales.lm_scale * h.lm_score;
  }
  std::stable_sort(hyps.begin(), hyps.end(), [](const Hypothesis &a, const Hypothesis &b) {
    return a.total_score > b.total_score;
  });
  return hyps;
}

/// Exact rescoring by expanding every node by its word history. With
/// kn_weight = 1 the history is truncated to the n-gram context, otherwise it
/// is the full prefix. ln p(</s> | history) is added to the arcs entering
/// final sink states; a final state with outgoing arcs instead gets an
/// epsilon arc to a new final node. Throws StateCapExceeded when the
/// expansion grows past cfg.state_cap.
inline Lattice RescoreLattice(const Lattice &input, const NGramLM &kn, const NeuralLM *nlm,
                              const InterpolationConfig &cfg) {
  cfg.Check();
  const NeuralLM &neural = internal::RequireNeural(nlm, cfg.kn_weight);
  const bool use_nlm = cfg.kn_weight != 1.0;
  const size_t kn_context = static_cast<size_t>(kn.Order() - 1);
  Lattice lat = Connect(input);
  if (lat.NumArcs() == 0 && lat.FinalNodes().empty()) throw Error("no start-to-final path");

  struct State {
    size_t node;
    std::vector<std::string> history;  // words since <s>, possibly truncated
    std::vector<int32_t> kn_hist;      // <s> + history as KN ids, truncated
    Vector hidden;
    Vector probs;
  };
  std::vector<State> states;
  std::map<std::pair<size_t, std::vector<std::string>>, int32_t> index;
  std::vector<std::vector<int32_t>> states_at(lat.NumNodes());

  auto add_state = [&](State s) -> int32_t {
    auto key = std::make_pair(s.node, s.history);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (states.size() >= cfg.state_cap) throw StateCapExceeded(cfg.state_cap);
    int32_t id = static_cast<int32_t>(states.size());
    index.emplace(std::move(key), id);
    states_at[s.node].push_back(id);
    states.push_back(std::move(s));
    return id;
  };

  {
    State s0;
    s0.node = lat.StartIndex();
    s0.kn_hist = {kn.BosId()};
    if (use_nlm) {
      auto r = neural.Step(neural.InitialState(), neural.BosId());
      s0.hidden = std::move(r.hidden);
      s0.probs = std::move(r.probs);
    }
    add_state(std::move(s0));
  }

  auto word_score = [&](const State &s, int32_t kid, int32_t nid) {
    return InterpolateLogProb(kn.LogProbIds(kid, s.kn_hist), use_nlm ? s.probs[nid] : 0.0,
                              cfg.kn_weight);
  };

  std::vector<Arc> arcs;
  std::vector<int32_t> final_states;
  std::vector<double> final_scores;
  for (size_t u : lat.TopologicalOrder()) {
    for (int32_t sid : states_at[u]) {
      for (int32_t a : lat.OutArcs(u)) {
        const Arc &arc = lat.Arcs()[a];
        State next;
        next.node = lat.TargetIndex(a);
        double lm = 0.0;
        if (arc.IsEpsilon()) {
          const State &s = states[sid];
          next.history = s.history;
          next.kn_hist = s.kn_hist;
          next.hidden = s.hidden;
          next.probs = s.probs;
        } else {
          const State &s = states[sid];
          int32_t kid = kn.WordId(arc.word);
          int32_t nid = use_nlm ? neural.WordId(arc.word) : 0;
          lm = word_score(s, kid, nid);
          next.history = s.history;
          next.history.push_back(arc.word);
          next.kn_hist = s.kn_hist;
          next.kn_hist.push_back(kid);
          if (next.kn_hist.size() > kn_context)
            next.kn_hist.erase(next.kn_hist.begin(),
                               next.kn_hist.end() - static_cast<long>(kn_context));
          if (!use_nlm && next.history.size() > kn_context)
            next.history.erase(next.history.begin(),
                               next.history.end() - static_cast<long>(kn_context));
          if (use_nlm) {
            auto r = neural.Step(s.hidden, nid);
            next.hidden = std::move(r.hidden);
            next.probs = std::move(r.probs);
          }
        }
        int32_t tid = add_state(std::move(next));
        arcs.push_back({sid, tid, arc.word, arc.acoustic_score, lm});
      }
      if (lat.IsFinalIndex(u)) {
        const State &s = states[sid];
        final_states.push_back(sid);
        final_scores.push_back(word_score(s, kn.EosId(), use_nlm ? neural.EosId() : 0));
      }
    }
    // Release per-state neural distributions once the node is done.
    for (int32_t sid : states_at[u]) {
      states[sid].probs = Vector();
      states[sid].hidden = Vector();
    }
  }

  // ln p(</s> | history) is folded into the arcs entering final sink
  // states; other final states get an epsilon arc to a new final node.
  std::vector<bool> has_in(states.size(), false), has_out(states.size(), false);
  for (const Arc &a : arcs) {
    has_out[a.source] = true;
    has_in[a.target] = true;
  }
  std::vector<std::optional<double>> fold(states.size());
  std::vector<int32_t> finals, via_super;
  std::vector<double> via_super_scores;
  for (size_t k = 0; k < final_states.size(); ++k) {
    int32_t s = final_states[k];
    if (has_in[s] && !has_out[s]) {
      fold[s] = final_scores[k];
      finals.push_back(s);
    } else {
      via_super.push_back(s);
      via_super_scores.push_back(final_scores[k]);
    }
  }
  for (Arc &a : arcs)
    if (fold[a.target]) a.lm_score += *fold[a.target];

  int32_t max_time = 0;
  std::vector<Node> nodes;
  for (size_t i = 0; i < states.size(); ++i) {
    int32_t t = lat.TimeOfIndex(states[i].node);
    max_time = std::max(max_time, t);
    nodes.push_back({static_cast<int32_t>(i), t});
  }
  if (!via_super.empty()) {
    int32_t super_final = static_cast<int32_t>(states.size());
    nodes.push_back({super_final, max_time});
    for (size_t k = 0; k < via_super.size(); ++k)
      arcs.push_back({via_super[k], super_final, kEpsilon, 0.0, via_super_scores[k]});
    finals.push_back(super_final);
  }
  return Lattice(lat.UtteranceId(), std::move(nodes), std::move(arcs), 0, std::move(finals));
}

}  // namespace nerlat

#endif  // NERLAT_RESCORE_H_
