// nerlat/pipeline.h

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

// The ablation ladder: baseline 1-best, lexicon expansion, neural LM
// rescoring with and without letter features, embedding augmentation and
// lattice boosting, each scored for WER and NE-WER.
//
// Row r builds on row Parent(r):
//   1 baseline       first pass with a KN model over the training-word lexicon
//   2 +lexicon       unseen NEs added to the lexicon and the first-pass LM
//   3 +nlm           interpolated rescoring with a plain neural LM
//   4 +nlm-letters   same with letter n-gram features
//   5 / 6            rows 3 / 4 with augmented embeddings
//   7 / 8 / 9 / 10   rows 3 / 4 / 5 / 6 with NE boosting

#ifndef NERLAT_PIPELINE_H_
#define NERLAT_PIPELINE_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nerlat/augment.h"
#include "nerlat/base.h"
#include "nerlat/boost.h"
#include "nerlat/eval.h"
#include "nerlat/lattice.h"
#include "nerlat/lexicon.h"
#include "nerlat/neural-lm.h"
#include "nerlat/ngram.h"
#include "nerlat/rescore.h"
#include "nerlat/synth.h"

namespace nerlat {

struct PipelineConfig {
  // Input files, relative to the config file's directory.
  std::string train = "train.txt";
  std::string test_ref = "test.ref";
  std::string lattices = "lattices.txt";
  std::string ne_list = "ne_list.txt";
  std::string candidates = "candidates.txt";

  bool expand_lexicon = true;
  bool neural_lm = true;
  bool letter_features = true;
  bool augment = true;
  bool boost = true;

  int64_t threshold = 10;
  int ngram_order = 4;
  double kn_weight = 0.6;
  double acoustic_scale = 0.1;
  double lm_scale = 1.0;
  size_t state_cap = 50000;

  int nlm_dim = 32;
  int nlm_epochs = 8;
  double nlm_learning_rate = 0.05;
  double nlm_init_scale = 0.1;
  double nlm_clip_norm = 5.0;
  int letter_ngram_min = 2;
  int letter_ngram_max = 5;
  int letter_slots = 10000;
  uint64_t seed = 1;

  double theta_rare = kDefaultThetaRare;
  double theta_oov = kDefaultThetaOov;
  size_t num_candidates = kDefaultNumCandidates;
  double boost_bonus = kDefaultBoostBonus;

  ScaleConfig Scales() const { return {acoustic_scale, lm_scale}; }

  NeuralLMConfig Neural(bool letters) const {
    NeuralLMConfig n;
    n.dim = nlm_dim;
    n.letter_features = letters;
    n.ngram_min = letter_ngram_min;
    n.ngram_max = letter_ngram_max;
    n.slots = letter_slots;
    n.epochs = nlm_epochs;
    n.learning_rate = nlm_learning_rate;
    n.init_scale = nlm_init_scale;
    n.clip_norm = nlm_clip_norm;
    n.seed = seed;
    return n;
  }

  void Check() const {
    Scales().Check();
    if (ngram_order < 1 || ngram_order > 5) throw Error("ngram_order must be in [1,5]");
    if (!(kn_weight >= 0.0 && kn_weight <= 1.0)) throw Error("kn_weight must lie in [0,1]");
    if (threshold < 1) throw Error("threshold must be at least 1");
    if (!(boost_bonus >= 0.0) || !std::isfinite(boost_bonus))
      throw Error("boost_bonus must be finite and non-negative");
    if (letter_ngram_min < 1 || letter_ngram_max < letter_ngram_min)
      throw Error("letter n-gram range is empty");
  }
};

inline PipelineConfig ParsePipelineConfig(const std::string &text) {
  PipelineConfig c;
  internal::KeyReader r(ReadKeyValues(text));
  r.String("train", &c.train);
  r.String("test_ref", &c.test_ref);
  r.String("lattices", &c.lattices);
  r.String("ne_list", &c.ne_list);
  r.String("candidates", &c.candidates);
  r.Bool("expand_lexicon", &c.expand_lexicon);
  r.Bool("neural_lm", &c.neural_lm);
  r.Bool("letter_features", &c.letter_features);
  r.Bool("augment", &c.augment);
  r.Bool("boost", &c.boost);
  r.Integer("threshold", &c.threshold);
  r.Integer("ngram_order", &c.ngram_order);
  r.Double("kn_weight", &c.kn_weight);
  r.Double("acoustic_scale", &c.acoustic_scale);
  r.Double("lm_scale", &c.lm_scale);
  r.Integer("state_cap", &c.state_cap);
  r.Integer("nlm_dim", &c.nlm_dim);
  r.Integer("nlm_epochs", &c.nlm_epochs);
  r.Double("nlm_learning_rate", &c.nlm_learning_rate);
  r.Double("nlm_init_scale", &c.nlm_init_scale);
  r.Double("nlm_clip_norm", &c.nlm_clip_norm);
  r.Integer("letter_ngram_min", &c.letter_ngram_min);
  r.Integer("letter_ngram_max", &c.letter_ngram_max);
  r.Integer("letter_slots", &c.letter_slots);
  r.Integer("seed", &c.seed);
  r.Double("theta_rare", &c.theta_rare);
  r.Double("theta_oov", &c.theta_oov);
  r.Integer("num_candidates", &c.num_candidates);
  r.Double("boost_bonus", &c.boost_bonus);
  r.Finish();
  c.Check();
  return c;
}

inline std::string WritePipelineConfig(const PipelineConfig &c) {
  std::string o;
  auto put = [&](const std::string &k, const std::string &v) { o += k + "=" + v + "\n"; };
  auto onoff = [](bool b) { return std::string(b ? "on" : "off"); };
  put("train", c.train);
  put("test_ref", c.test_ref);
  put("lattices", c.lattices);
  put("ne_list", c.ne_list);
  put("candidates", c.candidates);
  put("expand_lexicon", onoff(c.expand_lexicon));
  put("neural_lm", onoff(c.neural_lm));
  put("letter_features", onoff(c.letter_features));
  put("augment", onoff(c.augment));
  put("boost", onoff(c.boost));
  put("threshold", std::to_string(c.threshold));
  put("ngram_order", std::to_string(c.ngram_order));
  put("kn_weight", FormatSig(c.kn_weight));
  put("acoustic_scale", FormatSig(c.acoustic_scale));
  put("lm_scale", FormatSig(c.lm_scale));
  put("state_cap", std::to_string(c.state_cap));
  put("nlm_dim", std::to_string(c.nlm_dim));
  put("nlm_epochs", std::to_string(c.nlm_epochs));
  put("nlm_learning_rate", FormatSig(c.nlm_learning_rate));
  put("nlm_init_scale", FormatSig(c.nlm_init_scale));
  put("nlm_clip_norm", FormatSig(c.nlm_clip_norm));
  put("letter_ngram_min", std::to_string(c.letter_ngram_min));
  put("letter_ngram_max", std::to_string(c.letter_ngram_max));
  put("letter_slots", std::to_string(c.letter_slots));
  put("seed", std::to_string(c.seed));
  put("theta_rare", FormatSig(c.theta_rare));
  put("theta_oov", FormatSig(c.theta_oov));
  put("num_candidates", std::to_string(c.num_candidates));
  put("boost_bonus", FormatSig(c.boost_bonus));
  return o;
}

struct PipelineInputs {
  std::vector<Sentence> train;
  Transcripts test;
  std::vector<Lattice> lattices;
  std::vector<std::string> ne_list;
  CandidateMap candidates;
};

/// Reads the files named by `cfg`, resolved against `base_dir`.
inline PipelineInputs LoadPipelineInputs(const PipelineConfig &cfg,
                                         const std::filesystem::path &base_dir) {
  auto read = [&](const std::string &name) {
    std::filesystem::path p(name);
    if (p.is_relative()) p = base_dir / p;
    return ReadFileToString(p.string());
  };
  PipelineInputs in;
  in.train = ReadCorpus(read(cfg.train));
  in.test = ReadTranscripts(read(cfg.test_ref));
  in.lattices = ReadLattices(read(cfg.lattices));
  for (const auto &line : SplitLines(read(cfg.ne_list)))
    for (auto &t : SplitTokens(line)) in.ne_list.push_back(std::move(t));
  in.candidates = ReadCandidateMap(read(cfg.candidates));
  return in;
}

struct AblationRow {
  int row = 0;
  int parent = 0;  // 0 for the baseline
  std::string label;
  WerStats wer;
  NeWerResult ne;
  Transcripts hyps;
};

struct AblationLog {
  std::vector<std::string> lines;
  void Add(std::string s) { lines.push_back(std::move(s)); }
};

namespace internal {

/// Drops arcs whose word is outside `words`, then trims to connected nodes.
inline Lattice RestrictToWords(const Lattice &lat, const std::set<std::string> &words) {
  std::vector<Arc> arcs;
  for (const Arc &a : lat.Arcs())
    if (a.IsEpsilon() || words.count(a.word)) arcs.push_back(a);
  if (arcs.size() == lat.NumArcs()) return lat;
  Lattice kept(lat.UtteranceId(), lat.Nodes(), std::move(arcs), lat.StartNode(),
               lat.FinalNodes());
  return Connect(kept);
}

}  // namespace internal

/// Runs every enabled row. Results do not depend on `jobs`.
inline std::vector<AblationRow> RunAblation(const PipelineInputs &in, const PipelineConfig &cfg,
                                            int jobs = 1, AblationLog *log = nullptr) {
  cfg.Check();
  const ScaleConfig scales = cfg.Scales();
  auto note = [&](const std::string &s) {
    if (log) log->Add(s);
  };
  if (in.lattices.size() != in.test.size())
    throw Error(std::to_string(in.lattices.size()) + " lattices for " +
                std::to_string(in.test.size()) + " reference utterances");
  for (const auto &lat : in.lattices)
    if (!in.test.count(lat.UtteranceId()))
      throw Error("lattice for unknown utterance " + lat.UtteranceId());

  std::set<std::string> train_words;
  for (const auto &s : in.train) train_words.insert(s.begin(), s.end());
  const NEInventory inv = ClassifyNes(in.ne_list, in.train, cfg.threshold);
  const std::set<std::string> ne_set = inv.All();
  note("ne_rare=" + std::to_string(inv.rare.size()) + " ne_oov=" + std::to_string(inv.oov.size()) +
       " ne_excluded=" + std::to_string(inv.excluded.size()));

  const Lexicon base_lex = BuildGraphemicLexicon(train_words);
  Lexicon lex = base_lex;
  if (cfg.expand_lexicon) {
    std::vector<std::string> add(inv.oov.begin(), inv.oov.end());
    ExpansionResult er = ExpandLexicon(base_lex, add);
    lex = er.lexicon;
    note("lexicon_words=" + std::to_string(base_lex.NumWords()) + " added=" +
         std::to_string(er.added) + " expanded_words=" + std::to_string(lex.NumWords()));
  }

  std::vector<AblationRow> rows;
  auto score = [&](int row, int parent, const std::string &label,
                   const std::vector<Lattice> &lats) {
    std::vector<Hypothesis> best(lats.size());
    ParallelFor(lats.size(), jobs, [&](size_t i) { best[i] = BestPath(lats[i], scales); });
    AblationRow r;
    r.row = row;
    r.parent = parent;
    r.label = label;
    for (size_t i = 0; i < lats.size(); ++i) r.hyps[lats[i].UtteranceId()] = best[i].words;
    auto pairs = PairTranscripts(in.test, r.hyps);
    r.wer = ComputeWerStats(pairs);
    r.ne = NeWer(pairs, inv);
    rows.push_back(std::move(r));
  };
  auto first_pass = [&](const Lexicon &l) {
    std::set<std::string> words = l.Words();
    NGramLM kn = TrainKneserNey(in.train, cfg.ngram_order, words);
    InterpolationConfig ic;
    ic.kn_weight = 1.0;
    ic.scales = scales;
    ic.state_cap = cfg.state_cap;
    std::vector<Lattice> out(in.lattices.size());
    ParallelFor(in.lattices.size(), jobs, [&](size_t i) {
      out[i] = RescoreLattice(internal::RestrictToWords(in.lattices[i], words), kn, nullptr, ic);
    });
    return std::make_pair(std::move(kn), std::move(out));
  };

  auto [kn_base, lats1] = first_pass(base_lex);
  score(1, 0, "baseline", lats1);
  int base_row = 1;
  NGramLM kn = kn_base;
  std::vector<Lattice> first = lats1;
  if (cfg.expand_lexicon) {
    auto [kn2, lats2] = first_pass(lex);
    kn = std::move(kn2);
    first = std::move(lats2);
    score(2, 1, "(1) + expanded lexicon", first);
    base_row = 2;
  }
  if (!cfg.neural_lm) return rows;

  std::set<std::string> lex_words = lex.Words();
  std::vector<std::string> nlm_vocab(lex_words.begin(), lex_words.end());
  InterpolationConfig ic;
  ic.kn_weight = cfg.kn_weight;
  ic.scales = scales;
  ic.state_cap = cfg.state_cap;
  auto rescore = [&](const NeuralLM &nlm) {
    std::vector<Lattice> out(first.size());
    ParallelFor(first.size(), jobs,
                [&](size_t i) { out[i] = RescoreLattice(first[i], kn, &nlm, ic); });
    return out;
  };
  auto boost = [&](const std::vector<Lattice> &lats) {
    InvertedIndex boosted = BoostIndex(BuildIndex(lats, scales, jobs), ne_set, cfg.boost_bonus);
    // Split the boosted index per utterance so regeneration stays linear.
    std::map<std::string, InvertedIndex::Map> per;
    for (const auto &[w, list] : boosted.Entries())
      for (const auto &e : list) per[e.utterance_id][w].push_back(e);
    std::vector<Lattice> out(lats.size());
    std::vector<InvertedIndex> parts;
    for (const auto &lat : lats) parts.emplace_back(std::move(per[lat.UtteranceId()]));
    ParallelFor(lats.size(), jobs,
                [&](size_t i) { out[i] = RegenerateLattice(lats[i], parts[i], scales); });
    return out;
  };
  std::string base_tag = "(" + std::to_string(base_row) + ")";

  struct Variant {
    bool letters;
    int nlm_row, aug_row, boost_row, aug_boost_row;
    std::string name;
  };
  std::vector<Variant> variants{{false, 3, 5, 7, 9, "neural LM"}};
  if (cfg.letter_features) variants.push_back({true, 4, 6, 8, 10, "neural LM with letter features"});
  std::vector<std::pair<int, std::vector<Lattice>>> pending_boost;
  for (const auto &v : variants) {
    NeuralTrainReport rep;
    NeuralLM nlm = TrainNeuralLM(in.train, nlm_vocab, cfg.Neural(v.letters), &rep);
    note("nlm" + std::string(v.letters ? "_letters" : "") +
         "_train_ppl=" + FormatFixed(rep.perplexity.empty() ? 0.0 : rep.perplexity.back(), 3));
    std::vector<Lattice> rescored = rescore(nlm);
    score(v.nlm_row, base_row, base_tag + " + " + v.name, rescored);
    if (cfg.boost) pending_boost.emplace_back(v.nlm_row, std::move(rescored));
    if (cfg.augment) {
      std::set<std::string> vocab(nlm.Vocab().begin(), nlm.Vocab().end());
      auto plans = BuildPlans(inv, in.candidates, vocab, cfg.num_candidates, cfg.theta_rare,
                              cfg.theta_oov);
      NeuralLM aug = AugmentEmbeddings(nlm, plans);
      std::vector<Lattice> aug_lats = rescore(aug);
      score(v.aug_row, v.nlm_row, "(" + std::to_string(v.nlm_row) + ") + embedding augmentation",
            aug_lats);
      if (cfg.boost) pending_boost.emplace_back(v.aug_row, std::move(aug_lats));
    }
  }
  for (auto &[parent, lats] : pending_boost) {
    int row = parent == 3 ? 7 : parent == 4 ? 8 : parent == 5 ? 9 : 10;
    score(row, parent, "(" + std::to_string(parent) + ") + lattice boosting", boost(lats));
  }
  std::sort(rows.begin(), rows.end(),
            [](const AblationRow &a, const AblationRow &b) { return a.row < b.row; });
  return rows;
}

inline const AblationRow *FindRow(const std::vector<AblationRow> &rows, int row) {
  for (const auto &r : rows)
    if (r.row == row) return &r;
  return nullptr;
}

/// Fixed-width table, then one key=value block per row.
inline std::string FormatAblationReport(const std::vector<AblationRow> &rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-5s %-42s %7s %8s %8s %8s\n", "row", "system", "WER",
                "NE-WER", "rare", "oov");
  out += buf;
  for (const auto &r : rows) {
    std::snprintf(buf, sizeof(buf), "%-5s %-42s %7s %8s %8s %8s\n",
                  ("(" + std::to_string(r.row) + ")").c_str(), r.label.c_str(),
                  FormatFixed(r.wer.Wer(), 2).c_str(), FormatRate(r.ne.Overall()).c_str(),
                  FormatRate(r.ne.Rare()).c_str(), FormatRate(r.ne.Oov()).c_str());
    out += buf;
  }
  for (const auto &r : rows) {
    out += "\n[row " + std::to_string(r.row) + "]\n";
    out += "label=" + r.label + "\n";
    out += "parent=" + std::to_string(r.parent) + "\n";
    out += ScoreReport(r.wer, r.ne);
    out += "S=" + std::to_string(r.wer.substitutions) + "\n";
    out += "D=" + std::to_string(r.wer.deletions) + "\n";
    out += "I=" + std::to_string(r.wer.insertions) + "\n";
    out += "N=" + std::to_string(r.wer.ref_words) + "\n";
  }
  return out;
}

}  // namespace nerlat

#endif  // NERLAT_PIPELINE_H_
