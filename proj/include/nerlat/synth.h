// nerlat/synth.h

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

// Synthetic corpora and lattices with rare and unseen named entities.
//
// Sentences come from a small template grammar with two entity slot types,
// "street" and "person". Frequent entities of each type fill the training
// templates with Zipf-like weights; each rare entity is injected into the
// training text between 1 and threshold-1 times; unseen entities appear only
// in the test split. Every test lattice is a sausage that contains its
// reference: at entity positions the reference arc competes with
// `confusion_depth` frequent entities of the same type, elsewhere sparse
// confusions are added. Acoustic margins (reference minus competitor, raw
// acoustic units) are Gaussian and clipped at three standard deviations.
// All LM scores are zero; the LM pass supplies them.

#ifndef NERLAT_SYNTH_H_
#define NERLAT_SYNTH_H_

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nerlat/augment.h"
#include "nerlat/base.h"
#include "nerlat/eval.h"
#include "nerlat/lattice.h"
#include "nerlat/lexicon.h"
#include "nerlat/ngram.h"
#include "nerlat/rescore.h"

namespace nerlat {

struct SynthConfig {
  uint64_t seed = 1;
  int64_t threshold = 10;
  size_t num_frequent = 30;  // frequent entities, split between the two types
  size_t num_rare = 40;
  size_t num_oov = 40;
  size_t train_sentences = 4000;
  size_t test_sentences = 300;
  size_t test_occurrences = 3;  // per named entity, at least 2
  double zipf_exponent = 1.0;
  size_t confusion_depth = 4;
  double ne_margin_mean = 100.0;
  double ne_margin_sigma = 50.0;
  double entity_confusion_prob = 0.3;  // frequent entity slot with competitors
  double distractor_prob = 0.1;        // frequent entity slot with an NE competitor
  double distractor_margin_mean = 30.0;
  double filler_confusion_prob = 0.3;
  double filler_margin_mean = 20.0;
  double filler_margin_sigma = 15.0;
  double multiword_prob = 0.15;  // entity names joined with '_'
  size_t num_candidates = kDefaultNumCandidates;
  /// Minimum first-pass 1-best NE-WER on the unseen split; 0 disables.
  double min_first_pass_oov_ne_wer = 40.0;
  size_t max_attempts = 16;

  void Check() const {
    if (threshold < 2)
      throw Error("threshold must be at least 2 so rare counts in [1, threshold) exist");
    if (test_occurrences < 2) throw Error("test_occurrences must be at least 2");
    if (num_frequent < 2 * (num_candidates + 1))
      throw Error("need at least " + std::to_string(2 * (num_candidates + 1)) +
                  " frequent entities for the candidate lists");
    if (confusion_depth < 1) throw Error("confusion_depth must be at least 1");
    if (confusion_depth > num_frequent / 2)
      throw Error("confusion_depth exceeds the frequent entities of one type");
    for (double s : {ne_margin_sigma, filler_margin_sigma})
      if (!(s >= 0.0) || !std::isfinite(s)) throw Error("margin sigma must be finite, >= 0");
    for (double p : {entity_confusion_prob, distractor_prob, filler_confusion_prob, multiword_prob})
      if (!(p >= 0.0 && p <= 1.0)) throw Error("probabilities must lie in [0,1]");
    if (train_sentences == 0) throw Error("train_sentences must be positive");
    if (max_attempts < 1) throw Error("max_attempts must be at least 1");
  }
};

enum class EntityType { kStreet, kPerson };

inline std::string TypeName(EntityType t) { return t == EntityType::kStreet ? "street" : "person"; }

struct SynthEntity {
  std::string word;
  EntityType type = EntityType::kStreet;
};

struct SynthCorpus {
  std::vector<Sentence> train;
  Transcripts test;
  std::vector<SynthEntity> frequent;
  std::vector<SynthEntity> rare;
  std::vector<SynthEntity> oov;

  std::vector<std::string> NeList() const {
    std::vector<std::string> out;
    for (const auto *v : {&rare, &oov})
      for (const auto &e : *v) out.push_back(e.word);
    return out;
  }
};

struct SynthFixture {
  SynthConfig config;
  SynthCorpus corpus;
  std::vector<Lattice> lattices;  // in test utterance order
  CandidateMap candidates;
  size_t attempts = 1;
  double first_pass_oov_ne_wer = 0.0;
};

namespace internal {

// Templates; "$S" is a street slot, "$P" a person slot.
inline const std::vector<std::string> &Templates() {
  static const std::vector<std::string> kTemplates{
      "go to $S road",
      "take me to $S avenue please",
      "how do i get to $S from $S",
      "i live along $S street",
      "is $S near $S",
      "the bus stops at $S",
      "turn left at $S junction",
      "we are driving past $S now",
      "$P is waiting at $S",
      "please call $P now",
      "$P will meet you at $S",
      "tell $P to come home",
      "i had lunch with $P today",
      "send the parcel to $P",
      "what time is it",
      "i am going home now",
      "can you repeat that please",
      "thank you very much",
  };
  return kTemplates;
}

inline std::vector<std::string> TemplateTokens(size_t t) { return SplitTokens(Templates()[t]); }

inline const std::string &SlotToken(EntityType t) {
  static const std::string kS = "$S", kP = "$P";
  return t == EntityType::kStreet ? kS : kP;
}

inline std::set<std::string> FillerWords() {
  std::set<std::string> out;
  for (size_t t = 0; t < Templates().size(); ++t)
    for (const auto &w : TemplateTokens(t))
      if (w[0] != '$') out.insert(w);
  return out;
}

inline std::string MakeName(Rng &rng) {
  static const std::vector<std::string> kOnset{"b", "ch", "d", "g", "h", "j", "k", "l", "m",
                                               "n", "p", "r", "s", "t", "w", "y", "z"};
  static const std::vector<std::string> kRime{"a",  "e",   "i",   "o",  "u",   "ang", "eng",
                                              "ong", "ee", "oh",  "ai", "un",  "ok",  "ar",
                                              "im", "ay",  "ew",  "in", "ua",  "ian"};
  size_t syl = static_cast<size_t>(rng.Range(2, 3));
  std::string w;
  for (size_t i = 0; i < syl; ++i)
    w += kOnset[rng.Below(kOnset.size())] + kRime[rng.Below(kRime.size())];
  return w;
}

inline size_t ZipfDraw(Rng &rng, const std::vector<double> &cdf) {
  double u = rng.Uniform() * cdf.back();
  return static_cast<size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

inline double ClippedNormal(Rng &rng, double mean, double sigma) {
  double z = rng.Normal();
  z = std::max(-3.0, std::min(3.0, z));
  return mean + sigma * z;
}

inline int32_t Duration(const std::string &w) { return 8 + 4 * static_cast<int32_t>(w.size()); }

}  // namespace internal

/// Train and test text plus the entity inventory. Deterministic in cfg.seed.
inline SynthCorpus GenerateCorpus(const SynthConfig &cfg) {
  cfg.Check();
  Rng rng(cfg.seed);
  const std::set<std::string> fillers = internal::FillerWords();
  std::set<std::string> used(fillers.begin(), fillers.end());
  auto fresh = [&](EntityType type) {
    while (true) {
      std::string w = internal::MakeName(rng);
      if (rng.Bernoulli(cfg.multiword_prob)) w = JoinMultiword({w, internal::MakeName(rng)});
      if (used.insert(w).second) return SynthEntity{w, type};
    }
  };
  SynthCorpus c;
  for (size_t i = 0; i < cfg.num_frequent; ++i)
    c.frequent.push_back(fresh(i % 2 ? EntityType::kPerson : EntityType::kStreet));
  for (size_t i = 0; i < cfg.num_rare; ++i)
    c.rare.push_back(fresh(i % 2 ? EntityType::kPerson : EntityType::kStreet));
  for (size_t i = 0; i < cfg.num_oov; ++i)
    c.oov.push_back(fresh(i % 2 ? EntityType::kPerson : EntityType::kStreet));

  std::map<EntityType, std::vector<std::string>> frequent_of;
  for (const auto &e : c.frequent) frequent_of[e.type].push_back(e.word);
  std::map<EntityType, std::vector<double>> cdf_of;
  for (auto &[type, words] : frequent_of) {
    double acc = 0.0;
    for (size_t r = 0; r < words.size(); ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), cfg.zipf_exponent);
      cdf_of[type].push_back(acc);
    }
  }
  auto frequent_entity = [&](EntityType t) {
    return frequent_of[t][internal::ZipfDraw(rng, cdf_of[t])];
  };
  // Templates holding a slot of each type.
  std::map<EntityType, std::vector<size_t>> with_slot;
  for (size_t t = 0; t < internal::Templates().size(); ++t)
    for (EntityType type : {EntityType::kStreet, EntityType::kPerson}) {
      auto toks = internal::TemplateTokens(t);
      if (std::find(toks.begin(), toks.end(), internal::SlotToken(type)) != toks.end())
        with_slot[type].push_back(t);
    }
  // Fills a template, putting `ne` into one slot of its type.
  auto realize = [&](size_t t, const SynthEntity *ne) {
    auto toks = internal::TemplateTokens(t);
    std::vector<size_t> slots;
    if (ne)
      for (size_t i = 0; i < toks.size(); ++i)
        if (toks[i] == internal::SlotToken(ne->type)) slots.push_back(i);
    size_t ne_pos = slots.empty() ? toks.size() : slots[rng.Below(slots.size())];
    for (size_t i = 0; i < toks.size(); ++i) {
      if (i == ne_pos) toks[i] = ne->word;
      else if (toks[i] == "$S") toks[i] = frequent_entity(EntityType::kStreet);
      else if (toks[i] == "$P") toks[i] = frequent_entity(EntityType::kPerson);
    }
    return toks;
  };

  for (size_t i = 0; i < cfg.train_sentences; ++i)
    c.train.push_back(realize(rng.Below(internal::Templates().size()), nullptr));
  for (const auto &ne : c.rare) {
    int64_t n = rng.Range(1, cfg.threshold - 1);
    for (int64_t k = 0; k < n; ++k) {
      const auto &ts = with_slot[ne.type];
      c.train.push_back(realize(ts[rng.Below(ts.size())], &ne));
    }
  }
  rng.Shuffle(c.train);

  std::vector<const SynthEntity *> queue;
  for (const auto *v : {&c.rare, &c.oov})
    for (const auto &e : *v)
      for (size_t k = 0; k < cfg.test_occurrences; ++k) queue.push_back(&e);
  rng.Shuffle(queue);
  size_t n_test = std::max(cfg.test_sentences, queue.size());
  char id[32];
  for (size_t i = 0; i < n_test; ++i) {
    std::vector<std::string> toks;
    if (i < queue.size()) {
      const auto &ts = with_slot[queue[i]->type];
      toks = realize(ts[rng.Below(ts.size())], queue[i]);
    } else {
      toks = realize(rng.Below(internal::Templates().size()), nullptr);
    }
    std::snprintf(id, sizeof(id), "utt%05zu", i + 1);
    c.test.emplace(id, std::move(toks));
  }

  // Every frequent entity must clear the threshold, or the rare/unseen
  // partition of the named entities would not be the only one.
  std::map<std::string, int64_t> counts;
  for (const auto &s : c.train)
    for (const auto &w : s) ++counts[w];
  for (const auto &e : c.frequent)
    if (counts[e.word] < cfg.threshold)
      throw Error("frequent entity '" + e.word + "' occurs only " +
                  std::to_string(counts[e.word]) + " times; raise train_sentences");
  return c;
}

/// One sausage lattice per test utterance (all LM scores zero).
inline std::vector<Lattice> GenerateLattices(const SynthCorpus &c, const SynthConfig &cfg,
                                             uint64_t stream = 0) {
  cfg.Check();
  Rng rng(cfg.seed * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull + stream);
  std::map<std::string, EntityType> ne_type, freq_type;
  for (const auto *v : {&c.rare, &c.oov})
    for (const auto &e : *v) ne_type[e.word] = e.type;
  std::map<EntityType, std::vector<std::string>> frequent_of, ne_of;
  for (const auto &e : c.frequent) {
    frequent_of[e.type].push_back(e.word);
    freq_type[e.word] = e.type;
  }
  for (const auto &[w, t] : ne_type) ne_of[t].push_back(w);
  std::map<EntityType, std::vector<double>> cdf_of;
  for (auto &[type, words] : frequent_of) {
    double acc = 0.0;
    for (size_t r = 0; r < words.size(); ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), cfg.zipf_exponent);
      cdf_of[type].push_back(acc);
    }
  }
  const std::set<std::string> filler_set = internal::FillerWords();
  const std::vector<std::string> fillers(filler_set.begin(), filler_set.end());

  std::vector<Lattice> out;
  for (const auto &[utt, ref] : c.test) {
    std::vector<Node> nodes{{0, 0}};
    std::vector<Arc> arcs;
    int32_t t = 0;
    for (size_t i = 0; i < ref.size(); ++i) {
      const std::string &w = ref[i];
      int32_t src = static_cast<int32_t>(i), dst = src + 1;
      t += internal::Duration(w);
      nodes.push_back({dst, t});
      // Scores are kept at two decimals so they survive the text format.
      auto cents = [](double x) { return std::round(x * 100.0) / 100.0; };
      double ac_ref = cents(-2.0 * internal::Duration(w) - rng.Uniform(0.0, 10.0));
      std::vector<Arc> pos{{src, dst, w, ac_ref, 0.0}};
      auto compete = [&](const std::string &word, double margin) {
        pos.push_back({src, dst, word, cents(ac_ref - margin), 0.0});
      };
      auto nearby_entities = [&](EntityType type, size_t n) {
        std::set<std::string> picked;
        while (picked.size() < n) {
          const std::string &cand = frequent_of[type][internal::ZipfDraw(rng, cdf_of[type])];
          if (cand != w && picked.insert(cand).second)
            compete(cand, internal::ClippedNormal(rng, cfg.ne_margin_mean, cfg.ne_margin_sigma));
        }
      };
      if (auto it = ne_type.find(w); it != ne_type.end()) {
        nearby_entities(it->second, cfg.confusion_depth);
      } else if (auto ft = freq_type.find(w); ft != freq_type.end()) {
        if (rng.Bernoulli(cfg.entity_confusion_prob))
          nearby_entities(ft->second, std::max<size_t>(1, cfg.confusion_depth / 2));
        if (rng.Bernoulli(cfg.distractor_prob)) {
          const auto &nes = ne_of[ft->second];
          compete(nes[rng.Below(nes.size())],
                  internal::ClippedNormal(rng, cfg.distractor_margin_mean, cfg.ne_margin_sigma));
        }
      } else if (rng.Bernoulli(cfg.filler_confusion_prob)) {
        std::string alt;
        do alt = fillers[rng.Below(fillers.size())]; while (alt == w);
        compete(alt, internal::ClippedNormal(rng, cfg.filler_margin_mean, cfg.filler_margin_sigma));
      }
      rng.Shuffle(pos);
      arcs.insert(arcs.end(), pos.begin(), pos.end());
    }
    out.emplace_back(utt, std::move(nodes), std::move(arcs), 0,
                     std::vector<int32_t>{static_cast<int32_t>(ref.size())});
  }
  return out;
}

/// Per-type word lists: frequent entities first (by position), then NEs.
inline std::map<std::string, std::string> EntityCategories(const SynthCorpus &c) {
  std::map<std::string, std::string> out;
  for (const auto *v : {&c.frequent, &c.rare, &c.oov})
    for (const auto &e : *v) out[e.word] = TypeName(e.type);
  return out;
}

inline CandidateMap SynthCandidates(const SynthCorpus &c, size_t k) {
  CandidateMap out;
  for (EntityType type : {EntityType::kStreet, EntityType::kPerson}) {
    std::vector<std::string> words, nes;
    for (const auto &e : c.frequent)
      if (e.type == type) words.push_back(e.word);
    for (const auto *v : {&c.rare, &c.oov})
      for (const auto &e : *v)
        if (e.type == type) nes.push_back(e.word);
    CandidateMap part = SelectFrequentCandidates(nes, words, c.train, k);
    out.insert(part.begin(), part.end());
  }
  return out;
}

/// 1-best NE-WER on the unseen split after a first pass with a 4-gram KN
/// model over the full lattice vocabulary.
inline double FirstPassOovNeWer(const SynthCorpus &c, const std::vector<Lattice> &lats,
                                int64_t threshold = 10) {
  std::set<std::string> vocab;
  for (const auto &s : c.train) vocab.insert(s.begin(), s.end());
  for (const auto &w : c.NeList()) vocab.insert(w);
  NGramLM kn = TrainKneserNey(c.train, 4, vocab);
  InterpolationConfig ic;
  ic.kn_weight = 1.0;
  std::vector<RefHyp> pairs;
  size_t i = 0;
  for (const auto &[utt, ref] : c.test) {
    Lattice scored = RescoreLattice(lats[i++], kn, nullptr, ic);
    pairs.emplace_back(ref, BestPath(scored, ic.scales).words);
  }
  NEInventory inv = ClassifyNes(c.NeList(), c.train, threshold);
  auto r = NeWer(pairs, inv).Oov();
  return r ? *r : 0.0;
}

/// Corpus, lattices and candidate map. Lattices are regenerated from a new
/// random stream until the first-pass NE-WER floor on unseen entities holds.
inline SynthFixture GenerateFixture(const SynthConfig &cfg) {
  cfg.Check();
  SynthFixture f;
  f.config = cfg;
  f.corpus = GenerateCorpus(cfg);
  f.candidates = SynthCandidates(f.corpus, cfg.num_candidates);
  for (size_t attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    f.lattices = GenerateLattices(f.corpus, cfg, attempt);
    f.attempts = attempt + 1;
    if (cfg.min_first_pass_oov_ne_wer <= 0.0) return f;
    f.first_pass_oov_ne_wer = FirstPassOovNeWer(f.corpus, f.lattices, cfg.threshold);
    if (f.first_pass_oov_ne_wer >= cfg.min_first_pass_oov_ne_wer) return f;
  }
  throw Error("first-pass NE-WER on unseen entities stayed below " +
              FormatFixed(cfg.min_first_pass_oov_ne_wer, 2) + " after " +
              std::to_string(cfg.max_attempts) + " attempts");
}

// ---------------------------------------------------------------------------
// Config files: flat "key=value" lines, '#' comments.

inline std::map<std::string, std::string> ReadKeyValues(const std::string &text) {
  std::map<std::string, std::string> out;
  auto lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    auto toks = SplitWhitespace(line);
    if (toks.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(i + 1, "expected key=value");
    auto key = SplitWhitespace(line.substr(0, eq));
    auto val = SplitWhitespace(line.substr(eq + 1));
    if (key.size() != 1 || val.size() > 1) throw ParseError(i + 1, "expected key=value");
    std::string k(key[0]);
    if (!out.emplace(k, val.empty() ? std::string() : std::string(val[0])).second)
      throw ParseError(i + 1, "duplicate key " + k);
  }
  return out;
}

namespace internal {

class KeyReader {
 public:
  explicit KeyReader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  void Double(const std::string &k, double *v) {
    if (auto s = Take(k)) {
      auto d = ParseDouble(*s);
      if (!d) throw Error("config key " + k + ": not a number: " + *s);
      *v = *d;
    }
  }
  template <typename Int>
  void Integer(const std::string &k, Int *v) {
    if (auto s = Take(k)) {
      auto d = ParseInt(*s);
      if (!d || *d < 0) throw Error("config key " + k + ": not a non-negative integer: " + *s);
      *v = static_cast<Int>(*d);
    }
  }
  void Bool(const std::string &k, bool *v) {
    if (auto s = Take(k)) {
      if (*s == "true" || *s == "on" || *s == "1") *v = true;
      else if (*s == "false" || *s == "off" || *s == "0") *v = false;
      else throw Error("config key " + k + ": expected on/off: " + *s);
    }
  }
  void String(const std::string &k, std::string *v) {
    if (auto s = Take(k)) *v = *s;
  }
  void Finish() const {
    if (!kv_.empty()) throw Error("unknown config key " + kv_.begin()->first);
  }

 private:
  std::optional<std::string> Take(const std::string &k) {
    auto it = kv_.find(k);
    if (it == kv_.end()) return std::nullopt;
    std::string v = it->second;
    kv_.erase(it);
    return v;
  }
  std::map<std::string, std::string> kv_;
};

}  // namespace internal

inline SynthConfig ParseSynthConfig(const std::string &text) {
  SynthConfig c;
  internal::KeyReader r(ReadKeyValues(text));
  r.Integer("seed", &c.seed);
  r.Integer("threshold", &c.threshold);
  r.Integer("num_frequent", &c.num_frequent);
  r.Integer("num_rare", &c.num_rare);
  r.Integer("num_oov", &c.num_oov);
  r.Integer("train_sentences", &c.train_sentences);
  r.Integer("test_sentences", &c.test_sentences);
  r.Integer("test_occurrences", &c.test_occurrences);
  r.Double("zipf_exponent", &c.zipf_exponent);
  r.Integer("confusion_depth", &c.confusion_depth);
  r.Double("ne_margin_mean", &c.ne_margin_mean);
  r.Double("ne_margin_sigma", &c.ne_margin_sigma);
  r.Double("entity_confusion_prob", &c.entity_confusion_prob);
  r.Double("distractor_prob", &c.distractor_prob);
  r.Double("distractor_margin_mean", &c.distractor_margin_mean);
  r.Double("filler_confusion_prob", &c.filler_confusion_prob);
  r.Double("filler_margin_mean", &c.filler_margin_mean);
  r.Double("filler_margin_sigma", &c.filler_margin_sigma);
  r.Double("multiword_prob", &c.multiword_prob);
  r.Integer("num_candidates", &c.num_candidates);
  r.Double("min_first_pass_oov_ne_wer", &c.min_first_pass_oov_ne_wer);
  r.Integer("max_attempts", &c.max_attempts);
  r.Finish();
  c.Check();
  return c;
}

inline std::string WriteSynthConfig(const SynthConfig &c) {
  std::string o;
  auto put = [&](const std::string &k, const std::string &v) { o += k + "=" + v + "\n"; };
  put("seed", std::to_string(c.seed));
  put("threshold", std::to_string(c.threshold));
  put("num_frequent", std::to_string(c.num_frequent));
  put("num_rare", std::to_string(c.num_rare));
  put("num_oov", std::to_string(c.num_oov));
  put("train_sentences", std::to_string(c.train_sentences));
  put("test_sentences", std::to_string(c.test_sentences));
  put("test_occurrences", std::to_string(c.test_occurrences));
  put("zipf_exponent", FormatSig(c.zipf_exponent));
  put("confusion_depth", std::to_string(c.confusion_depth));
  put("ne_margin_mean", FormatSig(c.ne_margin_mean));
  put("ne_margin_sigma", FormatSig(c.ne_margin_sigma));
  put("entity_confusion_prob", FormatSig(c.entity_confusion_prob));
  put("distractor_prob", FormatSig(c.distractor_prob));
  put("distractor_margin_mean", FormatSig(c.distractor_margin_mean));
  put("filler_confusion_prob", FormatSig(c.filler_confusion_prob));
  put("filler_margin_mean", FormatSig(c.filler_margin_mean));
  put("filler_margin_sigma", FormatSig(c.filler_margin_sigma));
  put("multiword_prob", FormatSig(c.multiword_prob));
  put("num_candidates", std::to_string(c.num_candidates));
  put("min_first_pass_oov_ne_wer", FormatSig(c.min_first_pass_oov_ne_wer));
  put("max_attempts", std::to_string(c.max_attempts));
  return o;
}

/// The bundled preset used for the ablation report.
inline SynthConfig AblationPreset() { return SynthConfig{}; }

/// File name -> contents for a fixture directory.
inline std::map<std::string, std::string> FixtureFiles(const SynthFixture &f) {
  std::map<std::string, std::string> files;
  files["synth.conf"] = WriteSynthConfig(f.config);
  files["train.txt"] = WriteCorpus(f.corpus.train);
  files["test.ref"] = WriteTranscripts(f.corpus.test);
  files["lattices.txt"] = WriteLattices(f.lattices);
  std::string nes;
  for (const auto &w : f.corpus.NeList()) nes += w + "\n";
  files["ne_list.txt"] = nes;
  std::string cats;
  for (const auto &[w, t] : EntityCategories(f.corpus)) cats += w + "\t" + t + "\n";
  files["categories.txt"] = cats;
  files["candidates.txt"] = WriteCandidateMap(f.candidates);
  return files;
}

}  // namespace nerlat

#endif  // NERLAT_SYNTH_H_
