// tools/nerlat.cc

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

// Command-line driver: one subcommand per library operation, plus the
// synthetic fixture generator and the ablation report. Data goes to --out
// (or stdout); summaries are key=value lines on stdout. Exit status is 0 on
// success and 1 on any error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nerlat/augment.h"
#include "nerlat/base.h"
#include "nerlat/boost.h"
#include "nerlat/eval.h"
#include "nerlat/lattice.h"
#include "nerlat/lexicon.h"
#include "nerlat/neural-lm.h"
#include "nerlat/ngram.h"
#include "nerlat/pipeline.h"
#include "nerlat/rescore.h"
#include "nerlat/synth.h"

namespace {

using namespace nerlat;

void Emit(const std::string &out, const std::string &text) {
  if (out.empty() || out == "-") std::cout << text;
  else WriteStringToFile(out, text);
}

void KeyValue(const std::string &k, const std::string &v) { std::cout << k << "=" << v << "\n"; }

std::vector<std::string> ReadWordList(const std::string &path) {
  std::vector<std::string> out;
  for (const auto &line : SplitLines(ReadFileToString(path)))
    for (auto &t : SplitTokens(line)) out.push_back(std::move(t));
  return out;
}

struct Scales {
  double acoustic = 0.1, lm = 1.0;
  void Add(CLI::App *app) {
    app->add_option("--acoustic-scale", acoustic, "Acoustic score scale")->capture_default_str();
    app->add_option("--lm-scale", lm, "LM score scale")->capture_default_str();
  }
  ScaleConfig Get() const {
    ScaleConfig s{acoustic, lm};
    s.Check();
    return s;
  }
};

std::string HypLine(const std::string &utt, const Hypothesis &h) {
  return utt + "\t" + JoinTokens(h.words) + "\n";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Lattice rescoring and named-entity recovery toolkit"};
  app.require_subcommand(1);
  std::function<void()> run;

  // lattice ------------------------------------------------------------------
  auto *lat = app.add_subcommand("lattice", "Lattice search and posteriors");
  lat->require_subcommand(1);
  std::string lat_in, out;
  Scales scales;
  size_t nbest = 10;
  int jobs = 1;
  {
    auto *c = lat->add_subcommand("best-path", "1-best word sequence per lattice");
    c->add_option("--lattices", lat_in, "Lattice file")->required();
    c->add_option("--out", out, "Transcript output (default stdout)");
    scales.Add(c);
    c->callback([&] {
      run = [&] {
        std::string text;
        for (const auto &l : ReadLattices(ReadFileToString(lat_in)))
          text += HypLine(l.UtteranceId(), BestPath(l, scales.Get()));
        Emit(out, text);
      };
    });
  }
  {
    auto *c = lat->add_subcommand("posteriors", "Arc posteriors by forward-backward");
    c->add_option("--lattices", lat_in, "Lattice file")->required();
    c->add_option("--out", out, "Output (default stdout)");
    scales.Add(c);
    c->callback([&] {
      run = [&] {
        std::string text;
        for (const auto &l : ReadLattices(ReadFileToString(lat_in))) {
          ArcPosteriors p = ForwardBackward(l, scales.Get());
          text += "utt=" + l.UtteranceId() + " total_logprob=" + FormatSig(p.total_logprob) + "\n";
          for (size_t a = 0; a < l.NumArcs(); ++a) {
            const Arc &arc = l.Arcs()[a];
            text += std::to_string(a) + "\t" + std::to_string(arc.source) + "\t" +
                    std::to_string(arc.target) + "\t" + arc.word + "\t" +
                    FormatSig(p.posterior[a]) + "\n";
          }
        }
        Emit(out, text);
      };
    });
  }
  {
    auto *c = lat->add_subcommand("nbest", "Top distinct word sequences");
    c->add_option("--lattices", lat_in, "Lattice file")->required();
    c->add_option("--nbest,-n", nbest, "List size")->capture_default_str();
    c->add_option("--out", out, "Output (default stdout)");
    scales.Add(c);
    c->callback([&] {
      run = [&] {
        std::string text;
        for (const auto &l : ReadLattices(ReadFileToString(lat_in))) {
          auto hyps = NBest(l, scales.Get(), nbest);
          for (size_t r = 0; r < hyps.size(); ++r)
            text += l.UtteranceId() + "\t" + std::to_string(r + 1) + "\t" +
                    FormatSig(hyps[r].total_score) + "\t" + FormatSig(hyps[r].acoustic_score) +
                    "\t" + FormatSig(hyps[r].lm_score) + "\t" + JoinTokens(hyps[r].words) + "\n";
        }
        Emit(out, text);
      };
    });
  }

  // lexicon ------------------------------------------------------------------
  auto *lexc = app.add_subcommand("lexicon", "Graphemic lexicons");
  lexc->require_subcommand(1);
  std::string words_in, lex_in;
  {
    auto *c = lexc->add_subcommand("graphemize", "Build a graphemic lexicon from a word list");
    c->add_option("--words", words_in, "Word list")->required();
    c->add_option("--out", out, "Lexicon output")->required();
    c->callback([&] {
      run = [&] {
        auto words = ReadWordList(words_in);
        Lexicon lex = BuildGraphemicLexicon({words.begin(), words.end()});
        WriteStringToFile(out, WriteLexicon(lex));
        KeyValue("words", std::to_string(lex.NumWords()));
        KeyValue("units", std::to_string(lex.Units().size()));
      };
    });
  }
  {
    auto *c = lexc->add_subcommand("expand", "Add graphemic entries for new words");
    c->add_option("--lexicon", lex_in, "Input lexicon")->required();
    c->add_option("--words", words_in, "Words to add")->required();
    c->add_option("--out", out, "Lexicon output")->required();
    c->callback([&] {
      run = [&] {
        Lexicon lex = ReadLexicon(ReadFileToString(lex_in));
        ExpansionResult r = ExpandLexicon(lex, ReadWordList(words_in));
        WriteStringToFile(out, WriteLexicon(r.lexicon));
        KeyValue("words_before", std::to_string(lex.NumWords()));
        KeyValue("added", std::to_string(r.added));
        KeyValue("words_after", std::to_string(r.lexicon.NumWords()));
      };
    });
  }

  // ngram --------------------------------------------------------------------
  auto *ng = app.add_subcommand("ngram", "Kneser-Ney n-gram models");
  ng->require_subcommand(1);
  std::string corpus_in, vocab_in, lm_in;
  int order = 4;
  {
    auto *c = ng->add_subcommand("train", "Train an interpolated KN model");
    c->add_option("--corpus", corpus_in, "Training text")->required();
    c->add_option("--order", order, "Model order")->capture_default_str();
    c->add_option("--vocab", vocab_in, "Closed vocabulary (default: corpus tokens)");
    c->add_option("--out", out, "ARPA output")->required();
    c->callback([&] {
      run = [&] {
        std::set<std::string> vocab;
        if (!vocab_in.empty())
          for (auto &w : ReadWordList(vocab_in)) vocab.insert(w);
        KneserNeyReport rep;
        NGramLM lm = TrainKneserNey(ReadCorpus(ReadFileToString(corpus_in)), order, vocab, &rep);
        WriteStringToFile(out, WriteArpa(lm));
        KeyValue("order", std::to_string(lm.Order()));
        for (int k = 1; k <= lm.Order(); ++k) {
          KeyValue("ngrams_" + std::to_string(k), std::to_string(lm.TableOf(k).size()));
          KeyValue("discount_" + std::to_string(k), FormatSig(rep.discounts[k - 1]));
        }
        for (const auto &w : rep.warnings) std::cerr << "warning: " << w << "\n";
      };
    });
  }
  {
    auto *c = ng->add_subcommand("score", "Log probability and perplexity of a text");
    c->add_option("--lm", lm_in, "ARPA model")->required();
    c->add_option("--corpus", corpus_in, "Text")->required();
    c->callback([&] {
      run = [&] {
        NGramLM lm = ReadArpa(ReadFileToString(lm_in));
        auto corpus = ReadCorpus(ReadFileToString(corpus_in));
        double lp = 0.0;
        size_t n = 0;
        for (const auto &s : corpus) {
          lp += lm.SentenceLogProb(s);
          n += s.size() + 1;
        }
        KeyValue("sentences", std::to_string(corpus.size()));
        KeyValue("tokens", std::to_string(n));
        KeyValue("logprob10", FormatSig(lp));
        KeyValue("perplexity", FormatSig(lm.Perplexity(corpus)));
      };
    });
  }

  // nlm ----------------------------------------------------------------------
  auto *nl = app.add_subcommand("nlm", "Recurrent neural LM with tied embeddings");
  nl->require_subcommand(1);
  NeuralLMConfig ncfg;
  std::string model_in, sentence;
  double epsilon = 1e-5;
  {
    auto *c = nl->add_subcommand("train", "Train from scratch");
    c->add_option("--corpus", corpus_in, "Training text")->required();
    c->add_option("--vocab", vocab_in, "Vocabulary (default: corpus tokens)");
    c->add_option("--out", out, "Model output")->required();
    c->add_option("--dim", ncfg.dim, "Embedding and hidden size")->capture_default_str();
    c->add_option("--epochs", ncfg.epochs, "Epochs")->capture_default_str();
    c->add_option("--learning-rate", ncfg.learning_rate, "SGD step")->capture_default_str();
    c->add_option("--clip-norm", ncfg.clip_norm, "Gradient norm clip")->capture_default_str();
    c->add_option("--init-scale", ncfg.init_scale, "Uniform init range")->capture_default_str();
    c->add_flag("--letter-features", ncfg.letter_features, "Add hashed letter n-gram features");
    c->add_option("--ngram-min", ncfg.ngram_min, "Shortest letter n-gram")->capture_default_str();
    c->add_option("--ngram-max", ncfg.ngram_max, "Longest letter n-gram")->capture_default_str();
    c->add_option("--slots", ncfg.slots, "Hashed feature slots")->capture_default_str();
    c->add_option("--seed", ncfg.seed, "Random seed")->capture_default_str();
    c->callback([&] {
      run = [&] {
        auto corpus = ReadCorpus(ReadFileToString(corpus_in));
        std::vector<std::string> vocab;
        if (!vocab_in.empty()) {
          vocab = ReadWordList(vocab_in);
        } else {
          std::set<std::string> v;
          for (const auto &s : corpus) v.insert(s.begin(), s.end());
          vocab.assign(v.begin(), v.end());
        }
        NeuralTrainReport rep;
        NeuralLM lm = TrainNeuralLM(corpus, vocab, ncfg, &rep);
        WriteStringToFile(out, WriteNeuralLM(lm));
        KeyValue("vocab_size", std::to_string(lm.VocabSize()));
        for (size_t e = 0; e < rep.perplexity.size(); ++e)
          KeyValue("epoch_" + std::to_string(e + 1) + "_perplexity", FormatSig(rep.perplexity[e]));
      };
    });
  }
  {
    auto *c = nl->add_subcommand("score", "Perplexity of a text");
    c->add_option("--model", model_in, "Model file")->required();
    c->add_option("--corpus", corpus_in, "Text")->required();
    c->callback([&] {
      run = [&] {
        NeuralLM lm = ReadNeuralLM(ReadFileToString(model_in));
        auto corpus = ReadCorpus(ReadFileToString(corpus_in));
        double lp = 0.0;
        for (const auto &s : corpus) lp += lm.SentenceLogProb(s);
        KeyValue("sentences", std::to_string(corpus.size()));
        KeyValue("logprob", FormatSig(lp));
        KeyValue("perplexity", FormatSig(CorpusPerplexity(lm, corpus)));
      };
    });
  }
  {
    auto *c = nl->add_subcommand("gradcheck", "Compare BPTT gradients with finite differences");
    c->add_option("--model", model_in, "Model file")->required();
    c->add_option("--sentence", sentence, "Space-separated sentence")->required();
    c->add_option("--epsilon", epsilon, "Finite-difference step")->capture_default_str();
    c->callback([&] {
      run = [&] {
        NeuralLM lm = ReadNeuralLM(ReadFileToString(model_in));
        GradientCheckReport r = GradientCheck(lm, SplitTokens(sentence), epsilon);
        for (const auto &[block, e] : r.max_rel_error) KeyValue("max_rel_error_" + block, FormatSig(e));
        KeyValue("max_rel_error", FormatSig(r.overall));
        KeyValue("checked", std::to_string(r.checked));
      };
    });
  }

  // augment ------------------------------------------------------------------
  auto *au = app.add_subcommand("augment", "Embedding matrix augmentation");
  au->require_subcommand(1);
  std::string ne_in, cand_in, plans_out;
  size_t k = kDefaultNumCandidates;
  double theta_rare = kDefaultThetaRare, theta_oov = kDefaultThetaOov;
  int64_t threshold = 10;
  {
    auto *c = au->add_subcommand("apply", "Rewrite NE rows from frequent candidates");
    c->add_option("--model", model_in, "Neural LM")->required();
    c->add_option("--ne-list", ne_in, "Named entities")->required();
    c->add_option("--train", corpus_in, "Training text (for rare/unseen split)")->required();
    c->add_option("--candidates", cand_in, "Candidate map")->required();
    c->add_option("--k", k, "Candidates per NE")->capture_default_str();
    c->add_option("--theta-rare", theta_rare, "Self weight for rare NEs")->capture_default_str();
    c->add_option("--theta-oov", theta_oov, "Self weight for unseen NEs")->capture_default_str();
    c->add_option("--threshold", threshold, "Rare frequency threshold")->capture_default_str();
    c->add_option("--plans", plans_out, "Write the applied plans here");
    c->add_option("--out", out, "Model output")->required();
    c->callback([&] {
      run = [&] {
        NeuralLM lm = ReadNeuralLM(ReadFileToString(model_in));
        NEInventory inv = ClassifyNes(ReadWordList(ne_in), ReadCorpus(ReadFileToString(corpus_in)),
                                      threshold);
        std::set<std::string> vocab(lm.Vocab().begin(), lm.Vocab().end());
        auto plans = BuildPlans(inv, ReadCandidateMap(ReadFileToString(cand_in)), vocab, k,
                                theta_rare, theta_oov);
        NeuralLM aug = AugmentEmbeddings(lm, plans);
        WriteStringToFile(out, WriteNeuralLM(aug));
        if (!plans_out.empty()) WriteStringToFile(plans_out, WritePlans(plans));
        KeyValue("targets", std::to_string(plans.size()));
        KeyValue("rare", std::to_string(inv.rare.size()));
        KeyValue("oov", std::to_string(inv.oov.size()));
        KeyValue("excluded", std::to_string(inv.excluded.size()));
        KeyValue("vocab_size", std::to_string(aug.VocabSize()));
      };
    });
  }

  // rescore ------------------------------------------------------------------
  auto *rs = app.add_subcommand("rescore", "Interpolated KN and neural LM rescoring");
  rs->require_subcommand(1);
  std::string nlm_in;
  InterpolationConfig icfg;
  auto add_rescore_opts = [&](CLI::App *c) {
    c->add_option("--lattices", lat_in, "Lattice file")->required();
    c->add_option("--kn", lm_in, "ARPA model")->required();
    c->add_option("--nlm", nlm_in, "Neural LM (needed unless --kn-weight 1)");
    c->add_option("--kn-weight", icfg.kn_weight, "Interpolation weight of the KN model")
        ->capture_default_str();
    c->add_option("--jobs,-j", jobs, "Worker threads")->capture_default_str();
    scales.Add(c);
  };
  auto load_models = [&] {
    icfg.scales = scales.Get();
    NGramLM kn = ReadArpa(ReadFileToString(lm_in));
    std::optional<NeuralLM> nlm;
    if (!nlm_in.empty()) nlm = ReadNeuralLM(ReadFileToString(nlm_in));
    return std::make_pair(std::move(kn), std::move(nlm));
  };
  {
    auto *c = rs->add_subcommand("lattice", "Exact lattice rescoring by history expansion");
    add_rescore_opts(c);
    c->add_option("--state-cap", icfg.state_cap, "Maximum expanded states per lattice")
        ->capture_default_str();
    c->add_option("--out", out, "Lattice output")->required();
    c->callback([&] {
      run = [&] {
        auto [kn, nlm] = load_models();
        auto lats = ReadLattices(ReadFileToString(lat_in));
        std::vector<Lattice> res(lats.size());
        ParallelFor(lats.size(), jobs, [&](size_t i) {
          res[i] = RescoreLattice(lats[i], kn, nlm ? &*nlm : nullptr, icfg);
        });
        WriteStringToFile(out, WriteLattices(res));
        size_t states = 0;
        for (const auto &l : res) states += l.NumNodes();
        KeyValue("lattices", std::to_string(res.size()));
        KeyValue("states", std::to_string(states));
      };
    });
  }
  {
    auto *c = rs->add_subcommand("nbest", "Rerank n-best lists; prints the new 1-best");
    add_rescore_opts(c);
    c->add_option("--nbest,-n", icfg.nbest_size, "List size")->capture_default_str();
    c->add_option("--out", out, "Transcript output (default stdout)");
    c->callback([&] {
      run = [&] {
        auto [kn, nlm] = load_models();
        auto lats = ReadLattices(ReadFileToString(lat_in));
        std::vector<std::string> lines(lats.size());
        ParallelFor(lats.size(), jobs, [&](size_t i) {
          auto hyps = RescoreNBest(lats[i], kn, nlm ? &*nlm : nullptr, icfg);
          lines[i] = HypLine(lats[i].UtteranceId(), hyps.front());
        });
        std::string text;
        for (const auto &l : lines) text += l;
        Emit(out, text);
      };
    });
  }

  // boost --------------------------------------------------------------------
  auto *bo = app.add_subcommand("boost", "Inverted index and NE boosting");
  bo->require_subcommand(1);
  std::string index_in, query, hyp_out;
  double bonus = kDefaultBoostBonus;
  {
    auto *c = bo->add_subcommand("index", "Build the inverted index of arc posteriors");
    c->add_option("--lattices", lat_in, "Lattice file")->required();
    c->add_option("--out", out, "Index output")->required();
    c->add_option("--jobs,-j", jobs, "Worker threads")->capture_default_str();
    scales.Add(c);
    c->callback([&] {
      run = [&] {
        InvertedIndex idx = BuildIndex(ReadLattices(ReadFileToString(lat_in)), scales.Get(), jobs);
        WriteStringToFile(out, WriteIndex(idx));
        KeyValue("entries", std::to_string(idx.Size()));
        KeyValue("words", std::to_string(idx.Entries().size()));
      };
    });
  }
  {
    auto *c = bo->add_subcommand("search", "Look up one word");
    c->add_option("--index", index_in, "Index file")->required();
    c->add_option("--query", query, "Word")->required();
    c->callback([&] {
      run = [&] {
        auto hits = Search(ReadIndex(ReadFileToString(index_in)), query);
        KeyValue("hits", std::to_string(hits.size()));
        for (const auto &e : hits)
          std::cout << e.utterance_id << "\t" << e.start << "\t" << e.end << "\t"
                    << FormatSig(e.log_posterior) << "\t" << e.arc_index << "\n";
      };
    });
  }
  {
    auto *c = bo->add_subcommand("apply", "Boost NE entries, regenerate lattices, take 1-best");
    c->add_option("--lattices", lat_in, "Lattice file")->required();
    c->add_option("--ne-list", ne_in, "Named entities to boost")->required();
    c->add_option("--index", index_in, "Prebuilt index (default: built here)");
    c->add_option("--boost-bonus", bonus, "Natural-log bonus per NE arc")->capture_default_str();
    c->add_option("--out", out, "Regenerated lattice output")->required();
    c->add_option("--hyp", hyp_out, "Write boosted 1-best transcripts here");
    c->add_option("--jobs,-j", jobs, "Worker threads")->capture_default_str();
    scales.Add(c);
    c->callback([&] {
      run = [&] {
        auto lats = ReadLattices(ReadFileToString(lat_in));
        auto sc = scales.Get();
        InvertedIndex idx = index_in.empty() ? BuildIndex(lats, sc, jobs)
                                             : ReadIndex(ReadFileToString(index_in));
        auto nes = ReadWordList(ne_in);
        InvertedIndex boosted = BoostIndex(idx, {nes.begin(), nes.end()}, bonus);
        std::vector<Lattice> res;
        std::string hyps;
        for (const auto &l : lats) {
          res.push_back(RegenerateLattice(l, boosted, sc));
          hyps += HypLine(l.UtteranceId(), BestPath(res.back(), sc));
        }
        WriteStringToFile(out, WriteLattices(res));
        if (!hyp_out.empty()) WriteStringToFile(hyp_out, hyps);
        size_t n = 0;
        for (const auto &[w, list] : boosted.Entries())
          for (const auto &e : list) n += e.bonus != 0.0;
        KeyValue("boosted_entries", std::to_string(n));
        KeyValue("lattices", std::to_string(res.size()));
      };
    });
  }

  // eval ---------------------------------------------------------------------
  auto *ev = app.add_subcommand("eval", "WER and NE-WER");
  ev->require_subcommand(1);
  std::string ref_in, hyp_in;
  {
    auto *c = ev->add_subcommand("wer", "Word error rate");
    c->add_option("--ref", ref_in, "Reference transcripts")->required();
    c->add_option("--hyp", hyp_in, "Hypothesis transcripts")->required();
    c->callback([&] {
      run = [&] {
        auto pairs = PairTranscripts(ReadTranscripts(ReadFileToString(ref_in)),
                                     ReadTranscripts(ReadFileToString(hyp_in)));
        WerStats w = ComputeWerStats(pairs);
        KeyValue("WER", FormatFixed(w.Wer(), 2));
        KeyValue("S", std::to_string(w.substitutions));
        KeyValue("D", std::to_string(w.deletions));
        KeyValue("I", std::to_string(w.insertions));
        KeyValue("N", std::to_string(w.ref_words));
      };
    });
  }
  {
    auto *c = ev->add_subcommand("ne-wer", "WER plus per-occurrence NE error rates");
    c->add_option("--ref", ref_in, "Reference transcripts")->required();
    c->add_option("--hyp", hyp_in, "Hypothesis transcripts")->required();
    c->add_option("--ne-list", ne_in, "Named entities")->required();
    c->add_option("--train", corpus_in, "Training text (for rare/unseen split)")->required();
    c->add_option("--threshold", threshold, "Rare frequency threshold")->capture_default_str();
    c->callback([&] {
      run = [&] {
        auto pairs = PairTranscripts(ReadTranscripts(ReadFileToString(ref_in)),
                                     ReadTranscripts(ReadFileToString(hyp_in)));
        NEInventory inv = ClassifyNes(ReadWordList(ne_in), ReadCorpus(ReadFileToString(corpus_in)),
                                      threshold);
        std::cout << ScoreReport(ComputeWerStats(pairs), NeWer(pairs, inv));
      };
    });
  }

  // synth --------------------------------------------------------------------
  auto *sy = app.add_subcommand("synth", "Synthetic corpora and lattices");
  sy->require_subcommand(1);
  std::string preset, synth_conf;
  {
    auto *c = sy->add_subcommand("generate", "Write a fixture directory");
    c->add_option("--preset", preset, "Named preset")->check(CLI::IsMember({"paper-ablation"}));
    c->add_option("--config", synth_conf, "Generator config (key=value)");
    c->add_option("--out", out, "Output directory")->required();
    c->callback([&] {
      run = [&] {
        if (!preset.empty() && !synth_conf.empty())
          throw Error("give either --preset or --config, not both");
        SynthConfig sc = synth_conf.empty() ? AblationPreset()
                                            : ParseSynthConfig(ReadFileToString(synth_conf));
        SynthFixture f = GenerateFixture(sc);
        std::filesystem::create_directories(out);
        auto files = FixtureFiles(f);
        files["pipeline.conf"] = WritePipelineConfig(PipelineConfig{});
        for (const auto &[name, text] : files)
          WriteStringToFile((std::filesystem::path(out) / name).string(), text);
        KeyValue("train_sentences", std::to_string(f.corpus.train.size()));
        KeyValue("test_utterances", std::to_string(f.corpus.test.size()));
        KeyValue("rare_nes", std::to_string(f.corpus.rare.size()));
        KeyValue("oov_nes", std::to_string(f.corpus.oov.size()));
        KeyValue("attempts", std::to_string(f.attempts));
        KeyValue("first_pass_oov_ne_wer", FormatFixed(f.first_pass_oov_ne_wer, 2));
      };
    });
  }

  // report -------------------------------------------------------------------
  auto *rp = app.add_subcommand("report", "Experiment reports");
  rp->require_subcommand(1);
  std::string pipe_conf;
  {
    auto *c = rp->add_subcommand("ablation", "Run the ablation ladder from a config file");
    c->add_option("--config", pipe_conf, "Pipeline config (key=value)")->required();
    c->add_option("--jobs,-j", jobs, "Worker threads")->capture_default_str();
    c->add_option("--out", out, "Report output (default stdout)");
    c->callback([&] {
      run = [&] {
        PipelineConfig pc = ParsePipelineConfig(ReadFileToString(pipe_conf));
        PipelineInputs in =
            LoadPipelineInputs(pc, std::filesystem::path(pipe_conf).parent_path());
        Emit(out, FormatAblationReport(RunAblation(in, pc, jobs)));
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    if (jobs < 1) throw Error("--jobs must be at least 1");
    if (run) run();
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
