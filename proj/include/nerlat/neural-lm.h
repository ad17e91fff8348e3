// nerlat/neural-lm.h

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

// Word-level recurrent LM with a tied input/output embedding matrix E and
// optional hashed letter n-gram features F that are added to the word
// embedding:
//
//   u_t    = E[x_t] + F^T c(x_t)           c = letter n-gram counts
//   h_t    = tanh(Wx u_t + Wh h_{t-1} + bh)
//   p(.|.) = softmax(E h_t + bo)
//
// There is no separate output matrix: changing a row of E changes both the
// input representation of that word and its output logit.

#ifndef NERLAT_NEURAL_LM_H_
#define NERLAT_NEURAL_LM_H_

#include <Eigen/Dense>

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "nerlat/base.h"
#include "nerlat/ngram.h"

namespace nerlat {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Character n-grams of "^word$" with length in [n_min, n_max], in order of
/// start position then length.
inline std::vector<std::string> LetterNgrams(const std::string &word, int n_min, int n_max) {
  if (word.empty()) throw Error("letter n-grams of an empty word");
  if (n_min < 1 || n_max < n_min) throw Error("letter n-gram range must satisfy 1 <= min <= max");
  std::string padded = "^" + word + "$";
  std::vector<std::string> out;
  for (size_t i = 0; i < padded.size(); ++i)
    for (int n = n_min; n <= n_max && i + n <= padded.size(); ++n)
      out.push_back(padded.substr(i, n));
  return out;
}

/// Sparse slot -> count map of hashed letter n-grams (collisions allowed).
struct LetterFeatures {
  std::map<int32_t, int32_t> counts;
};

inline LetterFeatures LetterNgramFeatures(const std::string &word, int n_min, int n_max,
                                          int slots) {
  if (slots < 1) throw Error("letter feature slot count must be positive");
  LetterFeatures f;
  for (const auto &g : LetterNgrams(word, n_min, n_max))
    ++f.counts[static_cast<int32_t>(Fnv1a64(g) % static_cast<uint64_t>(slots))];
  return f;
}

struct NeuralLMConfig {
  int dim = 32;
  bool letter_features = false;
  int ngram_min = 2;
  int ngram_max = 5;
  int slots = 10000;
  // Training.
  int epochs = 8;
  double learning_rate = 0.05;
  double init_scale = 0.1;
  double clip_norm = 5.0;
  uint64_t seed = 1;
};

class NeuralLM {
 public:
  NeuralLM() = default;

  /// All parameters zero. <s>, </s> and <unk> are added to the vocabulary.
  NeuralLM(const std::vector<std::string> &vocab, const NeuralLMConfig &config)
      : config_(config) {
    if (config.dim < 1) throw Error("neural LM dimension must be positive");
    std::set<std::string> seen;
    for (const auto *w : {&kBos, &kEos, &kUnk}) {
      vocab_.push_back(*w);
      seen.insert(*w);
    }
    for (const auto &w : vocab)
      if (seen.insert(w).second) vocab_.push_back(w);
    for (size_t i = 0; i < vocab_.size(); ++i) ids_[vocab_[i]] = static_cast<int32_t>(i);
    int d = config.dim;
    size_t v = vocab_.size();
    E_ = RowMatrix::Zero(v, d);
    F_ = RowMatrix::Zero(config.letter_features ? config.slots : 0, d);
    Wx_ = RowMatrix::Zero(d, d);
    Wh_ = RowMatrix::Zero(d, d);
    bh_ = Vector::Zero(d);
    bo_ = Vector::Zero(v);
    BuildFeatures();
  }

  /// Uniform(-init_scale, init_scale) on E, Wx and Wh; F and biases zero.
  void RandomInit(uint64_t seed) {
    Rng rng(seed);
    double s = config_.init_scale;
    for (auto *m : {&E_, &Wx_, &Wh_})
      for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = rng.Uniform(-s, s);
  }

  const NeuralLMConfig &Config() const { return config_; }
  const std::vector<std::string> &Vocab() const { return vocab_; }
  size_t VocabSize() const { return vocab_.size(); }
  int Dim() const { return config_.dim; }
  bool HasLetterFeatures() const { return config_.letter_features; }
  bool InVocab(const std::string &w) const { return ids_.count(w) != 0; }
  int32_t WordId(const std::string &w) const {
    auto it = ids_.find(w);
    return it == ids_.end() ? 2 : it->second;  // <unk>
  }
  int32_t BosId() const { return 0; }
  int32_t EosId() const { return 1; }
  int32_t UnkId() const { return 2; }

  const RowMatrix &E() const { return E_; }
  const RowMatrix &F() const { return F_; }
  const RowMatrix &Wx() const { return Wx_; }
  const RowMatrix &Wh() const { return Wh_; }
  const Vector &Bh() const { return bh_; }
  const Vector &Bo() const { return bo_; }
  RowMatrix &MutableE() { return E_; }
  RowMatrix &MutableF() { return F_; }
  RowMatrix &MutableWx() { return Wx_; }
  RowMatrix &MutableWh() { return Wh_; }
  Vector &MutableBh() { return bh_; }
  Vector &MutableBo() { return bo_; }

  /// Letter features of a vocabulary word (empty for <s>, </s>, <unk>).
  const std::vector<std::pair<int32_t, int32_t>> &FeaturesOf(int32_t id) const {
    return features_[id];
  }

  Vector InputVector(int32_t id) const {
    Vector u = E_.row(id).transpose();
    if (config_.letter_features)
      for (auto [slot, count] : features_[id]) u += count * F_.row(slot).transpose();
    return u;
  }
  Vector InputVector(const std::string &w) const { return InputVector(WordId(w)); }

  Vector InitialState() const { return Vector::Zero(config_.dim); }

  struct StepResult {
    Vector hidden;
    Vector probs;  // sums to 1
  };

  /// Consumes `word` and predicts the next one.
  StepResult Step(const Vector &hidden, int32_t word) const {
    StepResult r;
    r.hidden = (Wx_ * InputVector(word) + Wh_ * hidden + bh_).array().tanh().matrix();
    Vector logits = E_ * r.hidden + bo_;
    double mx = logits.maxCoeff();
    r.probs = (logits.array() - mx).exp().matrix();
    r.probs /= r.probs.sum();
    return r;
  }
  StepResult Step(const Vector &hidden, const std::string &word) const {
    return Step(hidden, WordId(word));
  }

  /// Natural-log probability of the words followed by </s>.
  double SentenceLogProb(const Sentence &words) const {
    StepResult s = Step(InitialState(), BosId());
    double total = 0.0;
    for (const auto &w : words) {
      int32_t id = WordId(w);
      total += std::log(s.probs[id]);
      s = Step(s.hidden, id);
    }
    return total + std::log(s.probs[EosId()]);
  }

  /// Copy with `words` appended: zero embedding rows, output bias equal to
  /// the smallest existing bias.
  NeuralLM AppendWords(const std::vector<std::string> &words) const {
    NeuralLM out = *this;
    std::vector<std::string> fresh;
    for (const auto &w : words)
      if (!out.ids_.count(w) && std::find(fresh.begin(), fresh.end(), w) == fresh.end())
        fresh.push_back(w);
    if (fresh.empty()) return out;
    size_t old = vocab_.size();
    double min_bias = bo_.size() ? bo_.minCoeff() : 0.0;
    out.E_.conservativeResize(old + fresh.size(), Eigen::NoChange);
    out.bo_.conservativeResize(old + fresh.size());
    for (size_t i = 0; i < fresh.size(); ++i) {
      out.vocab_.push_back(fresh[i]);
      out.ids_[fresh[i]] = static_cast<int32_t>(old + i);
      out.E_.row(old + i).setZero();
      out.bo_[old + i] = min_bias;
    }
    out.BuildFeatures();
    return out;
  }

  bool AllFinite() const {
    return E_.allFinite() && F_.allFinite() && Wx_.allFinite() && Wh_.allFinite() &&
           bh_.allFinite() && bo_.allFinite();
  }

 private:
  friend NeuralLM ReadNeuralLM(const std::string &text);

  void BuildFeatures() {
    features_.assign(vocab_.size(), {});
    if (!config_.letter_features) return;
    for (size_t i = 3; i < vocab_.size(); ++i) {
      auto f = LetterNgramFeatures(vocab_[i], config_.ngram_min, config_.ngram_max,
                                   config_.slots);
      for (auto [slot, count] : f.counts) features_[i].emplace_back(slot, count);
    }
  }

  NeuralLMConfig config_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int32_t> ids_;
  RowMatrix E_, F_, Wx_, Wh_;
  Vector bh_, bo_;
  std::vector<std::vector<std::pair<int32_t, int32_t>>> features_;
};

// ---------------------------------------------------------------------------
// Gradients.

struct NeuralLMGradients {
  RowMatrix E, Wx, Wh;
  Vector bh, bo;
  std::map<int32_t, Vector> F;  // sparse rows of dF

  explicit NeuralLMGradients(const NeuralLM &lm)
      : E(RowMatrix::Zero(lm.E().rows(), lm.Dim())),
        Wx(RowMatrix::Zero(lm.Dim(), lm.Dim())),
        Wh(RowMatrix::Zero(lm.Dim(), lm.Dim())),
        bh(Vector::Zero(lm.Dim())),
        bo(Vector::Zero(lm.VocabSize())) {}

  double SquaredNorm() const {
    double s = E.squaredNorm() + Wx.squaredNorm() + Wh.squaredNorm() + bh.squaredNorm() +
               bo.squaredNorm();
    for (const auto &[slot, g] : F) s += g.squaredNorm();
    return s;
  }
};

/// Cross-entropy (natural log, summed over the words and </s>) and, when
/// `grad` is non-null, its gradient by backpropagation through time.
inline double SentenceLoss(const NeuralLM &lm, const Sentence &sentence,
                           NeuralLMGradients *grad) {
  std::vector<int32_t> inputs{lm.BosId()}, targets;
  for (const auto &w : sentence) {
    int32_t id = lm.WordId(w);
    targets.push_back(id);
    inputs.push_back(id);
  }
  targets.push_back(lm.EosId());
  inputs.pop_back();
  size_t T = inputs.size();
  std::vector<Vector> hs(T + 1), us(T), ps(T);
  hs[0] = lm.InitialState();
  double loss = 0.0;
  for (size_t t = 0; t < T; ++t) {
    us[t] = lm.InputVector(inputs[t]);
    NeuralLM::StepResult r = lm.Step(hs[t], inputs[t]);
    hs[t + 1] = std::move(r.hidden);
    ps[t] = std::move(r.probs);
    loss -= std::log(ps[t][targets[t]]);
  }
  if (!grad) return loss;
  Vector dh_next = Vector::Zero(lm.Dim());
  for (size_t t = T; t-- > 0;) {
    Vector dz = ps[t];
    dz[targets[t]] -= 1.0;
    const Vector &h = hs[t + 1];
    grad->E.noalias() += dz * h.transpose();
    grad->bo += dz;
    Vector dh = lm.E().transpose() * dz + dh_next;
    Vector da = (dh.array() * (1.0 - h.array().square())).matrix();
    grad->Wx.noalias() += da * us[t].transpose();
    grad->Wh.noalias() += da * hs[t].transpose();
    grad->bh += da;
    Vector du = lm.Wx().transpose() * da;
    grad->E.row(inputs[t]) += du.transpose();
    if (lm.HasLetterFeatures())
      for (auto [slot, count] : lm.FeaturesOf(inputs[t])) {
        auto it = grad->F.find(slot);
        if (it == grad->F.end()) it = grad->F.emplace(slot, Vector::Zero(lm.Dim())).first;
        it->second += count * du;
      }
    dh_next = lm.Wh().transpose() * da;
  }
  return loss;
}

inline double CorpusPerplexity(const NeuralLM &lm, const std::vector<Sentence> &corpus) {
  double loss = 0.0;
  size_t n = 0;
  for (const auto &s : corpus) {
    loss += SentenceLoss(lm, s, nullptr);
    n += s.size() + 1;
  }
  return std::exp(loss / static_cast<double>(n));
}

struct NeuralTrainReport {
  std::vector<double> perplexity;  // after each epoch
};

/// SGD over whole sentences with gradient norm clipping. Sentence order is
/// reshuffled every epoch from the seed; results are bitwise reproducible.
inline NeuralLM TrainNeuralLM(const std::vector<Sentence> &corpus,
                              const std::vector<std::string> &vocab,
                              const NeuralLMConfig &config,
                              NeuralTrainReport *report = nullptr) {
  if (corpus.empty()) throw Error("empty training corpus");
  NeuralLM lm(vocab, config);
  lm.RandomInit(config.seed);
  Rng order_rng(config.seed ^ 0x5bd1e995ull);
  std::vector<size_t> order(corpus.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.Shuffle(order);
    for (size_t k = 0; k < order.size(); ++k) {
      NeuralLMGradients g(lm);
      double loss = SentenceLoss(lm, corpus[order[k]], &g);
      if (!std::isfinite(loss))
        throw Error("non-finite loss at epoch " + std::to_string(epoch + 1) + ", sentence " +
                    std::to_string(order[k]) + " ('" + JoinTokens(corpus[order[k]]) +
                    "'), learning rate " + FormatSig(config.learning_rate));
      double norm = std::sqrt(g.SquaredNorm());
      double step = config.learning_rate;
      if (config.clip_norm > 0.0 && norm > config.clip_norm) step *= config.clip_norm / norm;
      lm.MutableE() -= step * g.E;
      lm.MutableWx() -= step * g.Wx;
      lm.MutableWh() -= step * g.Wh;
      lm.MutableBh() -= step * g.bh;
      lm.MutableBo() -= step * g.bo;
      for (const auto &[slot, gf] : g.F) lm.MutableF().row(slot) -= step * gf.transpose();
    }
    double ppl = CorpusPerplexity(lm, corpus);
    if (!std::isfinite(ppl) || !lm.AllFinite())
      throw Error("training diverged at epoch " + std::to_string(epoch + 1));
    if (report) report->perplexity.push_back(ppl);
  }
  return lm;
}

// ---------------------------------------------------------------------------
// Gradient check.

struct GradientCheckReport {
  std::map<std::string, double> max_rel_error;  // per parameter block
  double overall = 0.0;
  size_t checked = 0;
};

namespace internal {

struct ParamBlock {
  std::string name;
  double *data;
  Eigen::Index size;
};

inline std::vector<ParamBlock> ParamBlocks(NeuralLM &lm) {
  std::vector<ParamBlock> b{{"E", lm.MutableE().data(), lm.MutableE().size()},
                            {"Wx", lm.MutableWx().data(), lm.MutableWx().size()},
                            {"Wh", lm.MutableWh().data(), lm.MutableWh().size()},
                            {"bh", lm.MutableBh().data(), lm.MutableBh().size()},
                            {"bo", lm.MutableBo().data(), lm.MutableBo().size()}};
  if (lm.HasLetterFeatures()) b.push_back({"F", lm.MutableF().data(), lm.MutableF().size()});
  return b;
}

}  // namespace internal

/// Central finite differences against the analytic gradient for every
/// parameter. Relative error is |a - n| / max(|a|, |n|, floor).
inline GradientCheckReport GradientCheck(const NeuralLM &model, const Sentence &sentence,
                                         double epsilon = 1e-5, double floor = 1e-5) {
  NeuralLM lm = model;
  NeuralLMGradients g(lm);
  SentenceLoss(lm, sentence, &g);
  RowMatrix dF = RowMatrix::Zero(lm.F().rows(), lm.Dim());
  for (const auto &[slot, row] : g.F) dF.row(slot) = row.transpose();
  std::map<std::string, const double *> analytic{{"E", g.E.data()},   {"Wx", g.Wx.data()},
                                                 {"Wh", g.Wh.data()}, {"bh", g.bh.data()},
                                                 {"bo", g.bo.data()}, {"F", dF.data()}};
  GradientCheckReport rep;
  for (auto &block : internal::ParamBlocks(lm)) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < block.size; ++i) {
      double saved = block.data[i];
      block.data[i] = saved + epsilon;
      double up = SentenceLoss(lm, sentence, nullptr);
      block.data[i] = saved - epsilon;
      double down = SentenceLoss(lm, sentence, nullptr);
      block.data[i] = saved;
      double numeric = (up - down) / (2.0 * epsilon);
      double a = analytic.at(block.name)[i];
      double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      worst = std::max(worst, rel);
      ++rep.checked;
    }
    rep.max_rel_error[block.name] = worst;
    rep.overall = std::max(rep.overall, worst);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Model file: versioned text, matrices row-major at 9 significant digits.

namespace internal {

inline void WriteMatrix(std::string &out, const std::string &name, const double *data,
                        Eigen::Index rows, Eigen::Index cols) {
  out += name + " " + std::to_string(rows) + " " + std::to_string(cols) + "\n";
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (c) out += ' ';
      out += FormatSig(data[r * cols + c]);
    }
    out += "\n";
  }
}

}  // namespace internal

inline std::string WriteNeuralLM(const NeuralLM &lm) {
  const auto &c = lm.Config();
  std::string out = "nerlat-nlm 1\n";
  out += "dim " + std::to_string(c.dim) + "\n";
  out += "vocab_size " + std::to_string(lm.VocabSize()) + "\n";
  out += "letter_features " + std::to_string(c.letter_features ? 1 : 0) + " " +
         std::to_string(c.ngram_min) + " " + std::to_string(c.ngram_max) + " " +
         std::to_string(c.slots) + "\n";
  out += "seed " + std::to_string(c.seed) + "\n";
  out += "vocab\n";
  for (const auto &w : lm.Vocab()) out += w + "\n";
  internal::WriteMatrix(out, "E", lm.E().data(), lm.E().rows(), lm.E().cols());
  if (lm.HasLetterFeatures())
    internal::WriteMatrix(out, "F", lm.F().data(), lm.F().rows(), lm.F().cols());
  internal::WriteMatrix(out, "Wx", lm.Wx().data(), lm.Wx().rows(), lm.Wx().cols());
  internal::WriteMatrix(out, "Wh", lm.Wh().data(), lm.Wh().rows(), lm.Wh().cols());
  internal::WriteMatrix(out, "bh", lm.Bh().data(), 1, lm.Bh().size());
  internal::WriteMatrix(out, "bo", lm.Bo().data(), 1, lm.Bo().size());
  return out;
}

inline NeuralLM ReadNeuralLM(const std::string &text) {
  auto lines = SplitLines(text);
  size_t i = 0;
  auto next = [&]() -> std::vector<std::string_view> {
    if (i >= lines.size()) throw ParseError(i + 1, "unexpected end of model file");
    return SplitWhitespace(lines[i++]);
  };
  auto expect_int = [&](std::string_view key) {
    auto t = next();
    if (t.size() != 2 || t[0] != key) throw ParseError(i, "expected '" + std::string(key) + "'");
    auto v = ParseInt(t[1]);
    if (!v) throw ParseError(i, "bad integer");
    return *v;
  };
  auto head = next();
  if (head.size() != 2 || head[0] != "nerlat-nlm") throw ParseError(1, "not a nerlat model file");
  if (head[1] != "1") throw ParseError(1, "unsupported model version " + std::string(head[1]));
  NeuralLMConfig c;
  c.dim = static_cast<int>(expect_int("dim"));
  auto vsize = expect_int("vocab_size");
  auto lf = next();
  if (lf.size() != 5 || lf[0] != "letter_features") throw ParseError(i, "expected letter_features");
  c.letter_features = lf[1] == "1";
  c.ngram_min = static_cast<int>(ParseInt(lf[2]).value_or(2));
  c.ngram_max = static_cast<int>(ParseInt(lf[3]).value_or(5));
  c.slots = static_cast<int>(ParseInt(lf[4]).value_or(1));
  c.seed = static_cast<uint64_t>(expect_int("seed"));
  if (next() != std::vector<std::string_view>{"vocab"}) throw ParseError(i, "expected 'vocab'");
  std::vector<std::string> vocab;
  for (int64_t k = 0; k < vsize; ++k) {
    auto t = next();
    if (t.size() != 1) throw ParseError(i, "bad vocabulary line");
    vocab.emplace_back(t[0]);
  }
  if (vocab.size() < 3 || vocab[0] != kBos || vocab[1] != kEos || vocab[2] != kUnk)
    throw ParseError(i, "vocabulary must start with <s> </s> <unk>");
  NeuralLM lm(vocab, c);
  if (lm.VocabSize() != vocab.size()) throw ParseError(i, "duplicate vocabulary entries");
  auto read_matrix = [&](const std::string &name, double *data, Eigen::Index rows,
                         Eigen::Index cols) {
    auto t = next();
    if (t.size() != 3 || t[0] != name || ParseInt(t[1]) != rows || ParseInt(t[2]) != cols)
      throw ParseError(i, "expected matrix " + name + " " + std::to_string(rows) + "x" +
                              std::to_string(cols));
    for (Eigen::Index r = 0; r < rows; ++r) {
      auto vals = next();
      if (static_cast<Eigen::Index>(vals.size()) != cols) throw ParseError(i, "bad row length");
      for (Eigen::Index col = 0; col < cols; ++col) {
        auto v = ParseDouble(vals[col]);
        if (!v) throw ParseError(i, "bad value");
        data[r * cols + col] = *v;
      }
    }
  };
  read_matrix("E", lm.E_.data(), lm.E_.rows(), lm.E_.cols());
  if (c.letter_features) read_matrix("F", lm.F_.data(), lm.F_.rows(), lm.F_.cols());
  read_matrix("Wx", lm.Wx_.data(), c.dim, c.dim);
  read_matrix("Wh", lm.Wh_.data(), c.dim, c.dim);
  read_matrix("bh", lm.bh_.data(), 1, c.dim);
  read_matrix("bo", lm.bo_.data(), 1, lm.bo_.size());
  return lm;
}

}  // namespace nerlat

#endif  // NERLAT_NEURAL_LM_H_
