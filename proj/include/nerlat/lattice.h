// nerlat/lattice.h

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

// Word lattices: an acyclic graph whose arcs carry a word, an acoustic
// log-score and an LM log-score. All scores are natural logs. Path weights
// are combined as acoustic_scale * acoustic + lm_scale * lm, and all dynamic
// programming runs in the log semiring (forward-backward) or the tropical
// semiring (best path, n-best).
//
// Ties between equally scored paths are broken by the lexicographic order of
// the word sequence (epsilons removed) and then by the arc-index sequence, so
// every search in this file is deterministic.

#ifndef NERLAT_LATTICE_H_
#define NERLAT_LATTICE_H_

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nerlat/base.h"

namespace nerlat {

inline const std::string kEpsilon = "<eps>";

/// Frames are 10 ms; node times are stored as frame indices.
inline constexpr int32_t kFrameShiftMs = 10;

struct ScaleConfig {
  double acoustic_scale = 0.1;
  double lm_scale = 1.0;

  void Check() const {
    if (!(acoustic_scale > 0.0) || !std::isfinite(acoustic_scale) ||
        !(lm_scale > 0.0) || !std::isfinite(lm_scale))
      throw Error("scales must be finite and positive (acoustic_scale=" +
                  FormatSig(acoustic_scale) + ", lm_scale=" +
                  FormatSig(lm_scale) + ")");
  }
};

struct Node {
  int32_t id = 0;
  int32_t time = 0;
};

struct Arc {
  int32_t source = 0;
  int32_t target = 0;
  std::string word;
  double acoustic_score = 0.0;
  double lm_score = 0.0;

  bool IsEpsilon() const { return word == kEpsilon; }
  bool operator==(const Arc &) const = default;
};

inline double CombinedArcWeight(const Arc &arc, const ScaleConfig &scales) {
  scales.Check();
  return scales.acoustic_scale * arc.acoustic_score +
         scales.lm_scale * arc.lm_score;
}

class Lattice {
 public:
  Lattice() = default;

  /// Validates ids, scores, acyclicity and time monotonicity; throws Error.
  Lattice(std::string utterance_id, std::vector<Node> nodes,
          std::vector<Arc> arcs, int32_t start_node,
          std::vector<int32_t> final_nodes)
      : utt_(std::move(utterance_id)),
        nodes_(std::move(nodes)),
        arcs_(std::move(arcs)),
        start_(start_node),
        finals_(std::move(final_nodes)) {
    Init();
  }

  const std::string &UtteranceId() const { return utt_; }
  /// Sorted by id.
  const std::vector<Node> &Nodes() const { return nodes_; }
  const std::vector<Arc> &Arcs() const { return arcs_; }
  int32_t StartNode() const { return start_; }
  /// Sorted, unique.
  const std::vector<int32_t> &FinalNodes() const { return finals_; }
  bool Empty() const { return nodes_.empty(); }
  size_t NumNodes() const { return nodes_.size(); }
  size_t NumArcs() const { return arcs_.size(); }

  // Dense node indices (position in Nodes()) used by the algorithms.
  size_t IndexOf(int32_t id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error("unknown node id " + std::to_string(id));
    return it->second;
  }
  bool HasNode(int32_t id) const { return index_.count(id) != 0; }
  size_t StartIndex() const { return start_index_; }
  bool IsFinalIndex(size_t i) const { return is_final_[i]; }
  size_t SourceIndex(size_t arc) const { return arc_src_[arc]; }
  size_t TargetIndex(size_t arc) const { return arc_dst_[arc]; }
  const std::vector<size_t> &TopologicalOrder() const { return topo_; }
  const std::vector<int32_t> &OutArcs(size_t node_index) const {
    return out_[node_index];
  }
  const std::vector<int32_t> &InArcs(size_t node_index) const {
    return in_[node_index];
  }
  int32_t TimeOfIndex(size_t i) const { return nodes_[i].time; }

  /// Copy with the given arc scores replaced; topology untouched.
  Lattice WithArcScores(const std::vector<double> &acoustic,
                        const std::vector<double> &lm) const {
    std::vector<Arc> arcs = arcs_;
    for (size_t i = 0; i < arcs.size(); ++i) {
      arcs[i].acoustic_score = acoustic[i];
      arcs[i].lm_score = lm[i];
    }
    return Lattice(utt_, nodes_, std::move(arcs), start_, finals_);
  }

 private:
  void Init() {
    if (nodes_.empty()) {
      if (!arcs_.empty() || !finals_.empty())
        throw Error("lattice without nodes cannot have arcs or finals");
      return;
    }
    std::sort(nodes_.begin(), nodes_.end(),
              [](const Node &a, const Node &b) { return a.id < b.id; });
    for (size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].id < 0) throw Error("negative node id");
      if (nodes_[i].time < 0)
        throw Error("negative time on node " + std::to_string(nodes_[i].id));
      if (!index_.emplace(nodes_[i].id, i).second)
        throw Error("duplicate node id " + std::to_string(nodes_[i].id));
    }
    auto find = [&](int32_t id, const char *what) {
      auto it = index_.find(id);
      if (it == index_.end())
        throw Error(std::string("dangling node id ") + std::to_string(id) +
                    " (" + what + ")");
      return it->second;
    };
    start_index_ = find(start_, "start node");
    std::sort(finals_.begin(), finals_.end());
    finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
    is_final_.assign(nodes_.size(), false);
    for (int32_t f : finals_) is_final_[find(f, "final node")] = true;

    out_.assign(nodes_.size(), {});
    in_.assign(nodes_.size(), {});
    arc_src_.resize(arcs_.size());
    arc_dst_.resize(arcs_.size());
    for (size_t a = 0; a < arcs_.size(); ++a) {
      const Arc &arc = arcs_[a];
      if (arc.word.empty()) throw Error("arc " + std::to_string(a) + " has empty word");
      if (!std::isfinite(arc.acoustic_score) || !std::isfinite(arc.lm_score))
        throw Error("non-finite score on arc " + std::to_string(a));
      arc_src_[a] = find(arc.source, "arc source");
      arc_dst_[a] = find(arc.target, "arc target");
      out_[arc_src_[a]].push_back(static_cast<int32_t>(a));
      in_[arc_dst_[a]].push_back(static_cast<int32_t>(a));
    }
    // Kahn's algorithm; ready nodes are taken in index order.
    std::vector<size_t> indeg(nodes_.size(), 0);
    for (size_t a = 0; a < arcs_.size(); ++a) ++indeg[arc_dst_[a]];
    std::priority_queue<size_t, std::vector<size_t>, std::greater<>> ready;
    for (size_t i = 0; i < nodes_.size(); ++i)
      if (indeg[i] == 0) ready.push(i);
    topo_.reserve(nodes_.size());
    while (!ready.empty()) {
      size_t u = ready.top();
      ready.pop();
      topo_.push_back(u);
      for (int32_t a : out_[u])
        if (--indeg[arc_dst_[a]] == 0) ready.push(arc_dst_[a]);
    }
    if (topo_.size() != nodes_.size()) throw Error("cycle detected");
    for (size_t a = 0; a < arcs_.size(); ++a)
      if (nodes_[arc_dst_[a]].time < nodes_[arc_src_[a]].time)
        throw Error("arc " + std::to_string(a) + " goes backwards in time");
  }

  std::string utt_;
  std::vector<Node> nodes_;
  std::vector<Arc> arcs_;
  int32_t start_ = 0;
  std::vector<int32_t> finals_;

  std::unordered_map<int32_t, size_t> index_;
  size_t start_index_ = 0;
  std::vector<bool> is_final_;
  std::vector<size_t> arc_src_, arc_dst_;
  std::vector<std::vector<int32_t>> out_, in_;
  std::vector<size_t> topo_;
};

// ---------------------------------------------------------------------------
// Text format.
//
//   UTT <utterance_id>
//   NODE <id> <frame>               optional; missing times are inferred
//   START <id>                      optional; defaults to first arc's source
//   <src> <dst> <word> <acoustic> <lm>
//   <final_node_id>
//   <blank line>

namespace internal {

struct LatticeBlock {
  size_t header_line = 0;
  std::string utt;
  std::vector<std::pair<int32_t, int32_t>> node_times;
  std::optional<int32_t> start;
  std::vector<Arc> arcs;
  std::vector<int32_t> finals;
};

inline int32_t ParseNodeId(std::string_view tok, size_t line) {
  auto v = ParseInt(tok);
  if (!v || *v < 0 || *v > std::numeric_limits<int32_t>::max())
    throw ParseError(line, "bad node id '" + std::string(tok) + "'");
  return static_cast<int32_t>(*v);
}

inline Lattice BuildFromBlock(const LatticeBlock &b) {
  std::map<int32_t, std::optional<int32_t>> times;
  for (const Arc &a : b.arcs) {
    times.emplace(a.source, std::nullopt);
    times.emplace(a.target, std::nullopt);
  }
  for (auto [id, t] : b.node_times) times[id] = t;
  if (times.empty()) {
    if (b.finals.empty()) throw ParseError(b.header_line, "empty lattice");
    for (int32_t f : b.finals) times.emplace(f, std::nullopt);
  }
  for (int32_t f : b.finals)
    if (!times.count(f))
      throw ParseError(b.header_line,
                       "dangling node id " + std::to_string(f) + " (final node)");
  int32_t start = b.start ? *b.start
                  : !b.arcs.empty() ? b.arcs.front().source
                                    : b.finals.front();
  if (!times.count(start))
    throw ParseError(b.header_line,
                     "dangling node id " + std::to_string(start) + " (start node)");

  // Build once with zero times to get a topological order (and cycle check),
  // then infer missing times as longest-path depth.
  std::vector<Node> nodes;
  for (auto &[id, t] : times) nodes.push_back({id, 0});
  std::vector<Arc> arcs = b.arcs;
  try {
    Lattice topo_only(b.utt, nodes, arcs, start, b.finals);
    std::vector<int32_t> inferred(nodes.size(), 0);
    std::vector<std::optional<int32_t>> given;
    for (auto &[id, t] : times) given.push_back(t);
    for (size_t u : topo_only.TopologicalOrder()) {
      int32_t t = 0;
      for (int32_t a : topo_only.InArcs(u))
        t = std::max(t, inferred[topo_only.SourceIndex(a)] + 1);
      inferred[u] = given[u] ? *given[u] : t;
    }
    for (size_t i = 0; i < nodes.size(); ++i) nodes[i].time = inferred[i];
    return Lattice(b.utt, std::move(nodes), std::move(arcs), start, b.finals);
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    throw ParseError(b.header_line, e.what());
  }
}

}  // namespace internal

/// Parses every lattice block in `text`.
inline std::vector<Lattice> ReadLattices(std::string_view text) {
  std::vector<Lattice> out;
  std::optional<internal::LatticeBlock> block;
  size_t line_no = 0;
  size_t pos = 0;
  auto flush = [&] {
    if (block) out.push_back(internal::BuildFromBlock(*block));
    block.reset();
  };
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    auto toks = SplitWhitespace(line);
    if (toks.empty()) {
      flush();
      continue;
    }
    if (!block) {
      block.emplace();
      block->header_line = line_no;
      if (toks[0] == "UTT") {
        if (toks.size() > 2) throw ParseError(line_no, "malformed UTT header");
        if (toks.size() == 2) block->utt = std::string(toks[1]);
        continue;
      }
    } else if (toks[0] == "UTT") {
      throw ParseError(line_no, "UTT header inside a block (missing blank line?)");
    }
    if (toks[0] == "NODE") {
      if (toks.size() != 3) throw ParseError(line_no, "NODE line needs id and frame");
      int32_t id = internal::ParseNodeId(toks[1], line_no);
      auto t = ParseInt(toks[2]);
      if (!t || *t < 0 || *t > std::numeric_limits<int32_t>::max())
        throw ParseError(line_no, "bad frame '" + std::string(toks[2]) + "'");
      block->node_times.emplace_back(id, static_cast<int32_t>(*t));
    } else if (toks[0] == "START") {
      if (toks.size() != 2) throw ParseError(line_no, "START line needs a node id");
      block->start = internal::ParseNodeId(toks[1], line_no);
    } else if (toks.size() == 5) {
      Arc arc;
      arc.source = internal::ParseNodeId(toks[0], line_no);
      arc.target = internal::ParseNodeId(toks[1], line_no);
      arc.word = std::string(toks[2]);
      auto ac = ParseDouble(toks[3]);
      auto lm = ParseDouble(toks[4]);
      if (!ac || !lm) throw ParseError(line_no, "non-finite or malformed score");
      arc.acoustic_score = *ac;
      arc.lm_score = *lm;
      block->arcs.push_back(std::move(arc));
    } else if (toks.size() == 1) {
      block->finals.push_back(internal::ParseNodeId(toks[0], line_no));
    } else {
      throw ParseError(line_no, "expected 'src dst word acoustic lm' or a final node id");
    }
    if (pos > text.size()) break;
  }
  flush();
  return out;
}

/// Parses exactly one lattice.
inline Lattice ParseLattice(std::string_view text) {
  auto lats = ReadLattices(text);
  if (lats.size() != 1)
    throw Error("expected exactly one lattice, found " + std::to_string(lats.size()));
  return std::move(lats.front());
}

/// Scores are printed with 9 significant digits.
inline std::string WriteLattice(const Lattice &lat) {
  std::string out = "UTT";
  if (!lat.UtteranceId().empty()) out += " " + lat.UtteranceId();
  out += "\n";
  for (const Node &n : lat.Nodes())
    out += "NODE " + std::to_string(n.id) + " " + std::to_string(n.time) + "\n";
  bool implied = lat.NumArcs() ? lat.Arcs().front().source == lat.StartNode()
                               : !lat.FinalNodes().empty() &&
                                     lat.FinalNodes().front() == lat.StartNode();
  if (!lat.Empty() && !implied)
    out += "START " + std::to_string(lat.StartNode()) + "\n";
  for (const Arc &a : lat.Arcs())
    out += std::to_string(a.source) + " " + std::to_string(a.target) + " " +
           a.word + " " + FormatSig(a.acoustic_score) + " " +
           FormatSig(a.lm_score) + "\n";
  for (int32_t f : lat.FinalNodes()) out += std::to_string(f) + "\n";
  out += "\n";
  return out;
}

inline std::string WriteLattices(const std::vector<Lattice> &lats) {
  std::string out;
  for (const auto &l : lats) out += WriteLattice(l);
  return out;
}

// ---------------------------------------------------------------------------
// Graph utilities.

/// Drops nodes and arcs that lie on no start-to-final path. Arc order is
/// preserved. If no path exists the result holds only the start node.
inline Lattice Connect(const Lattice &lat) {
  if (lat.Empty()) return lat;
  size_t n = lat.NumNodes();
  std::vector<bool> fwd(n, false), bwd(n, false);
  fwd[lat.StartIndex()] = true;
  for (size_t u : lat.TopologicalOrder())
    if (fwd[u])
      for (int32_t a : lat.OutArcs(u)) fwd[lat.TargetIndex(a)] = true;
  const auto &topo = lat.TopologicalOrder();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    size_t u = *it;
    if (lat.IsFinalIndex(u)) bwd[u] = true;
    for (int32_t a : lat.OutArcs(u))
      if (bwd[lat.TargetIndex(a)]) bwd[u] = true;
  }
  std::vector<Node> nodes;
  for (size_t i = 0; i < n; ++i)
    if ((fwd[i] && bwd[i]) || i == lat.StartIndex()) nodes.push_back(lat.Nodes()[i]);
  std::vector<Arc> arcs;
  for (size_t a = 0; a < lat.NumArcs(); ++a) {
    size_t s = lat.SourceIndex(a), t = lat.TargetIndex(a);
    if (fwd[s] && bwd[s] && fwd[t] && bwd[t]) arcs.push_back(lat.Arcs()[a]);
  }
  std::vector<int32_t> finals;
  for (int32_t f : lat.FinalNodes()) {
    size_t i = lat.IndexOf(f);
    if (fwd[i] && bwd[i]) finals.push_back(f);
  }
  return Lattice(lat.UtteranceId(), std::move(nodes), std::move(arcs),
                 lat.StartNode(), std::move(finals));
}

/// Number of start-to-final paths (as a double; may be huge).
inline double CountPaths(const Lattice &lat) {
  if (lat.Empty()) return 0.0;
  std::vector<double> count(lat.NumNodes(), 0.0);
  count[lat.StartIndex()] = 1.0;
  double total = 0.0;
  for (size_t u : lat.TopologicalOrder()) {
    if (lat.IsFinalIndex(u)) total += count[u];
    for (int32_t a : lat.OutArcs(u)) count[lat.TargetIndex(a)] += count[u];
  }
  return total;
}

/// Combined weight of every arc, indexed by arc.
inline std::vector<double> ArcWeights(const Lattice &lat, const ScaleConfig &scales) {
  scales.Check();
  std::vector<double> w(lat.NumArcs());
  for (size_t a = 0; a < lat.NumArcs(); ++a) {
    const Arc &arc = lat.Arcs()[a];
    w[a] = scales.acoustic_scale * arc.acoustic_score +
           scales.lm_scale * arc.lm_score;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Forward-backward.

struct ArcPosteriors {
  std::vector<double> posterior;      // per arc
  std::vector<double> log_posterior;  // per arc, <= 0
  std::vector<double> alpha;          // per node index
  std::vector<double> beta;           // per node index
  /// Probability that a path ends at this node (zero for non-finals).
  std::vector<double> final_posterior;
  double total_logprob = kLogZero;
};

inline ArcPosteriors ForwardBackward(const Lattice &lat, const ScaleConfig &scales) {
  if (lat.Empty()) throw Error("forward-backward on empty lattice");
  std::vector<double> w = ArcWeights(lat, scales);
  size_t n = lat.NumNodes();
  ArcPosteriors r;
  r.alpha.assign(n, kLogZero);
  r.beta.assign(n, kLogZero);
  r.alpha[lat.StartIndex()] = 0.0;
  const auto &topo = lat.TopologicalOrder();
  std::vector<double> terms;
  for (size_t u : topo) {
    if (u == lat.StartIndex()) continue;
    terms.clear();
    for (int32_t a : lat.InArcs(u)) terms.push_back(r.alpha[lat.SourceIndex(a)] + w[a]);
    r.alpha[u] = LogSumExp(terms);
  }
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    size_t u = *it;
    terms.clear();
    if (lat.IsFinalIndex(u)) terms.push_back(0.0);
    for (int32_t a : lat.OutArcs(u)) terms.push_back(w[a] + r.beta[lat.TargetIndex(a)]);
    r.beta[u] = LogSumExp(terms);
  }
  terms.clear();
  for (size_t i = 0; i < n; ++i)
    if (lat.IsFinalIndex(i)) terms.push_back(r.alpha[i]);
  r.total_logprob = LogSumExp(terms);
  if (r.total_logprob == kLogZero) throw Error("no start-to-final path");
  r.posterior.resize(lat.NumArcs());
  r.log_posterior.resize(lat.NumArcs());
  for (size_t a = 0; a < lat.NumArcs(); ++a) {
    double lp = r.alpha[lat.SourceIndex(a)] + w[a] + r.beta[lat.TargetIndex(a)] -
                r.total_logprob;
    if (std::isnan(lp)) lp = kLogZero;
    lp = std::min(lp, 0.0);
    r.log_posterior[a] = lp;
    r.posterior[a] = std::exp(lp);
  }
  r.final_posterior.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i)
    if (lat.IsFinalIndex(i))
      r.final_posterior[i] = std::exp(std::min(0.0, r.alpha[i] - r.total_logprob));
  return r;
}

// ---------------------------------------------------------------------------
// Best path and n-best.

struct Hypothesis {
  std::vector<std::string> words;                      // epsilons removed
  std::vector<std::pair<int32_t, int32_t>> word_times;  // (start, end) frames
  std::vector<int32_t> arcs;                           // includes epsilon arcs
  double total_score = 0.0;     // combined weight
  double acoustic_score = 0.0;  // unscaled sum
  double lm_score = 0.0;        // unscaled sum
};

/// Scores within this relative distance are treated as tied.
inline bool ScoresTied(double a, double b) {
  return std::abs(a - b) <=
         1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Builds a hypothesis from an arc sequence; scores are summed left to right.
inline Hypothesis MakeHypothesis(const Lattice &lat, const std::vector<int32_t> &arcs,
                                 const ScaleConfig &scales) {
  scales.Check();
  Hypothesis h;
  h.arcs = arcs;
  for (int32_t a : arcs) {
    const Arc &arc = lat.Arcs()[a];
    h.total_score += scales.acoustic_scale * arc.acoustic_score +
                     scales.lm_scale * arc.lm_score;
    h.acoustic_score += arc.acoustic_score;
    h.lm_score += arc.lm_score;
    if (arc.IsEpsilon()) continue;
    h.words.push_back(arc.word);
    h.word_times.emplace_back(lat.TimeOfIndex(lat.SourceIndex(a)),
                              lat.TimeOfIndex(lat.TargetIndex(a)));
  }
  return h;
}

/// Tie-break order for paths: word sequence first, then arc indices.
inline bool PathLess(const Lattice &lat, const std::vector<int32_t> &x,
                     const std::vector<int32_t> &y) {
  std::vector<const std::string *> wx, wy;
  for (int32_t a : x)
    if (!lat.Arcs()[a].IsEpsilon()) wx.push_back(&lat.Arcs()[a].word);
  for (int32_t a : y)
    if (!lat.Arcs()[a].IsEpsilon()) wy.push_back(&lat.Arcs()[a].word);
  auto deref_less = [](const std::string *p, const std::string *q) { return *p < *q; };
  if (std::lexicographical_compare(wx.begin(), wx.end(), wy.begin(), wy.end(), deref_less))
    return true;
  if (std::lexicographical_compare(wy.begin(), wy.end(), wx.begin(), wx.end(), deref_less))
    return false;
  return x < y;
}

namespace internal {

// Best completion from every node: score and first arc (-1 = stop here,
// -2 = no completion). Suffix comparison keeps tie-breaking exact, because
// a common prefix preserves lexicographic order.
struct BestSuffix {
  std::vector<double> score;
  std::vector<int32_t> next;
};

inline std::vector<int32_t> SuffixChain(const Lattice &lat, const BestSuffix &bs,
                                        int32_t first_arc) {
  std::vector<int32_t> chain;
  int32_t a = first_arc;
  while (a >= 0) {
    chain.push_back(a);
    a = bs.next[lat.TargetIndex(a)];
  }
  return chain;
}

inline BestSuffix ComputeBestSuffix(const Lattice &lat, const std::vector<double> &w) {
  size_t n = lat.NumNodes();
  BestSuffix bs{std::vector<double>(n, kLogZero), std::vector<int32_t>(n, -2)};
  const auto &topo = lat.TopologicalOrder();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    size_t u = *it;
    if (lat.IsFinalIndex(u)) {
      bs.score[u] = 0.0;
      bs.next[u] = -1;
    }
    for (int32_t a : lat.OutArcs(u)) {
      size_t t = lat.TargetIndex(a);
      if (bs.next[t] == -2) continue;
      double cand = w[a] + bs.score[t];
      bool take = false;
      if (bs.next[u] == -2) {
        take = true;
      } else if (ScoresTied(cand, bs.score[u])) {
        take = PathLess(lat, SuffixChain(lat, bs, a), SuffixChain(lat, bs, bs.next[u]));
      } else {
        take = cand > bs.score[u];
      }
      if (take) {
        bs.score[u] = cand;
        bs.next[u] = a;
      }
    }
  }
  return bs;
}

}  // namespace internal

inline Hypothesis BestPath(const Lattice &lat, const ScaleConfig &scales) {
  if (lat.Empty()) throw Error("best path on empty lattice");
  std::vector<double> w = ArcWeights(lat, scales);
  internal::BestSuffix bs = internal::ComputeBestSuffix(lat, w);
  int32_t first = bs.next[lat.StartIndex()];
  if (first == -2) throw Error("no start-to-final path");
  return MakeHypothesis(lat, internal::SuffixChain(lat, bs, first), scales);
}

/// Top-n distinct word sequences by combined score, best first. Exact A*
/// search with the best-suffix score as heuristic.
inline std::vector<Hypothesis> NBest(const Lattice &lat, const ScaleConfig &scales,
                                     size_t n) {
  if (n < 1) throw Error("n-best size must be at least 1");
  if (lat.Empty()) throw Error("n-best on empty lattice");
  std::vector<double> w = ArcWeights(lat, scales);
  internal::BestSuffix bs = internal::ComputeBestSuffix(lat, w);
  if (bs.next[lat.StartIndex()] == -2) throw Error("no start-to-final path");

  struct Partial {
    size_t node;
    double g;
    int32_t arc;
    int32_t parent;
    bool done;
  };
  struct Entry {
    double f;
    uint64_t seq;
    int32_t id;
    bool operator<(const Entry &o) const {  // max-heap on f, FIFO on ties
      if (f != o.f) return f < o.f;
      return seq > o.seq;
    }
  };
  constexpr size_t kMaxPops = 50'000'000;
  std::vector<Partial> pool;
  std::priority_queue<Entry> heap;
  uint64_t seq = 0;
  auto push = [&](Partial p, double f) {
    pool.push_back(p);
    heap.push({f, seq++, static_cast<int32_t>(pool.size() - 1)});
  };
  auto arcs_of = [&](int32_t id) {
    std::vector<int32_t> arcs;
    for (int32_t p = id; p >= 0 && pool[p].arc >= 0; p = pool[p].parent)
      arcs.push_back(pool[p].arc);
    std::reverse(arcs.begin(), arcs.end());
    return arcs;
  };

  std::vector<Hypothesis> results;
  std::set<std::vector<std::string>> seen;
  std::vector<std::vector<int32_t>> tied;
  double anchor = 0.0;
  auto flush = [&] {
    std::sort(tied.begin(), tied.end(),
              [&](const auto &x, const auto &y) { return PathLess(lat, x, y); });
    for (auto &arcs : tied) {
      if (results.size() >= n) break;
      Hypothesis h = MakeHypothesis(lat, arcs, scales);
      if (seen.insert(h.words).second) results.push_back(std::move(h));
    }
    tied.clear();
  };

  push({lat.StartIndex(), 0.0, -1, -1, false}, bs.score[lat.StartIndex()]);
  size_t pops = 0;
  while (!heap.empty() && results.size() < n) {
    Entry top = heap.top();
    if (!tied.empty() && top.f < anchor && !ScoresTied(top.f, anchor)) {
      flush();
      continue;
    }
    heap.pop();
    if (++pops > kMaxPops) throw Error("n-best search exceeded its expansion budget");
    Partial p = pool[top.id];
    if (p.done) {
      if (tied.empty()) anchor = p.g;
      tied.push_back(arcs_of(p.parent));
      continue;
    }
    if (lat.IsFinalIndex(p.node)) push({p.node, p.g, -1, top.id, true}, p.g);
    for (int32_t a : lat.OutArcs(p.node)) {
      size_t t = lat.TargetIndex(a);
      if (bs.next[t] == -2) continue;
      double g = p.g + w[a];
      push({t, g, a, top.id, false}, g + bs.score[t]);
    }
  }
  if (!tied.empty() && results.size() < n) flush();
  return results;
}

/// Every start-to-final path with its combined weight, in depth-first order
/// over arc indices. Test oracle; throws if there are more than `cap` paths.
inline std::vector<std::pair<Hypothesis, double>> EnumeratePaths(
    const Lattice &lat, const ScaleConfig &scales, size_t cap) {
  if (lat.Empty()) return {};
  double count = CountPaths(lat);
  if (count > static_cast<double>(cap))
    throw Error("lattice has " + FormatSig(count) + " paths, more than cap " +
                std::to_string(cap));
  scales.Check();
  std::vector<std::pair<Hypothesis, double>> out;
  std::vector<int32_t> stack;
  std::function<void(size_t)> dfs = [&](size_t u) {
    if (lat.IsFinalIndex(u)) {
      Hypothesis h = MakeHypothesis(lat, stack, scales);
      double wgt = h.total_score;
      out.emplace_back(std::move(h), wgt);
    }
    for (int32_t a : lat.OutArcs(u)) {
      stack.push_back(a);
      dfs(lat.TargetIndex(a));
      stack.pop_back();
    }
  };
  dfs(lat.StartIndex());
  return out;
}

}  // namespace nerlat

#endif  // NERLAT_LATTICE_H_
