// tcpgen/src/decoding.cc

// Copyright 2026  The tcpgen Authors
//
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

#include "tcpgen/decoding.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>

#include "tcpgen/autodiff.h"

namespace tcpgen {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double SafeLog(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

// Best-first; ties broken by the token sequence.
bool Better(double sa, const TokenSeq &ta, double sb, const TokenSeq &tb) {
  if (sa != sb) return sa > sb;
  return ta < tb;
}

void SortHyps(std::vector<Hypothesis> *hyps) {
  std::sort(hyps->begin(), hyps->end(),
            [](const Hypothesis &a, const Hypothesis &b) {
              return Better(a.log_score, a.tokens, b.log_score, b.tokens);
            });
}

// Expansion of hypothesis `parent` by output index `k`.
struct Candidate {
  int parent;
  int k;
  double score;
};

void SortCandidates(std::vector<Candidate> *cands,
                    const std::vector<Hypothesis> &parents) {
  std::sort(cands->begin(), cands->end(),
            [&](const Candidate &a, const Candidate &b) {
              if (a.score != b.score) return a.score > b.score;
              const TokenSeq &ta = parents[a.parent].tokens;
              const TokenSeq &tb = parents[b.parent].tokens;
              if (a.parent != b.parent && ta != tb) {
                // Compare the extended sequences.
                size_t n = std::min(ta.size(), tb.size());
                for (size_t i = 0; i < n; ++i)
                  if (ta[i] != tb[i]) return ta[i] < tb[i];
                int xa = ta.size() > n ? ta[n] : a.k;
                int xb = tb.size() > n ? tb[n] : b.k;
                if (xa != xb) return xa < xb;
                return ta.size() < tb.size();
              }
              return a.k < b.k;
            });
}

std::vector<int> ValidFor(const PrefixTree *tree, const TreeState &s) {
  if (tree == nullptr) return {};
  return tree->ValidSet(s);
}

TreeState AdvanceFor(const PrefixTree *tree, const SubwordVocab &vocab,
                     const TreeState &s, int id) {
  if (tree == nullptr) return s;
  return tree->Advance(vocab, s, id);
}

// ---------------------------------------------------------------- scorers

struct AedState : DecoderState {
  ad::Var h;
};

class AedModelScorer : public LabelScorer {
 public:
  AedModelScorer(const ToyAed &model, const Matrix &features, bool biasing)
      : model_(model), ctx_(model.Begin(tape_, features, biasing)) {}

  StatePtr Initial() override { return std::make_shared<AedState>(); }

  std::pair<Distribution, StatePtr> Step(const StatePtr &state, int y_prev,
                                         std::span<const int> valid) override {
    const auto *s = static_cast<const AedState *>(state.get());
    ToyAed::StepOut out = model_.Step(tape_, ctx_, s->h, y_prev, valid);
    auto next = std::make_shared<AedState>();
    next->h = out.h_dec;
    return {Distribution{tape_.value(out.dist)}, next};
  }

 private:
  const ToyAed &model_;
  ad::Tape tape_;
  ToyAed::Context ctx_;
};

struct RnntState : DecoderState {
  ToyRnnt::PredOut pred;
};

class RnntModelScorer : public TransducerScorer {
 public:
  RnntModelScorer(const ToyRnnt &model, const Matrix &features, bool biasing)
      : model_(model),
        ctx_(model.Begin(tape_, features, biasing)),
        frames_(features.rows()) {}

  int NumFrames() const override { return frames_; }

  StatePtr Predict(const StatePtr &prev, int y_prev,
                   std::span<const int> valid) override {
    ad::Var h_prev;
    if (prev != nullptr)
      h_prev = static_cast<const RnntState *>(prev.get())->pred.h_pred;
    auto next = std::make_shared<RnntState>();
    next->pred = model_.Predict(tape_, ctx_, h_prev, y_prev,
                                std::vector<int>(valid.begin(), valid.end()));
    return next;
  }

  Distribution Joint(int frame, const StatePtr &pred) override {
    const auto *s = static_cast<const RnntState *>(pred.get());
    return Distribution{tape_.value(model_.Joint(tape_, ctx_, frame, s->pred).dist)};
  }

 private:
  const ToyRnnt &model_;
  ad::Tape tape_;
  ToyRnnt::Context ctx_;
  int frames_;
};

}  // namespace

// ---------------------------------------------------------------- LM

BigramLm::BigramLm(const SubwordVocab &vocab,
                   const std::vector<TokenSeq> &training_sentences)
    : num_lexical_(vocab.NumLexical()), sos_(vocab.Sos()), eos_(vocab.Eos()) {
  const int L = num_lexical_;
  // Histories: lexical ids and SOS (stored at index L).
  std::vector<std::vector<double>> counts(L + 1, std::vector<double>(L + 1, 1.0));
  for (const TokenSeq &sent : training_sentences) {
    int h = L;
    for (int tok : sent) {
      TCPGEN_CHECK(vocab.IsLexical(tok));
      counts[h][tok] += 1.0;
      h = tok;
    }
    counts[h][L] += 1.0;
  }
  log_probs_.assign(L + 1, std::vector<double>(L + 1));
  for (int h = 0; h <= L; ++h) {
    double total = 0.0;
    for (double c : counts[h]) total += c;
    for (int k = 0; k <= L; ++k) log_probs_[h][k] = std::log(counts[h][k] / total);
  }
}

double BigramLm::LogProb(int state, int token) const {
  int h = state == sos_ ? num_lexical_ : state;
  int k = token == eos_ ? num_lexical_ : token;
  TCPGEN_CHECK(h >= 0 && h <= num_lexical_);
  TCPGEN_CHECK(k >= 0 && k <= num_lexical_);
  return log_probs_[h][k];
}

Vector FuseLm(const Distribution &step, const LanguageModel *lm, int lm_state,
              double lambda, const SubwordVocab &vocab, bool terminal_is_eos) {
  TCPGEN_CHECK(lambda >= 0.0);
  const int L = vocab.NumLexical();
  TCPGEN_CHECK(static_cast<int>(step.p.size()) == L + 1);
  Vector out(L + 1);
  for (int k = 0; k <= L; ++k) out[k] = SafeLog(step.p[k]);
  if (lambda == 0.0 || lm == nullptr) return out;
  for (int k = 0; k < L; ++k) out[k] += lambda * lm->LogProb(lm_state, k);
  if (terminal_is_eos) out[L] += lambda * lm->LogProb(lm_state, vocab.Eos());
  return out;
}

std::unique_ptr<LabelScorer> MakeAedScorer(const ToyAed &model,
                                           const Matrix &features,
                                           bool biasing) {
  return std::make_unique<AedModelScorer>(model, features, biasing);
}

std::unique_ptr<TransducerScorer> MakeRnntScorer(const ToyRnnt &model,
                                                 const Matrix &features,
                                                 bool biasing) {
  return std::make_unique<RnntModelScorer>(model, features, biasing);
}

// ---------------------------------------------------------------- AED

std::vector<Hypothesis> BeamSearchAed(LabelScorer &scorer,
                                      const SubwordVocab &vocab,
                                      const PrefixTree *tree,
                                      const DecodeConfig &config,
                                      const LanguageModel *lm) {
  TCPGEN_CHECK(config.beam >= 1);
  TCPGEN_CHECK(config.max_output_len >= 1);
  const int L = vocab.NumLexical();

  Hypothesis init;
  init.model_state = scorer.Initial();
  init.lm_state = lm != nullptr ? lm->StartState() : 0;
  std::vector<Hypothesis> active{init};
  std::vector<Hypothesis> finished;

  for (int step = 0; step < config.max_output_len && !active.empty(); ++step) {
    std::vector<Candidate> cands;
    std::vector<StatePtr> next_states(active.size());
    for (size_t i = 0; i < active.size(); ++i) {
      const Hypothesis &h = active[i];
      int y_prev = h.tokens.empty() ? vocab.Sos() : h.tokens.back();
      std::vector<int> valid = ValidFor(tree, h.tree_state);
      auto [dist, state] = scorer.Step(h.model_state, y_prev, valid);
      next_states[i] = state;
      Vector scores = FuseLm(dist, lm, h.lm_state, config.lm_weight, vocab, true);
      for (int k = 0; k <= L; ++k) {
        if (scores[k] == kNegInf) continue;
        cands.push_back({static_cast<int>(i), k, h.log_score + scores[k]});
      }
    }
    SortCandidates(&cands, active);
    if (static_cast<int>(cands.size()) > config.beam) cands.resize(config.beam);

    std::vector<Hypothesis> next;
    for (const Candidate &c : cands) {
      const Hypothesis &p = active[c.parent];
      Hypothesis h;
      h.tokens = p.tokens;
      h.log_score = c.score;
      if (c.k == L) {
        h.model_state = next_states[c.parent];
        h.tree_state = p.tree_state;
        h.lm_state = p.lm_state;
        h.complete = true;
        finished.push_back(std::move(h));
        continue;
      }
      h.tokens.push_back(c.k);
      h.model_state = next_states[c.parent];
      h.tree_state = AdvanceFor(tree, vocab, p.tree_state, c.k);
      h.lm_state = lm != nullptr ? lm->NextState(p.lm_state, c.k) : 0;
      next.push_back(std::move(h));
    }
    active = std::move(next);

    // Scores never increase, so stop once the beam of finished hypotheses
    // cannot be displaced.
    if (static_cast<int>(finished.size()) >= config.beam && !active.empty()) {
      SortHyps(&finished);
      finished.resize(config.beam);
      const Hypothesis &worst = finished.back();
      bool any = false;
      for (const Hypothesis &h : active)
        if (!Better(worst.log_score, worst.tokens, h.log_score, h.tokens)) any = true;
      if (!any) active.clear();
    }
  }
  for (Hypothesis &h : active) {
    h.complete = false;
    finished.push_back(std::move(h));
  }
  SortHyps(&finished);
  if (static_cast<int>(finished.size()) > config.beam) finished.resize(config.beam);
  return finished;
}

// ---------------------------------------------------------------- RNN-T

std::vector<Hypothesis> BeamSearchRnnt(TransducerScorer &scorer,
                                       const SubwordVocab &vocab,
                                       const PrefixTree *tree,
                                       const DecodeConfig &config,
                                       const LanguageModel *lm) {
  TCPGEN_CHECK(config.beam >= 1);
  TCPGEN_CHECK(config.max_symbols_per_frame >= 0);
  TCPGEN_CHECK(config.lm_weight >= 0.0);
  const int L = vocab.NumLexical();

  Hypothesis init;
  init.lm_state = lm != nullptr ? lm->StartState() : 0;
  init.model_state = scorer.Predict(nullptr, vocab.Sos(),
                                    ValidFor(tree, init.tree_state));
  std::vector<Hypothesis> beam{init};

  for (int t = 0; t < scorer.NumFrames(); ++t) {
    std::vector<Hypothesis> active = beam;
    std::map<TokenSeq, Hypothesis> ended;
    for (int k = 0; k <= config.max_symbols_per_frame && !active.empty(); ++k) {
      std::vector<Candidate> cands;
      for (size_t i = 0; i < active.size(); ++i) {
        const Hypothesis &h = active[i];
        Distribution dist = scorer.Joint(t, h.model_state);
        double blank = h.log_score + SafeLog(dist.p[L]);
        if (blank != kNegInf) {
          auto it = ended.find(h.tokens);
          if (it == ended.end()) {
            Hypothesis e = h;
            e.log_score = blank;
            ended.emplace(h.tokens, std::move(e));
          } else {
            it->second.log_score = kernels::LogSumExp(it->second.log_score, blank);
          }
        }
        if (k == config.max_symbols_per_frame) continue;
        Vector scores = FuseLm(dist, lm, h.lm_state, config.lm_weight, vocab, false);
        for (int z = 0; z < L; ++z) {
          if (scores[z] == kNegInf) continue;
          cands.push_back({static_cast<int>(i), z, h.log_score + scores[z]});
        }
      }
      SortCandidates(&cands, active);
      if (static_cast<int>(cands.size()) > config.beam) cands.resize(config.beam);
      std::vector<Hypothesis> next;
      for (const Candidate &c : cands) {
        const Hypothesis &p = active[c.parent];
        Hypothesis h;
        h.tokens = p.tokens;
        h.tokens.push_back(c.k);
        h.log_score = c.score;
        h.tree_state = AdvanceFor(tree, vocab, p.tree_state, c.k);
        h.lm_state = lm != nullptr ? lm->NextState(p.lm_state, c.k) : 0;
        h.model_state =
            scorer.Predict(p.model_state, c.k, ValidFor(tree, h.tree_state));
        next.push_back(std::move(h));
      }
      active = std::move(next);
    }
    beam.clear();
    for (auto &kv : ended) beam.push_back(std::move(kv.second));
    SortHyps(&beam);
    if (static_cast<int>(beam.size()) > config.beam) beam.resize(config.beam);
    if (beam.empty()) break;
  }
  SortHyps(&beam);
  return beam;
}

// ---------------------------------------------------------------- helpers

std::vector<Hypothesis> Decode(const ToyModel &model, const Matrix &features,
                               const PrefixTree *tree,
                               const DecodeConfig &config,
                               const LanguageModel *lm, bool biasing) {
  static const PrefixTree kEmpty;
  const PrefixTree *use_tree = biasing ? (tree != nullptr ? tree : &kEmpty) : nullptr;
  if (model.family() == ModelFamily::kAed) {
    auto scorer = MakeAedScorer(static_cast<const ToyAed &>(model), features,
                                biasing);
    return BeamSearchAed(*scorer, model.vocab(), use_tree, config, lm);
  }
  auto scorer = MakeRnntScorer(static_cast<const ToyRnnt &>(model), features,
                               biasing);
  return BeamSearchRnnt(*scorer, model.vocab(), use_tree, config, lm);
}

std::vector<NbestList> DecodeBatchSerial(
    const ToyModel &model, const std::vector<const Matrix *> &features,
    const std::vector<const PrefixTree *> &trees, const DecodeConfig &config,
    const LanguageModel *lm, bool biasing) {
  TCPGEN_CHECK(features.size() == trees.size());
  std::vector<NbestList> out(features.size());
  for (size_t i = 0; i < features.size(); ++i) {
    out[i] = Decode(model, *features[i], trees[i], config, lm, biasing);
    for (Hypothesis &h : out[i]) h.model_state.reset();
  }
  return out;
}

std::vector<NbestList> DecodeBatchParallel(
    const ToyModel &model, const std::vector<const Matrix *> &features,
    const std::vector<const PrefixTree *> &trees, const DecodeConfig &config,
    const LanguageModel *lm, bool biasing) {
  TCPGEN_CHECK(features.size() == trees.size());
  const int n = static_cast<int>(features.size());
  std::vector<NbestList> out(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    out[i] = Decode(model, *features[i], trees[i], config, lm, biasing);
    for (Hypothesis &h : out[i]) h.model_state.reset();
  }
  return out;
}

std::vector<std::string> HypothesisWords(const SubwordVocab &vocab,
                                         const TokenSeq &tokens) {
  Detokenized d = Detokenize(vocab, tokens);
  if (d.partial.has_value()) d.words.push_back(*d.partial);
  return d.words;
}

std::string FormatNbest(const std::string &utt_id,
                        const std::vector<Hypothesis> &nbest,
                        const SubwordVocab &vocab) {
  std::string out;
  char buf[64];
  for (size_t r = 0; r < nbest.size(); ++r) {
    std::snprintf(buf, sizeof(buf), "\t%zu\t%.6f\t", r + 1, nbest[r].log_score);
    out += utt_id + buf + JoinWords(HypothesisWords(vocab, nbest[r].tokens)) + "\n";
  }
  return out;
}

}  // namespace tcpgen
