// tcpgen/tests/decoding_test.cc

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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "test_util.h"

namespace tcpgen {
namespace {

using testing::RandomMatrix;
using testing::RandomSimplex;
using testing::TinyVocab;

std::string HistoryKey(int frame, const TokenSeq &hist) {
  std::string key = std::to_string(frame) + ":";
  for (int x : hist) key += std::to_string(x) + ",";
  return key;
}

// Label scorer whose next-token distribution is a fixed function of the
// history, supplied by the test.
struct HistoryState : DecoderState {
  TokenSeq hist;
};

class FnLabelScorer : public LabelScorer {
 public:
  FnLabelScorer(std::function<Vector(const TokenSeq &)> fn, int num_lexical)
      : fn_(std::move(fn)), num_lexical_(num_lexical) {}
  StatePtr Initial() override { return std::make_shared<HistoryState>(); }
  std::pair<Distribution, StatePtr> Step(const StatePtr &state, int y_prev,
                                         std::span<const int>) override {
    const auto *s = static_cast<const HistoryState *>(state.get());
    auto next = std::make_shared<HistoryState>(*s);
    if (y_prev < num_lexical_) next->hist.push_back(y_prev);
    return {Distribution{fn_(next->hist)}, next};
  }

 private:
  std::function<Vector(const TokenSeq &)> fn_;
  int num_lexical_;
};

class FnTransducerScorer : public TransducerScorer {
 public:
  FnTransducerScorer(int frames, std::function<Vector(int, const TokenSeq &)> fn,
                     int sos)
      : frames_(frames), fn_(std::move(fn)), sos_(sos) {}
  int NumFrames() const override { return frames_; }
  StatePtr Predict(const StatePtr &prev, int y_prev,
                   std::span<const int>) override {
    auto next = std::make_shared<HistoryState>();
    if (prev) next->hist = static_cast<const HistoryState *>(prev.get())->hist;
    if (y_prev != sos_) next->hist.push_back(y_prev);
    return next;
  }
  Distribution Joint(int frame, const StatePtr &pred) override {
    return Distribution{
        fn_(frame, static_cast<const HistoryState *>(pred.get())->hist)};
  }

 private:
  int frames_;
  std::function<Vector(int, const TokenSeq &)> fn_;
  int sos_;
};

// Random but fixed distribution for each (frame, history).
std::function<Vector(int, const TokenSeq &)> RandomTable(uint64_t seed, int n) {
  return [seed, n](int frame, const TokenSeq &hist) {
    Prng rng(DeriveSeed(seed, HistoryKey(frame, hist)));
    return RandomSimplex(n, &rng);
  };
}

// Three lexical units: internal "A", final "B_" and "C_".
SubwordVocab ThreeVocab() { return SubwordVocab({"A", "B_", "C_"}); }

// ---------------------------------------------------------------- AED

struct Scored {
  TokenSeq tokens;
  double score;
  bool complete;
};

// Every sequence the AED search can produce with max length `max_len`:
// sequences shorter than max_len closed by EOS, and unterminated ones of
// exactly max_len.
std::vector<Scored> EnumerateAed(
    const std::function<Vector(const TokenSeq &)> &fn, int L, int max_len) {
  std::vector<Scored> out;
  std::function<void(TokenSeq &, double)> rec = [&](TokenSeq &seq, double s) {
    if (static_cast<int>(seq.size()) == max_len) {
      out.push_back({seq, s, false});
      return;
    }
    Vector p = fn(seq);
    out.push_back({seq, s + std::log(p[L]), true});
    for (int k = 0; k < L; ++k) {
      seq.push_back(k);
      rec(seq, s + std::log(p[k]));
      seq.pop_back();
    }
  };
  TokenSeq seq;
  rec(seq, 0.0);
  std::sort(out.begin(), out.end(), [](const Scored &a, const Scored &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.tokens < b.tokens;
  });
  return out;
}

TEST(BeamSearchAed, UnboundedBeamMatchesExhaustiveSearch) {
  SubwordVocab vocab = ThreeVocab();
  const int L = vocab.NumLexical();
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto table = RandomTable(seed, L + 1);
    auto fn = [&](const TokenSeq &h) { return table(0, h); };
    const int max_len = 4;
    std::vector<Scored> all = EnumerateAed(fn, L, max_len);
    FnLabelScorer scorer(fn, vocab.NumLexical());
    DecodeConfig cfg;
    cfg.beam = 1000;
    cfg.max_output_len = max_len;
    auto hyps = BeamSearchAed(scorer, vocab, nullptr, cfg);
    ASSERT_EQ(hyps.size(), all.size());
    for (size_t i = 0; i < all.size(); ++i) {
      EXPECT_EQ(hyps[i].tokens, all[i].tokens) << "seed " << seed << " rank " << i;
      EXPECT_NEAR(hyps[i].log_score, all[i].score, 1e-12);
      EXPECT_EQ(hyps[i].complete, all[i].complete);
    }
  }
}

TEST(BeamSearchAed, BestScoreIsBoundedByExhaustiveBest) {
  SubwordVocab vocab = ThreeVocab();
  const int L = vocab.NumLexical();
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto table = RandomTable(100 + seed, L + 1);
    auto fn = [&](const TokenSeq &h) { return table(0, h); };
    std::vector<Scored> all = EnumerateAed(fn, L, 5);
    for (int beam : {1, 2, 3, 5, 8}) {
      FnLabelScorer scorer(fn, vocab.NumLexical());
      DecodeConfig cfg;
      cfg.beam = beam;
      cfg.max_output_len = 5;
      auto hyps = BeamSearchAed(scorer, vocab, nullptr, cfg);
      ASSERT_FALSE(hyps.empty());
      EXPECT_LE(hyps[0].log_score, all[0].score + 1e-12);
      EXPECT_LE(static_cast<int>(hyps.size()), beam);
      for (size_t i = 1; i < hyps.size(); ++i)
        EXPECT_GE(hyps[i - 1].log_score, hyps[i].log_score);
    }
  }
}

TEST(BeamSearchAed, BeamOneIsGreedyChain) {
  SubwordVocab vocab = ThreeVocab();
  const int L = vocab.NumLexical();
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    auto table = RandomTable(300 + seed, L + 1);
    auto fn = [&](const TokenSeq &h) { return table(0, h); };
    TokenSeq greedy;
    double score = 0.0;
    bool complete = false;
    for (int i = 0; i < 6; ++i) {
      Vector p = fn(greedy);
      int k = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
      score += std::log(p[k]);
      if (k == L) {
        complete = true;
        break;
      }
      greedy.push_back(k);
    }
    FnLabelScorer scorer(fn, vocab.NumLexical());
    DecodeConfig cfg;
    cfg.beam = 1;
    cfg.max_output_len = 6;
    auto hyps = BeamSearchAed(scorer, vocab, nullptr, cfg);
    ASSERT_EQ(hyps.size(), 1u);
    EXPECT_EQ(hyps[0].tokens, greedy);
    EXPECT_NEAR(hyps[0].log_score, score, 1e-12);
    EXPECT_EQ(hyps[0].complete, complete);
  }
}

TEST(BeamSearchAed, OneHotModelGivesItsChain) {
  SubwordVocab vocab = ThreeVocab();
  const TokenSeq chain = {0, 0, 2, 1};
  auto fn = [&](const TokenSeq &h) {
    Vector p(4, 0.0);
    p[h.size() < chain.size() ? chain[h.size()] : 3] = 1.0;
    return p;
  };
  FnLabelScorer scorer(fn, vocab.NumLexical());
  DecodeConfig cfg;
  cfg.beam = 1;
  auto hyps = BeamSearchAed(scorer, vocab, nullptr, cfg);
  ASSERT_EQ(hyps.size(), 1u);
  EXPECT_EQ(hyps[0].tokens, chain);
  EXPECT_EQ(hyps[0].log_score, 0.0);
  EXPECT_TRUE(hyps[0].complete);
}

TEST(BeamSearchAed, LengthLimitFlagsIncompleteHypotheses) {
  SubwordVocab vocab = ThreeVocab();
  auto fn = [](const TokenSeq &) { return Vector{0.7, 0.2, 0.1, 0.0}; };
  FnLabelScorer scorer(fn, vocab.NumLexical());
  DecodeConfig cfg;
  cfg.beam = 2;
  cfg.max_output_len = 3;
  auto hyps = BeamSearchAed(scorer, vocab, nullptr, cfg);
  ASSERT_EQ(hyps.size(), 2u);
  EXPECT_EQ(hyps[0].tokens, (TokenSeq{0, 0, 0}));
  EXPECT_FALSE(hyps[0].complete);
  EXPECT_NEAR(hyps[0].log_score, 3 * std::log(0.7), 1e-12);
}

TEST(BeamSearchAed, EqualScoresAreOrderedByTokens) {
  SubwordVocab vocab = ThreeVocab();
  auto fn = [](const TokenSeq &h) {
    return h.empty() ? Vector{0.0, 0.5, 0.5, 0.0} : Vector{0.0, 0.0, 0.0, 1.0};
  };
  FnLabelScorer scorer(fn, vocab.NumLexical());
  DecodeConfig cfg;
  cfg.beam = 4;
  auto hyps = BeamSearchAed(scorer, vocab, nullptr, cfg);
  ASSERT_EQ(hyps.size(), 2u);
  EXPECT_EQ(hyps[0].tokens, (TokenSeq{1}));
  EXPECT_EQ(hyps[1].tokens, (TokenSeq{2}));
}

TEST(BeamSearchAed, TreeStatesReplayTokens) {
  SubwordVocab vocab = TinyVocab();
  const int L = vocab.NumLexical();
  PrefixTree tree = PrefixTree::Build(vocab, {"BADO", "BAKI", "KIDO", "DO"});
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto table = RandomTable(500 + seed, L + 1);
    FnLabelScorer scorer([&](const TokenSeq &h) { return table(0, h); },
                         vocab.NumLexical());
    DecodeConfig cfg;
    cfg.beam = 6;
    cfg.max_output_len = 5;
    for (const Hypothesis &h : BeamSearchAed(scorer, vocab, &tree, cfg)) {
      TreeState s = TreeState::Root();
      for (int id : h.tokens) s = tree.Advance(vocab, s, id);
      EXPECT_EQ(h.tree_state, s);
    }
  }
}

// ---------------------------------------------------------------- RNN-T

// Probability of every label sequence, summed over alignments with at most
// `cap` labels per frame and a blank closing every frame.
std::map<TokenSeq, double> EnumerateRnnt(
    const std::function<Vector(int, const TokenSeq &)> &fn, int L, int T,
    int cap) {
  std::map<TokenSeq, double> prob;
  std::function<void(int, TokenSeq &, double)> frame = [&](int t, TokenSeq &seq,
                                                          double p) {
    if (t == T) {
      prob[seq] += p;
      return;
    }
    // Emit n labels at frame t, then blank.
    std::function<void(int, double)> emit = [&](int n, double q) {
      Vector d = fn(t, seq);
      frame(t + 1, seq, q * d[L]);
      if (n == cap) return;
      for (int k = 0; k < L; ++k) {
        seq.push_back(k);
        emit(n + 1, q * d[k]);
        seq.pop_back();
      }
    };
    emit(0, p);
  };
  TokenSeq seq;
  frame(0, seq, 1.0);
  return prob;
}

TEST(BeamSearchRnnt, UnboundedBeamMatchesAlignmentEnumeration) {
  SubwordVocab vocab({"A_", "B_"});
  const int L = vocab.NumLexical();
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    for (int cap : {1, 2}) {
      auto fn = RandomTable(700 + seed, L + 1);
      auto oracle = EnumerateRnnt(fn, L, 3, cap);
      FnTransducerScorer scorer(3, fn, vocab.Sos());
      DecodeConfig cfg;
      cfg.beam = 10000;
      cfg.max_symbols_per_frame = cap;
      auto hyps = BeamSearchRnnt(scorer, vocab, nullptr, cfg);
      ASSERT_EQ(hyps.size(), oracle.size());
      double best = -1e300;
      TokenSeq best_seq;
      for (const auto &[seq, p] : oracle) {
        if (std::log(p) > best) {
          best = std::log(p);
          best_seq = seq;
        }
      }
      EXPECT_EQ(hyps[0].tokens, best_seq);
      for (const Hypothesis &h : hyps) {
        ASSERT_TRUE(oracle.count(h.tokens));
        EXPECT_NEAR(h.log_score, std::log(oracle[h.tokens]), 1e-10);
      }
    }
  }
}

TEST(BeamSearchRnnt, BeamOneOnOneHotLatticeFollowsGreedyAlignment) {
  SubwordVocab vocab({"A", "A_", "B_"});
  const int L = vocab.NumLexical();
  // Labels emitted per frame: {A, A_}, {}, {B_}, {A_, B_, B_}.
  const std::vector<TokenSeq> plan = {{0, 1}, {}, {2}, {1, 2, 2}};
  auto fn = [&](int t, const TokenSeq &hist) {
    size_t before = 0;
    for (int f = 0; f < t; ++f) before += plan[f].size();
    Vector p(L + 1, 0.0);
    size_t j = hist.size() - before;
    p[j < plan[t].size() ? plan[t][j] : L] = 1.0;
    return p;
  };
  FnTransducerScorer scorer(4, fn, vocab.Sos());
  DecodeConfig cfg;
  cfg.beam = 1;
  cfg.max_symbols_per_frame = 3;
  auto hyps = BeamSearchRnnt(scorer, vocab, nullptr, cfg);
  ASSERT_EQ(hyps.size(), 1u);
  EXPECT_EQ(hyps[0].tokens, (TokenSeq{0, 1, 2, 1, 2, 2}));
  EXPECT_EQ(hyps[0].log_score, 0.0);
}

TEST(BeamSearchRnnt, BeamIsPrunedAndRanked) {
  SubwordVocab vocab = TinyVocab();
  const int L = vocab.NumLexical();
  PrefixTree tree = PrefixTree::Build(vocab, {"BADO", "KI", "DOKI"});
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    FnTransducerScorer scorer(5, RandomTable(900 + seed, L + 1), vocab.Sos());
    DecodeConfig cfg;
    cfg.beam = 4;
    auto hyps = BeamSearchRnnt(scorer, vocab, &tree, cfg);
    ASSERT_FALSE(hyps.empty());
    EXPECT_LE(hyps.size(), 4u);
    for (size_t i = 1; i < hyps.size(); ++i) {
      EXPECT_GE(hyps[i - 1].log_score, hyps[i].log_score);
      EXPECT_NE(hyps[i - 1].tokens, hyps[i].tokens);
    }
    for (const Hypothesis &h : hyps) {
      TreeState s = TreeState::Root();
      for (int id : h.tokens) s = tree.Advance(vocab, s, id);
      EXPECT_EQ(h.tree_state, s);
    }
  }
}

// ---------------------------------------------------------------- fusion

TEST(FuseLm, ZeroWeightIsIdentity) {
  SubwordVocab vocab = TinyVocab();
  UniformLm lm(vocab);
  Prng rng(3);
  Distribution d{RandomSimplex(vocab.NumLexical() + 1, &rng)};
  for (bool eos : {true, false}) {
    Vector a = FuseLm(d, nullptr, 0, 0.0, vocab, eos);
    Vector b = FuseLm(d, &lm, 0, 0.0, vocab, eos);
    for (size_t k = 0; k < d.p.size(); ++k) {
      EXPECT_EQ(a[k], std::log(d.p[k]));
      EXPECT_EQ(b[k], std::log(d.p[k]));
    }
  }
}

TEST(FuseLm, UniformLmShiftsLexicalScores) {
  SubwordVocab vocab = TinyVocab();
  const int L = vocab.NumLexical();
  UniformLm lm(vocab);
  Prng rng(4);
  Distribution d{RandomSimplex(L + 1, &rng)};
  const double lambda = 0.3;
  const double shift = lambda * std::log(1.0 / (L + 1));
  Vector aed = FuseLm(d, &lm, 0, lambda, vocab, true);
  Vector rnnt = FuseLm(d, &lm, 0, lambda, vocab, false);
  for (int k = 0; k < L; ++k) {
    EXPECT_NEAR(aed[k], std::log(d.p[k]) + shift, 1e-14);
    EXPECT_NEAR(rnnt[k], std::log(d.p[k]) + shift, 1e-14);
  }
  EXPECT_NEAR(aed[L], std::log(d.p[L]) + shift, 1e-14);
  EXPECT_EQ(rnnt[L], std::log(d.p[L]));  // blank carries no LM term
}

TEST(FuseLm, NegativeWeightIsRejected) {
  SubwordVocab vocab = TinyVocab();
  UniformLm lm(vocab);
  Distribution d{Vector(vocab.NumLexical() + 1, 1.0 / 7)};
  EXPECT_THROW(FuseLm(d, &lm, 0, -0.1, vocab, true), ContractViolation);
}

TEST(BigramLm, AddOneEstimates) {
  SubwordVocab vocab = TinyVocab();  // BA DO KI BA_ DO_ KI_ -> ids 0..5
  BigramLm lm(vocab, {{0, 4}, {0, 5}, {4}});
  const int eos = vocab.Eos();
  const int s = lm.StartState();
  // 7 outcomes (6 units + EOS); SOS was followed by BA twice and DO_ once.
  EXPECT_NEAR(lm.LogProb(s, 0), std::log(3.0 / 10), 1e-14);
  EXPECT_NEAR(lm.LogProb(s, 4), std::log(2.0 / 10), 1e-14);
  EXPECT_NEAR(lm.LogProb(s, 1), std::log(1.0 / 10), 1e-14);
  EXPECT_NEAR(lm.LogProb(lm.NextState(s, 0), 4), std::log(2.0 / 9), 1e-14);
  EXPECT_NEAR(lm.LogProb(lm.NextState(s, 4), eos), std::log(3.0 / 9), 1e-14);
  EXPECT_NEAR(lm.LogProb(lm.NextState(s, 2), 0), std::log(1.0 / 7), 1e-14);
}

TEST(BigramLm, FusedSearchMatchesHandScoredPaths) {
  SubwordVocab vocab = TinyVocab();
  const int L = vocab.NumLexical();
  BigramLm lm(vocab, {{0, 4}, {0, 5}, {4}});
  // Model: BA .3, DO_ .3, KI_ .39, EOS .01 first; then BA .3, DO_ .25,
  // KI_ .3, EOS .15.
  auto fn = [](const TokenSeq &h) {
    return h.empty() ? Vector{0.3, 0.0, 0.0, 0.0, 0.3, 0.39, 0.01}
                     : Vector{0.3, 0.0, 0.0, 0.0, 0.25, 0.3, 0.15};
  };
  const double lambda = 1.0;
  // Hand-scored paths (model term + LM term per step).
  const double ba_do = std::log(0.3) + std::log(3.0 / 10) +    // BA | SOS
                       std::log(0.25) + std::log(2.0 / 9) +   // DO_ | BA
                       std::log(0.15) + std::log(3.0 / 9);    // EOS | DO_
  const double ki = std::log(0.39) + std::log(1.0 / 10) +     // KI_ | SOS
                    std::log(0.15) + std::log(2.0 / 8);       // EOS | KI_
  const double eos = std::log(0.01) + std::log(1.0 / 10);     // EOS | SOS
  const double dd = std::log(0.3) + std::log(2.0 / 10) +      // DO_ | SOS
                    std::log(0.15) + std::log(3.0 / 9);       // EOS | DO_
  FnLabelScorer scorer(fn, vocab.NumLexical());
  DecodeConfig cfg;
  cfg.beam = 200;
  cfg.max_output_len = 4;
  cfg.lm_weight = lambda;
  auto hyps = BeamSearchAed(scorer, vocab, nullptr, cfg, &lm);
  std::map<TokenSeq, double> got;
  for (const Hypothesis &h : hyps) got[h.tokens] = h.log_score;
  EXPECT_NEAR(got.at({0, 4}), ba_do, 1e-12);
  EXPECT_NEAR(got.at({5}), ki, 1e-12);
  EXPECT_NEAR(got.at({}), eos, 1e-12);
  EXPECT_NEAR(got.at({4}), dd, 1e-12);
  // DO_ alone is the best complete path under the LM.
  EXPECT_GT(dd, ba_do);
  EXPECT_GT(dd, ki);
  EXPECT_GT(dd, eos);
  EXPECT_EQ(hyps[0].tokens, (TokenSeq{4}));
  // Without the LM the model prefers KI_.
  FnLabelScorer plain(fn, vocab.NumLexical());
  cfg.lm_weight = 0.0;
  auto base = BeamSearchAed(plain, vocab, nullptr, cfg);
  EXPECT_EQ(base[0].tokens, TokenSeq{5});
  EXPECT_NEAR(base[0].log_score, std::log(0.39) + std::log(0.15), 1e-12);
}

// ---------------------------------------------------------------- models

std::unique_ptr<ToyModel> RandomModel(ModelFamily family, Variant v,
                                      const SubwordVocab &vocab, uint64_t seed) {
  ModelDims dims{4, 5, 4, 3, 3};
  std::unique_ptr<ToyModel> m;
  if (family == ModelFamily::kAed)
    m = std::make_unique<ToyAed>(vocab, dims, v);
  else
    m = std::make_unique<ToyRnnt>(vocab, dims, v);
  Prng rng(seed);
  m->Init(&rng);
  return m;
}

TEST(Decode, EmptyTreeIsInert) {
  SubwordVocab vocab = TinyVocab();
  PrefixTree empty;
  for (ModelFamily f : {ModelFamily::kAed, ModelFamily::kRnnt}) {
    for (Variant v : {Variant::kBaseline, Variant::kDeepBiasing, Variant::kTcpgen,
                      Variant::kTcpgenDb}) {
      for (uint64_t seed = 1; seed <= 5; ++seed) {
        auto model = RandomModel(f, v, vocab, seed);
        Prng rng(seed + 50);
        Matrix feats = RandomMatrix(6, 4, &rng);
        DecodeConfig cfg;
        cfg.beam = 4;
        cfg.max_output_len = 6;
        auto a = Decode(*model, feats, &empty, cfg, nullptr, true);
        auto b = Decode(*model, feats, nullptr, cfg, nullptr, false);
        ASSERT_EQ(a.size(), b.size()) << ToString(f) << ":" << ToString(v);
        for (size_t i = 0; i < a.size(); ++i) {
          EXPECT_EQ(a[i].tokens, b[i].tokens);
          EXPECT_NEAR(a[i].log_score, b[i].log_score, 1e-9);
        }
      }
    }
  }
}

TEST(Decode, BiasingListChangesTcpgenOutputDistribution) {
  SubwordVocab vocab = TinyVocab();
  PrefixTree tree = PrefixTree::Build(vocab, {"BAKI", "DO"});
  auto model = RandomModel(ModelFamily::kAed, Variant::kTcpgen, vocab, 9);
  Prng rng(10);
  Matrix feats = RandomMatrix(5, 4, &rng);
  DecodeConfig cfg;
  cfg.beam = 3;
  cfg.max_output_len = 4;
  auto a = Decode(*model, feats, &tree, cfg, nullptr, true);
  auto b = Decode(*model, feats, nullptr, cfg, nullptr, false);
  ASSERT_FALSE(a.empty());
  EXPECT_NE(a[0].log_score, b[0].log_score);
}

TEST(Decode, ParallelBatchEqualsSerial) {
  SubwordVocab vocab = TinyVocab();
  PrefixTree tree = PrefixTree::Build(vocab, {"BAKI", "DO", "KIBA"});
  for (ModelFamily f : {ModelFamily::kAed, ModelFamily::kRnnt}) {
    auto model = RandomModel(f, Variant::kTcpgenDb, vocab, 21);
    Prng rng(22);
    std::vector<Matrix> store;
    for (int i = 0; i < 6; ++i) store.push_back(RandomMatrix(4 + i, 4, &rng));
    std::vector<const Matrix *> feats;
    std::vector<const PrefixTree *> trees;
    for (size_t i = 0; i < store.size(); ++i) {
      feats.push_back(&store[i]);
      trees.push_back(i % 2 ? &tree : nullptr);
    }
    DecodeConfig cfg;
    cfg.beam = 3;
    cfg.max_output_len = 5;
    auto s = DecodeBatchSerial(*model, feats, trees, cfg, nullptr, true);
    auto p = DecodeBatchParallel(*model, feats, trees, cfg, nullptr, true);
    ASSERT_EQ(s.size(), p.size());
    for (size_t i = 0; i < s.size(); ++i) {
      ASSERT_EQ(s[i].size(), p[i].size());
      for (size_t j = 0; j < s[i].size(); ++j) {
        EXPECT_EQ(s[i][j].tokens, p[i][j].tokens);
        EXPECT_EQ(s[i][j].log_score, p[i][j].log_score);
      }
    }
  }
}

TEST(Nbest, WordsAndFormat) {
  SubwordVocab vocab = TinyVocab();
  EXPECT_EQ(HypothesisWords(vocab, {0, 4, 2}),
            (std::vector<std::string>{"BADO", "KI"}));
  Hypothesis h;
  h.tokens = {0, 4, 5};
  h.log_score = -1.25;
  EXPECT_EQ(FormatNbest("u1", {h}, vocab), "u1\t1\t-1.250000\tBADO KI\n");
}

}  // namespace
}  // namespace tcpgen
