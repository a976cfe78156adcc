// tcpgen/include/tcpgen/decoding.h

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

#ifndef TCPGEN_DECODING_H_
#define TCPGEN_DECODING_H_

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tcpgen/biasing_tree.h"
#include "tcpgen/lexicon.h"
#include "tcpgen/tcpgen_core.h"
#include "tcpgen/toy_models.h"

namespace tcpgen {

// ------------------------------------------------------------ language model

// Token-level LM over lexical units plus EOS. States are small integers.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual int StartState() const = 0;
  // log P(token | state); token is a lexical id or the vocab's EOS id.
  virtual double LogProb(int state, int token) const = 0;
  virtual int NextState(int state, int token) const = 0;
};

// Add-one smoothed subword bigram. The history is the previous token (SOS at
// the start).
class BigramLm : public LanguageModel {
 public:
  BigramLm(const SubwordVocab &vocab,
           const std::vector<TokenSeq> &training_sentences);

  int StartState() const override { return sos_; }
  double LogProb(int state, int token) const override;
  int NextState(int, int token) const override { return token; }

 private:
  int num_lexical_;
  int sos_;
  int eos_;
  // counts_[history][outcome]; outcome index L stands for EOS.
  std::vector<std::vector<double>> log_probs_;
};

// Same probability for every lexical unit and EOS.
class UniformLm : public LanguageModel {
 public:
  explicit UniformLm(const SubwordVocab &vocab)
      : log_p_(-std::log(static_cast<double>(vocab.NumLexical() + 1))) {}
  int StartState() const override { return 0; }
  double LogProb(int, int) const override { return log_p_; }
  int NextState(int, int) const override { return 0; }

 private:
  double log_p_;
};

// Log-linear step scores over the model output space (lexical units, then the
// terminal symbol): log P + lambda log P_LM for lexical units. The terminal
// gets the LM end-of-sentence term when it is EOS and nothing when it is BLANK.
// `lm` may be null when lambda is 0. Throws ContractViolation for lambda < 0.
Vector FuseLm(const Distribution &step, const LanguageModel *lm, int lm_state,
              double lambda, const SubwordVocab &vocab, bool terminal_is_eos);

// ------------------------------------------------------------ scorers

// Opaque per-hypothesis model state.
struct DecoderState {
  virtual ~DecoderState() = default;
};
using StatePtr = std::shared_ptr<const DecoderState>;

// Left-to-right label scorer (encoder-decoder).
class LabelScorer {
 public:
  virtual ~LabelScorer() = default;
  virtual StatePtr Initial() = 0;
  // Distribution over lexical ∪ {EOS} for the next token and the state after
  // consuming it. `y_prev` is a vocab id (SOS first).
  virtual std::pair<Distribution, StatePtr> Step(const StatePtr &state,
                                                 int y_prev,
                                                 std::span<const int> valid) = 0;
};

// Frame-synchronous transducer scorer.
class TransducerScorer {
 public:
  virtual ~TransducerScorer() = default;
  virtual int NumFrames() const = 0;
  // Predictor state after appending `y_prev` to the history in `prev`
  // (null prev = empty history, y_prev = SOS). `valid` is the tree valid set
  // for the new history.
  virtual StatePtr Predict(const StatePtr &prev, int y_prev,
                           std::span<const int> valid) = 0;
  // Distribution over lexical ∪ {BLANK}.
  virtual Distribution Joint(int frame, const StatePtr &pred) = 0;
};

// Scorers backed by the toy models. Each owns an inference tape for one
// utterance. With `biasing` false the pointer and deep-biasing paths are not
// evaluated at all.
std::unique_ptr<LabelScorer> MakeAedScorer(const ToyAed &model,
                                           const Matrix &features,
                                           bool biasing);
std::unique_ptr<TransducerScorer> MakeRnntScorer(const ToyRnnt &model,
                                                 const Matrix &features,
                                                 bool biasing);

// ------------------------------------------------------------ beam search

struct DecodeConfig {
  int beam = 8;
  double lm_weight = 0.0;
  int max_symbols_per_frame = 3;
  int max_output_len = 40;
};

struct Hypothesis {
  TokenSeq tokens;
  double log_score = 0.0;
  StatePtr model_state;
  TreeState tree_state = TreeState::Root();
  int lm_state = 0;
  // AED: ended with EOS (false when the length limit stopped it).
  bool complete = true;
};

// Ranked best-first; equal scores are ordered by token sequence.
std::vector<Hypothesis> BeamSearchAed(LabelScorer &scorer,
                                      const SubwordVocab &vocab,
                                      const PrefixTree *tree,
                                      const DecodeConfig &config,
                                      const LanguageModel *lm = nullptr);

// Time-synchronous search: per frame up to max_symbols_per_frame labels, then
// a blank. Hypotheses with the same label sequence are merged by log-sum-exp.
std::vector<Hypothesis> BeamSearchRnnt(TransducerScorer &scorer,
                                       const SubwordVocab &vocab,
                                       const PrefixTree *tree,
                                       const DecodeConfig &config,
                                       const LanguageModel *lm = nullptr);

// Decodes one utterance with a trained model. A null or empty tree still runs
// the biasing paths (they are inert); `biasing` false skips them.
std::vector<Hypothesis> Decode(const ToyModel &model, const Matrix &features,
                               const PrefixTree *tree,
                               const DecodeConfig &config,
                               const LanguageModel *lm, bool biasing = true);

// Decodes a set of utterances; `trees[i]` belongs to `features[i]`. The
// parallel form spreads utterances over threads; results are identical.
using NbestList = std::vector<Hypothesis>;
std::vector<NbestList> DecodeBatchSerial(
    const ToyModel &model, const std::vector<const Matrix *> &features,
    const std::vector<const PrefixTree *> &trees, const DecodeConfig &config,
    const LanguageModel *lm, bool biasing);
std::vector<NbestList> DecodeBatchParallel(
    const ToyModel &model, const std::vector<const Matrix *> &features,
    const std::vector<const PrefixTree *> &trees, const DecodeConfig &config,
    const LanguageModel *lm, bool biasing);

// Words of a hypothesis; a trailing unfinished word is kept as a word.
std::vector<std::string> HypothesisWords(const SubwordVocab &vocab,
                                         const TokenSeq &tokens);

// "utt_id<TAB>rank<TAB>log_score<TAB>words" lines, rank from 1.
std::string FormatNbest(const std::string &utt_id,
                        const std::vector<Hypothesis> &nbest,
                        const SubwordVocab &vocab);

}  // namespace tcpgen

#endif  // TCPGEN_DECODING_H_
