// tcpgen/include/tcpgen/toy_models.h

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

#ifndef TCPGEN_TOY_MODELS_H_
#define TCPGEN_TOY_MODELS_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tcpgen/autodiff.h"
#include "tcpgen/biasing_tree.h"
#include "tcpgen/lexicon.h"
#include "tcpgen/tcpgen_core.h"

namespace tcpgen {

enum class ModelFamily { kAed, kRnnt };
enum class Variant { kBaseline, kDeepBiasing, kTcpgen, kTcpgenDb };

ModelFamily ParseFamily(const std::string &s);
Variant ParseVariant(const std::string &s);
std::string ToString(ModelFamily f);
std::string ToString(Variant v);
inline bool UsesTcpgen(Variant v) {
  return v == Variant::kTcpgen || v == Variant::kTcpgenDb;
}
inline bool UsesDeepBiasing(Variant v) {
  return v == Variant::kDeepBiasing || v == Variant::kTcpgenDb;
}

struct ModelDims {
  int feat = 16;
  int hidden = 32;
  int emb = 32;
  int att = 32;
  int value = 32;
};

// Single-layer tanh recurrence h_t = tanh(Wx x_t + Wh h_{t-1} + b), h_0 = 0.
// When bidirectional, a second recurrence runs from the last frame back and
// each output row is [h_fwd_t; h_bwd_t].
struct RnnEncoder {
  Matrix wx, wh, b;
  Matrix wx_bwd, wh_bwd, b_bwd;  // empty unless bidirectional

  RnnEncoder() = default;
  RnnEncoder(int in_dim, int hidden, bool bidirectional = false);
  bool bidirectional() const { return wx_bwd.rows() > 0; }
  int OutDim() const { return bidirectional() ? 2 * wx.rows() : wx.rows(); }
  void Init(Prng *rng);
  void AppendParams(const std::string &prefix, ParamList *params);
  // T x OutDim() node. Throws FormatError on non-finite features.
  ad::Var Encode(ad::Tape &t, const Matrix &features) const;
};

// Training-time dropout on the encoder states and the previous-token
// embedding. Inactive when `rng` is null.
struct DropoutSpec {
  double rate = 0.0;
  Prng *rng = nullptr;
};

// Common surface of the two model families used by training and checkpoints.
class ToyModel {
 public:
  ToyModel(const SubwordVocab &vocab, const ModelDims &dims, Variant variant)
      : vocab_(vocab), dims_(dims), variant_(variant) {}
  virtual ~ToyModel() = default;

  virtual ModelFamily family() const = 0;
  virtual ParamList Params() = 0;
  virtual void Init(Prng *rng) = 0;
  // Per-utterance loss (sum over steps) recorded on `t`. The tree state for
  // each position follows the reference prefix. `tree` may be null, in which
  // case the biasing paths are skipped and the model acts as its baseline.
  virtual ad::Var Loss(ad::Tape &t, const Matrix &features,
                       const TokenSeq &target, const PrefixTree *tree,
                       const DropoutSpec &dropout = {}) const = 0;

  const SubwordVocab &vocab() const { return vocab_; }
  const ModelDims &dims() const { return dims_; }
  Variant variant() const { return variant_; }
  // Size of the output distribution: lexical units plus EOS or BLANK.
  int OutputSize() const { return vocab_.NumLexical() + 1; }
  int TerminalIndex() const { return vocab_.NumLexical(); }

  // Per-frame encoder states, computed without recording gradients.
  std::vector<Vector> Encode(const Matrix &features) const;
  virtual const RnnEncoder &encoder() const = 0;

 protected:
  SubwordVocab vocab_;
  ModelDims dims_;
  Variant variant_;
};

// Attention-based encoder-decoder over a bidirectional encoder.
//   c_i     = sum_t softmax_t(h_enc_t . (Wa h_dec_{i-1} + Way y_{i-1})) h_enc_t
//   h_dec_i = tanh(Wy y_{i-1} + Wc c_i + Wh h_dec_{i-1} + b)
//   P_mdl   = softmax(Wo [h_dec_i; c_i] + bo (+ Wdb h_db))
class ToyAed : public ToyModel {
 public:
  ToyAed(const SubwordVocab &vocab, const ModelDims &dims, Variant variant);

  ModelFamily family() const override { return ModelFamily::kAed; }
  ParamList Params() override;
  void Init(Prng *rng) override;
  ad::Var Loss(ad::Tape &t, const Matrix &features, const TokenSeq &target,
               const PrefixTree *tree,
               const DropoutSpec &dropout = {}) const override;
  const RnnEncoder &encoder() const override { return enc; }

  // Per-utterance nodes shared by all decoder steps.
  struct Context {
    ad::Var enc;
    graph::PtrMemory mem;
    bool biasing = false;
    DropoutSpec dropout;
  };
  struct StepOut {
    ad::Var dist;   // OutputSize() entries, EOS last
    ad::Var h_dec;
    ad::Var p_ptr;  // set when the pointer ran
    ad::Var p_gen;
  };

  Context Begin(ad::Tape &t, const Matrix &features, bool biasing,
                const DropoutSpec &dropout = {}) const;
  // `h_prev` invalid means the zero initial state. `y_prev` is a vocab id
  // (SOS at the first step).
  StepOut Step(ad::Tape &t, const Context &ctx, ad::Var h_prev, int y_prev,
               std::span<const int> valid) const;

  RnnEncoder enc;
  Matrix att_w, att_wy;
  Matrix dec_wy, dec_wc, dec_wh, dec_b;
  Matrix out_w, out_b;
  Matrix db_w;
  Matrix emb;
  TcpgenParams tcpgen;
};

// Transducer with a recurrent predictor and a one-hidden-layer joint network.
//   h_joint = tanh(Wp h_pred_i + We h_enc_t + bj (+ Wdb h_db | Wdb h_ptr))
//   P_mdl   = softmax(W2 h_joint + b2)
class ToyRnnt : public ToyModel {
 public:
  ToyRnnt(const SubwordVocab &vocab, const ModelDims &dims, Variant variant);

  ModelFamily family() const override { return ModelFamily::kRnnt; }
  ParamList Params() override;
  void Init(Prng *rng) override;
  ad::Var Loss(ad::Tape &t, const Matrix &features, const TokenSeq &target,
               const PrefixTree *tree,
               const DropoutSpec &dropout = {}) const override;
  const RnnEncoder &encoder() const override { return enc; }

  struct Context {
    ad::Var enc;
    std::vector<ad::Var> enc_proj;  // We h_enc_t
    std::vector<ad::Var> enc_query; // Wq_c h_enc_t
    graph::PtrMemory mem;
    bool biasing = false;
    DropoutSpec dropout;
  };
  // Predictor output for one label history, with everything the joint needs
  // that does not depend on the frame.
  struct PredOut {
    ad::Var h_pred;
    ad::Var pred_proj;  // Wp h_pred + bj
    ad::Var query_y;    // Wq_y y_prev
    ad::Var db_proj;    // Wdb h_db (deep biasing only)
    std::vector<int> valid;
  };
  struct JointOut {
    ad::Var dist;  // OutputSize() entries, BLANK last
    ad::Var p_ptr;
    ad::Var p_gen;
  };

  Context Begin(ad::Tape &t, const Matrix &features, bool biasing,
                const DropoutSpec &dropout = {}) const;
  PredOut Predict(ad::Tape &t, const Context &ctx, ad::Var h_prev, int y_prev,
                  std::vector<int> valid) const;
  JointOut Joint(ad::Tape &t, const Context &ctx, int frame,
                 const PredOut &pred) const;

  RnnEncoder enc;
  Matrix pred_wy, pred_wh, pred_b;
  Matrix joint_wp, joint_we, joint_b;
  Matrix joint_w2, joint_b2;
  Matrix db_w;
  Matrix emb;
  TcpgenParams tcpgen;
};

std::unique_ptr<ToyModel> MakeModel(ModelFamily family, Variant variant,
                                    const SubwordVocab &vocab,
                                    const ModelDims &dims);

// Output-space index of a target token: lexical ids map to themselves.
std::vector<int> ToOutputIndices(const TokenSeq &tokens);

}  // namespace tcpgen

#endif  // TCPGEN_TOY_MODELS_H_
