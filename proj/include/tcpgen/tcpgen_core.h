// tcpgen/include/tcpgen/tcpgen_core.h

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

#ifndef TCPGEN_TCPGEN_CORE_H_
#define TCPGEN_TCPGEN_CORE_H_

#include <span>
#include <utility>
#include <vector>

#include "tcpgen/autodiff.h"
#include "tcpgen/matrix.h"

namespace tcpgen {

class Prng;

// Generation probabilities are kept inside [kGenClamp, 1 - kGenClamp].
inline constexpr double kGenClamp = 1e-7;

// Probability vector over an output space of L lexical units plus one
// non-lexical symbol stored last: EOS for the encoder-decoder, BLANK for the
// transducer.
struct Distribution {
  Vector p;

  int NumLexical() const { return static_cast<int>(p.size()) - 1; }
  double Sum() const;
  // All entries >= 0 and the sum within `tol` of one.
  bool IsValid(double tol = 1e-9) const;
};

// Trainable weights of the tree-constrained pointer.
struct TcpgenParams {
  Matrix wq_c;     // att x context (context vector or encoder state)
  Matrix wq_y;     // att x emb
  Matrix wk;       // att x emb
  Matrix wv;       // value x emb
  Matrix wgen;     // 1 x (hidden + value)
  Matrix ool_emb;  // 1 x emb

  TcpgenParams() = default;
  TcpgenParams(int context_dim, int emb_dim, int hidden_dim, int att_dim,
               int value_dim);

  int AttentionDim() const { return wq_c.rows(); }
  int ValueDim() const { return wv.rows(); }
  int EmbDim() const { return wk.cols(); }

  void Init(Prng *rng);
  // Appends the "tcpgen.*" checkpoint tensors.
  void AppendParams(ParamList *params);
  // Throws ContractViolation if shapes disagree or an entry is not finite.
  void Validate() const;
};

// One pointer evaluation. p_ptr has L + 1 entries with OOL last.
struct PtrStep {
  Vector p_ptr;
  Vector h_ptr;
  double p_gen = 0.0;
  double p_gen_scaled = 0.0;

  double ool() const { return p_ptr.back(); }
};

// q = Wq_c c + Wq_y y_prev
Vector QueryAed(const TcpgenParams &params, std::span<const double> context,
                std::span<const double> prev_emb);
// Same projection with the encoder state of frame t in place of the context.
Vector QueryRnnt(const TcpgenParams &params, std::span<const double> enc_state,
                 std::span<const double> prev_emb);

// Scaled dot-product attention restricted to valid ∪ {OOL}. Keys and values
// are Wk/Wv projections of the embedding rows; OOL uses ool_emb. Entries
// outside the support are exactly zero because they never enter the softmax.
// `valid` must hold distinct lexical ids below `num_lexical`.
PtrStep PtrAttention(const TcpgenParams &params, std::span<const double> query,
                     std::span<const int> valid, const Matrix &embeddings,
                     int num_lexical);

// Returns (p_gen, p_gen_scaled) with p_gen = sigmoid(Wgen [hidden; h_ptr])
// clamped to [kGenClamp, 1 - kGenClamp] and p_gen_scaled = p_gen (1 - P(OOL)).
std::pair<double, double> GenerationProb(const TcpgenParams &params,
                                         std::span<const double> hidden,
                                         const PtrStep &ptr);

// P(y) = P_mdl(y) (1 - p_gen_scaled) + P_ptr(y) p_gen. EOS takes no pointer
// mass.
Distribution InterpolateAed(const Distribution &p_mdl, const PtrStep &ptr);

// Blank keeps P_mdl(blank); lexical units get
//   P_mdl(z) (1 - p_gen_scaled) + P_ptr(z) p_gen (1 - P_mdl(blank)).
Distribution InterpolateRnnt(const Distribution &p_mdl, const PtrStep &ptr);

// Sum of the embedding rows listed in `valid`.
Vector DeepBiasingVector(const Matrix &embeddings, std::span<const int> valid);

// Differentiable counterparts used by the models. They compute the same values
// as the functions above and record backward closures on the tape.
namespace graph {

// Projected keys and values for every embedding row plus one trailing OOL row,
// built once per tape.
struct PtrMemory {
  ad::Var keys;
  ad::Var values;
  int ool_row = 0;
  int num_lexical = 0;
};

struct PtrVars {
  ad::Var p_ptr;         // dense, L + 1 entries, OOL last
  ad::Var h_ptr;         // sum over valid ∪ {OOL}
  ad::Var h_ptr_lexical; // same sum with the OOL term left out
};

PtrMemory BuildPtrMemory(ad::Tape &t, const TcpgenParams &params,
                         const Matrix &embeddings, int num_lexical);
ad::Var Query(ad::Tape &t, const TcpgenParams &params, ad::Var context,
              ad::Var prev_emb);
PtrVars PtrAttention(ad::Tape &t, const TcpgenParams &params,
                     const PtrMemory &mem, ad::Var query,
                     std::span<const int> valid);
// Clamped unscaled p_gen as a scalar node.
ad::Var GenerationProb(ad::Tape &t, const TcpgenParams &params, ad::Var hidden,
                       ad::Var h_ptr);
ad::Var InterpolateAed(ad::Tape &t, ad::Var p_mdl, ad::Var p_ptr,
                       ad::Var p_gen);
ad::Var InterpolateRnnt(ad::Tape &t, ad::Var p_mdl, ad::Var p_ptr,
                        ad::Var p_gen);
ad::Var DeepBiasingVector(ad::Tape &t, const Matrix &embeddings,
                          std::span<const int> valid);

}  // namespace graph
}  // namespace tcpgen

#endif  // TCPGEN_TCPGEN_CORE_H_
