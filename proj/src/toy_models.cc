// tcpgen/src/toy_models.cc

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

#include "tcpgen/toy_models.h"

#include <cmath>

#include "tcpgen/prng.h"
#include "tcpgen/transducer_loss.h"

namespace tcpgen {

using ad::Tape;
using ad::Var;

ModelFamily ParseFamily(const std::string &s) {
  if (s == "aed") return ModelFamily::kAed;
  if (s == "rnnt") return ModelFamily::kRnnt;
  throw FormatError("unknown model family '" + s + "'");
}

Variant ParseVariant(const std::string &s) {
  if (s == "baseline") return Variant::kBaseline;
  if (s == "db") return Variant::kDeepBiasing;
  if (s == "tcpgen") return Variant::kTcpgen;
  if (s == "tcpgen+db") return Variant::kTcpgenDb;
  throw FormatError("unknown model variant '" + s + "'");
}

std::string ToString(ModelFamily f) {
  return f == ModelFamily::kAed ? "aed" : "rnnt";
}

std::string ToString(Variant v) {
  switch (v) {
    case Variant::kBaseline: return "baseline";
    case Variant::kDeepBiasing: return "db";
    case Variant::kTcpgen: return "tcpgen";
    case Variant::kTcpgenDb: return "tcpgen+db";
  }
  return "?";
}

std::vector<int> ToOutputIndices(const TokenSeq &tokens) { return tokens; }

namespace {

void InitScaled(Matrix *m, Prng *rng, double gain = 1.0) {
  FillGaussian(m, gain / std::sqrt(std::max(1, m->cols())), rng);
}

}  // namespace

// ---------------------------------------------------------------- encoder

RnnEncoder::RnnEncoder(int in_dim, int hidden, bool bidirectional)
    : wx(hidden, in_dim), wh(hidden, hidden), b(hidden, 1) {
  if (bidirectional) {
    wx_bwd = Matrix(hidden, in_dim);
    wh_bwd = Matrix(hidden, hidden);
    b_bwd = Matrix(hidden, 1);
  }
}

void RnnEncoder::Init(Prng *rng) {
  InitScaled(&wx, rng);
  InitScaled(&wh, rng, 0.5);
  b.SetZero();
  if (bidirectional()) {
    InitScaled(&wx_bwd, rng);
    InitScaled(&wh_bwd, rng, 0.5);
    b_bwd.SetZero();
  }
}

void RnnEncoder::AppendParams(const std::string &prefix, ParamList *params) {
  params->push_back({prefix + ".Wx", &wx});
  params->push_back({prefix + ".Wh", &wh});
  params->push_back({prefix + ".b", &b});
  if (bidirectional()) {
    params->push_back({prefix + ".bwd.Wx", &wx_bwd});
    params->push_back({prefix + ".bwd.Wh", &wh_bwd});
    params->push_back({prefix + ".bwd.b", &b_bwd});
  }
}

namespace {

std::vector<Var> RunRecurrence(Tape &t, const Matrix &features,
                               const Matrix &wx, const Matrix &wh,
                               const Matrix &b, bool reverse) {
  const int frames = features.rows();
  std::vector<Var> states(frames);
  Var h;
  for (int i = 0; i < frames; ++i) {
    const int f = reverse ? frames - 1 - i : i;
    auto row = features.Row(f);
    Var x = t.Constant(Vector(row.begin(), row.end()));
    Var pre = ad::Affine(t, wx, b, x);
    if (h.valid()) pre = ad::Add(t, pre, ad::Linear(t, wh, h));
    h = ad::Tanh(t, pre);
    states[f] = h;
  }
  return states;
}

}  // namespace

Var RnnEncoder::Encode(Tape &t, const Matrix &features) const {
  TCPGEN_CHECK(features.cols() == wx.cols());
  if (features.rows() < 1) throw FormatError("encoder: empty feature matrix");
  for (double x : features.data()) {
    if (!std::isfinite(x)) throw FormatError("encoder: non-finite feature");
  }
  std::vector<Var> states = RunRecurrence(t, features, wx, wh, b, false);
  if (bidirectional()) {
    std::vector<Var> bwd =
        RunRecurrence(t, features, wx_bwd, wh_bwd, b_bwd, true);
    for (size_t f = 0; f < states.size(); ++f) {
      states[f] = ad::Concat(t, states[f], bwd[f]);
    }
  }
  return ad::StackRows(t, states);
}

std::vector<Vector> ToyModel::Encode(const Matrix &features) const {
  Tape t;
  Var enc = encoder().Encode(t, features);
  const Vector &v = t.value(enc);
  const int h = t.cols(enc);
  std::vector<Vector> out;
  for (int f = 0; f < t.rows(enc); ++f) {
    out.emplace_back(v.begin() + size_t(f) * h, v.begin() + size_t(f + 1) * h);
  }
  return out;
}

// ---------------------------------------------------------------- AED

ToyAed::ToyAed(const SubwordVocab &vocab, const ModelDims &d, Variant variant)
    : ToyModel(vocab, d, variant),
      enc(d.feat, d.hidden, true),
      att_w(2 * d.hidden, d.hidden),
      att_wy(2 * d.hidden, d.emb),
      dec_wy(d.hidden, d.emb),
      dec_wc(d.hidden, 2 * d.hidden),
      dec_wh(d.hidden, d.hidden),
      dec_b(d.hidden, 1),
      out_w(vocab.NumLexical() + 1, 3 * d.hidden),
      out_b(vocab.NumLexical() + 1, 1),
      emb(vocab.Size(), d.emb) {
  if (UsesDeepBiasing(variant)) db_w = Matrix(vocab.NumLexical() + 1, d.emb);
  if (UsesTcpgen(variant)) {
    tcpgen = TcpgenParams(2 * d.hidden, d.emb, d.hidden, d.att, d.value);
  }
}

ParamList ToyAed::Params() {
  ParamList p;
  enc.AppendParams("aed.enc", &p);
  p.push_back({"aed.att.W", &att_w});
  p.push_back({"aed.att.Wy", &att_wy});
  p.push_back({"aed.dec.Wy", &dec_wy});
  p.push_back({"aed.dec.Wc", &dec_wc});
  p.push_back({"aed.dec.Wh", &dec_wh});
  p.push_back({"aed.dec.b", &dec_b});
  p.push_back({"aed.out.W", &out_w});
  p.push_back({"aed.out.b", &out_b});
  if (UsesDeepBiasing(variant_)) p.push_back({"aed.db.W", &db_w});
  p.push_back({"emb.table", &emb});
  if (UsesTcpgen(variant_)) tcpgen.AppendParams(&p);
  return p;
}

void ToyAed::Init(Prng *rng) {
  enc.Init(rng);
  InitScaled(&att_w, rng);
  InitScaled(&att_wy, rng);
  InitScaled(&dec_wy, rng);
  InitScaled(&dec_wc, rng);
  InitScaled(&dec_wh, rng, 0.5);
  dec_b.SetZero();
  InitScaled(&out_w, rng);
  out_b.SetZero();
  FillGaussian(&emb, 1.0, rng);
  if (UsesDeepBiasing(variant_)) InitScaled(&db_w, rng, 0.1);
  if (UsesTcpgen(variant_)) tcpgen.Init(rng);
}

ToyAed::Context ToyAed::Begin(Tape &t, const Matrix &features,
                              bool biasing,
                              const DropoutSpec &dropout) const {
  Context ctx;
  ctx.dropout = dropout;
  ctx.enc = ad::Dropout(t, enc.Encode(t, features), dropout.rate, dropout.rng);
  ctx.biasing = biasing && variant_ != Variant::kBaseline;
  if (ctx.biasing && UsesTcpgen(variant_)) {
    ctx.mem = graph::BuildPtrMemory(t, tcpgen, emb, vocab_.NumLexical());
  }
  return ctx;
}

ToyAed::StepOut ToyAed::Step(Tape &t, const Context &ctx, Var h_prev,
                             int y_prev, std::span<const int> valid) const {
  if (!h_prev.valid()) h_prev = t.Constant(Vector(dims_.hidden, 0.0));
  Var y = ad::Dropout(t, ad::ParamRow(t, emb, y_prev), ctx.dropout.rate,
                      ctx.dropout.rng);
  Var att_q =
      ad::Add(t, ad::Linear(t, att_w, h_prev), ad::Linear(t, att_wy, y));
  Var alpha = ad::Softmax(t, ad::MatVec(t, ctx.enc, att_q));
  Var c = ad::MatTVec(t, ctx.enc, alpha);

  Var pre = ad::Add(t, ad::Linear(t, dec_wy, y), ad::Linear(t, dec_wc, c));
  pre = ad::Add(t, pre, ad::Affine(t, dec_wh, dec_b, h_prev));
  Var h = ad::Tanh(t, pre);

  Var logits = ad::Affine(t, out_w, out_b, ad::Concat(t, h, c));
  if (ctx.biasing && UsesDeepBiasing(variant_) && !valid.empty()) {
    Var h_db = graph::DeepBiasingVector(t, emb, valid);
    logits = ad::Add(t, logits, ad::Linear(t, db_w, h_db));
  }
  StepOut out;
  out.h_dec = h;
  out.dist = ad::Softmax(t, logits);
  if (ctx.biasing && UsesTcpgen(variant_)) {
    Var q = graph::Query(t, tcpgen, c, y);
    graph::PtrVars ptr = graph::PtrAttention(t, tcpgen, ctx.mem, q, valid);
    out.p_ptr = ptr.p_ptr;
    out.p_gen = graph::GenerationProb(t, tcpgen, h, ptr.h_ptr);
    out.dist = graph::InterpolateAed(t, out.dist, ptr.p_ptr, out.p_gen);
  }
  return out;
}

Var ToyAed::Loss(Tape &t, const Matrix &features, const TokenSeq &target,
                 const PrefixTree *tree, const DropoutSpec &dropout) const {
  Context ctx = Begin(t, features, tree != nullptr, dropout);
  std::vector<Var> terms;
  Var h;
  int y_prev = vocab_.Sos();
  TreeState state = TreeState::Root();
  for (size_t i = 0; i <= target.size(); ++i) {
    std::vector<int> valid;
    if (tree) valid = tree->ValidSet(state);
    StepOut step = Step(t, ctx, h, y_prev, valid);
    const int label = i < target.size() ? target[i] : TerminalIndex();
    terms.push_back(ad::NegLogPick(t, step.dist, label));
    if (i == target.size()) break;
    h = step.h_dec;
    y_prev = target[i];
    if (tree) state = tree->Advance(vocab_, state, target[i]);
  }
  return ad::SumScalars(t, terms);
}

// ---------------------------------------------------------------- RNN-T

ToyRnnt::ToyRnnt(const SubwordVocab &vocab, const ModelDims &d,
                 Variant variant)
    : ToyModel(vocab, d, variant),
      enc(d.feat, d.hidden),
      pred_wy(d.hidden, d.emb),
      pred_wh(d.hidden, d.hidden),
      pred_b(d.hidden, 1),
      joint_wp(d.hidden, d.hidden),
      joint_we(d.hidden, d.hidden),
      joint_b(d.hidden, 1),
      joint_w2(vocab.NumLexical() + 1, d.hidden),
      joint_b2(vocab.NumLexical() + 1, 1),
      emb(vocab.Size(), d.emb) {
  if (variant == Variant::kDeepBiasing) db_w = Matrix(d.hidden, d.emb);
  if (variant == Variant::kTcpgenDb) db_w = Matrix(d.hidden, d.value);
  if (UsesTcpgen(variant)) {
    tcpgen = TcpgenParams(d.hidden, d.emb, d.hidden, d.att, d.value);
  }
}

ParamList ToyRnnt::Params() {
  ParamList p;
  enc.AppendParams("rnnt.enc", &p);
  p.push_back({"rnnt.pred.Wy", &pred_wy});
  p.push_back({"rnnt.pred.Wh", &pred_wh});
  p.push_back({"rnnt.pred.b", &pred_b});
  p.push_back({"rnnt.joint.Wp", &joint_wp});
  p.push_back({"rnnt.joint.We", &joint_we});
  p.push_back({"rnnt.joint.b", &joint_b});
  p.push_back({"rnnt.joint.W2", &joint_w2});
  p.push_back({"rnnt.joint.b2", &joint_b2});
  if (UsesDeepBiasing(variant_)) p.push_back({"rnnt.db.W", &db_w});
  p.push_back({"emb.table", &emb});
  if (UsesTcpgen(variant_)) tcpgen.AppendParams(&p);
  return p;
}

void ToyRnnt::Init(Prng *rng) {
  enc.Init(rng);
  InitScaled(&pred_wy, rng);
  InitScaled(&pred_wh, rng, 0.5);
  pred_b.SetZero();
  InitScaled(&joint_wp, rng);
  InitScaled(&joint_we, rng);
  joint_b.SetZero();
  InitScaled(&joint_w2, rng);
  joint_b2.SetZero();
  FillGaussian(&emb, 1.0, rng);
  if (UsesDeepBiasing(variant_)) InitScaled(&db_w, rng, 0.1);
  if (UsesTcpgen(variant_)) tcpgen.Init(rng);
}

ToyRnnt::Context ToyRnnt::Begin(Tape &t, const Matrix &features,
                                bool biasing,
                              const DropoutSpec &dropout) const {
  Context ctx;
  ctx.dropout = dropout;
  ctx.enc = ad::Dropout(t, enc.Encode(t, features), dropout.rate, dropout.rng);
  ctx.biasing = biasing && variant_ != Variant::kBaseline;
  const bool ptr = ctx.biasing && UsesTcpgen(variant_);
  if (ptr) ctx.mem = graph::BuildPtrMemory(t, tcpgen, emb, vocab_.NumLexical());
  const int frames = t.rows(ctx.enc);
  std::vector<int> row(1);
  for (int f = 0; f < frames; ++f) {
    row[0] = f;
    Var h = ad::GatherRows(t, ctx.enc, row);
    ctx.enc_proj.push_back(ad::Linear(t, joint_we, h));
    if (ptr) ctx.enc_query.push_back(ad::Linear(t, tcpgen.wq_c, h));
  }
  return ctx;
}

ToyRnnt::PredOut ToyRnnt::Predict(Tape &t, const Context &ctx, Var h_prev,
                                  int y_prev, std::vector<int> valid) const {
  Var y = ad::Dropout(t, ad::ParamRow(t, emb, y_prev), ctx.dropout.rate,
                      ctx.dropout.rng);
  Var pre = ad::Affine(t, pred_wy, pred_b, y);
  if (h_prev.valid()) pre = ad::Add(t, pre, ad::Linear(t, pred_wh, h_prev));
  PredOut out;
  out.h_pred = ad::Tanh(t, pre);
  out.pred_proj = ad::Affine(t, joint_wp, joint_b, out.h_pred);
  if (ctx.biasing && UsesTcpgen(variant_)) {
    out.query_y = ad::Linear(t, tcpgen.wq_y, y);
  }
  if (ctx.biasing && variant_ == Variant::kDeepBiasing && !valid.empty()) {
    out.db_proj =
        ad::Linear(t, db_w, graph::DeepBiasingVector(t, emb, valid));
  }
  out.valid = std::move(valid);
  return out;
}

ToyRnnt::JointOut ToyRnnt::Joint(Tape &t, const Context &ctx, int frame,
                                 const PredOut &pred) const {
  const bool ptr_on = ctx.biasing && UsesTcpgen(variant_);
  Var z = ad::Add(t, ctx.enc_proj[frame], pred.pred_proj);
  graph::PtrVars ptr;
  if (ptr_on) {
    Var q = ad::Add(t, ctx.enc_query[frame], pred.query_y);
    ptr = graph::PtrAttention(t, tcpgen, ctx.mem, q, pred.valid);
    if (variant_ == Variant::kTcpgenDb && !pred.valid.empty()) {
      z = ad::Add(t, z, ad::Linear(t, db_w, ptr.h_ptr_lexical));
    }
  }
  if (pred.db_proj.valid()) z = ad::Add(t, z, pred.db_proj);
  Var hj = ad::Tanh(t, z);
  JointOut out;
  out.dist = ad::Softmax(t, ad::Affine(t, joint_w2, joint_b2, hj));
  if (ptr_on) {
    out.p_ptr = ptr.p_ptr;
    out.p_gen = graph::GenerationProb(t, tcpgen, hj, ptr.h_ptr);
    out.dist = graph::InterpolateRnnt(t, out.dist, ptr.p_ptr, out.p_gen);
  }
  return out;
}

Var ToyRnnt::Loss(Tape &t, const Matrix &features, const TokenSeq &target,
                  const PrefixTree *tree, const DropoutSpec &dropout) const {
  Context ctx = Begin(t, features, tree != nullptr, dropout);
  const int frames = t.rows(ctx.enc);
  const int U = static_cast<int>(target.size());

  std::vector<PredOut> preds;
  preds.reserve(U + 1);
  Var h;
  TreeState state = TreeState::Root();
  for (int u = 0; u <= U; ++u) {
    const int y_prev = u == 0 ? vocab_.Sos() : target[u - 1];
    if (tree && u > 0) state = tree->Advance(vocab_, state, target[u - 1]);
    std::vector<int> valid;
    if (tree) valid = tree->ValidSet(state);
    preds.push_back(Predict(t, ctx, h, y_prev, std::move(valid)));
    h = preds.back().h_pred;
  }

  std::vector<std::vector<Var>> cells(frames, std::vector<Var>(U + 1));
  for (int f = 0; f < frames; ++f) {
    for (int u = 0; u <= U; ++u) cells[f][u] = Joint(t, ctx, f, preds[u]).dist;
  }
  return graph::TransducerLoss(t, cells, ToOutputIndices(target),
                               TerminalIndex());
}

std::unique_ptr<ToyModel> MakeModel(ModelFamily family, Variant variant,
                                    const SubwordVocab &vocab,
                                    const ModelDims &dims) {
  if (family == ModelFamily::kAed) {
    return std::make_unique<ToyAed>(vocab, dims, variant);
  }
  return std::make_unique<ToyRnnt>(vocab, dims, variant);
}

}  // namespace tcpgen
