// tcpgen/src/tcpgen_core.cc

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

#include "tcpgen/tcpgen_core.h"

#include <algorithm>
#include <cmath>

#include "tcpgen/prng.h"

namespace tcpgen {

double Distribution::Sum() const {
  double s = 0.0;
  for (double x : p) s += x;
  return s;
}

bool Distribution::IsValid(double tol) const {
  for (double x : p) {
    if (!(x >= 0.0)) return false;
  }
  return std::abs(Sum() - 1.0) <= tol;
}

TcpgenParams::TcpgenParams(int context_dim, int emb_dim, int hidden_dim,
                           int att_dim, int value_dim)
    : wq_c(att_dim, context_dim),
      wq_y(att_dim, emb_dim),
      wk(att_dim, emb_dim),
      wv(value_dim, emb_dim),
      wgen(1, hidden_dim + value_dim),
      ool_emb(1, emb_dim) {
  TCPGEN_CHECK(att_dim > 0 && value_dim > 0);
}

void TcpgenParams::Init(Prng *rng) {
  FillGaussian(&wq_c, 1.0 / std::sqrt(wq_c.cols()), rng);
  FillGaussian(&wq_y, 1.0 / std::sqrt(wq_y.cols()), rng);
  FillGaussian(&wk, 1.0 / std::sqrt(wk.cols()), rng);
  FillGaussian(&wv, 1.0 / std::sqrt(wv.cols()), rng);
  FillGaussian(&wgen, 1.0 / std::sqrt(wgen.cols()), rng);
  FillGaussian(&ool_emb, 1.0, rng);
}

void TcpgenParams::AppendParams(ParamList *params) {
  params->push_back({"tcpgen.Wq_c", &wq_c});
  params->push_back({"tcpgen.Wq_y", &wq_y});
  params->push_back({"tcpgen.Wk", &wk});
  params->push_back({"tcpgen.Wv", &wv});
  params->push_back({"tcpgen.Wgen", &wgen});
  params->push_back({"tcpgen.ool_emb", &ool_emb});
}

void TcpgenParams::Validate() const {
  const int d = AttentionDim();
  const int e = EmbDim();
  if (d <= 0 || wq_y.rows() != d || wk.rows() != d || wq_y.cols() != e ||
      wv.cols() != e || ool_emb.rows() != 1 || ool_emb.cols() != e ||
      wgen.rows() != 1 || wgen.cols() <= ValueDim()) {
    throw ContractViolation("tcpgen parameters have inconsistent shapes");
  }
  for (const Matrix *m : {&wq_c, &wq_y, &wk, &wv, &wgen, &ool_emb}) {
    for (double x : m->data()) {
      if (!std::isfinite(x)) {
        throw ContractViolation("tcpgen parameters contain non-finite values");
      }
    }
  }
}

Vector QueryAed(const TcpgenParams &params, std::span<const double> context,
                std::span<const double> prev_emb) {
  Vector q(params.AttentionDim(), 0.0);
  kernels::MatVecAdd(params.wq_c, context, q);
  kernels::MatVecAdd(params.wq_y, prev_emb, q);
  return q;
}

Vector QueryRnnt(const TcpgenParams &params, std::span<const double> enc_state,
                 std::span<const double> prev_emb) {
  return QueryAed(params, enc_state, prev_emb);
}

PtrStep PtrAttention(const TcpgenParams &params, std::span<const double> query,
                     std::span<const int> valid, const Matrix &embeddings,
                     int num_lexical) {
  TCPGEN_CHECK(query.size() == static_cast<size_t>(params.AttentionDim()));
  const double inv_sqrt_d = 1.0 / std::sqrt(params.AttentionDim());
  const size_t n = valid.size() + 1;
  auto row_of = [&](size_t i) {
    return i + 1 < n ? embeddings.Row(valid[i]) : params.ool_emb.Row(0);
  };

  Vector logits(n);
  Vector key(params.AttentionDim());
  for (size_t i = 0; i < n; ++i) {
    if (i + 1 < n) TCPGEN_CHECK(valid[i] >= 0 && valid[i] < num_lexical);
    kernels::MatVec(params.wk, row_of(i), key);
    logits[i] = kernels::Dot(query, key) * inv_sqrt_d;
  }
  kernels::Softmax(logits);

  PtrStep step;
  step.p_ptr.assign(num_lexical + 1, 0.0);
  step.h_ptr.assign(params.ValueDim(), 0.0);
  Vector value(params.ValueDim());
  for (size_t i = 0; i < n; ++i) {
    int slot = i + 1 < n ? valid[i] : num_lexical;
    step.p_ptr[slot] += logits[i];
    kernels::MatVec(params.wv, row_of(i), value);
    kernels::Axpy(logits[i], value, step.h_ptr);
  }
  return step;
}

std::pair<double, double> GenerationProb(const TcpgenParams &params,
                                         std::span<const double> hidden,
                                         const PtrStep &ptr) {
  TCPGEN_CHECK(hidden.size() + ptr.h_ptr.size() ==
               static_cast<size_t>(params.wgen.cols()));
  auto w = params.wgen.Row(0);
  double z = kernels::Dot(w.first(hidden.size()), hidden) +
             kernels::Dot(w.subspan(hidden.size()), ptr.h_ptr);
  double g = std::clamp(kernels::Sigmoid(z), kGenClamp, 1.0 - kGenClamp);
  return {g, g * (1.0 - ptr.ool())};
}

namespace {

// out[j] = m[j] (1 - g (1 - o)) + r[j] g for lexical j; out[L] = m[L] (1 - ĝ).
void InterpolateAedRaw(std::span<const double> m, std::span<const double> r,
                       double g, std::span<double> out) {
  const size_t n = m.size();
  const double keep = 1.0 - g * (1.0 - r[n - 1]);
  for (size_t j = 0; j + 1 < n; ++j) out[j] = m[j] * keep + r[j] * g;
  out[n - 1] = m[n - 1] * keep;
}

// out[L] = m[L]; out[j] = m[j] (1 - ĝ) + r[j] g (1 - m[L]).
void InterpolateRnntRaw(std::span<const double> m, std::span<const double> r,
                        double g, std::span<double> out) {
  const size_t n = m.size();
  const double keep = 1.0 - g * (1.0 - r[n - 1]);
  const double s = 1.0 - m[n - 1];
  for (size_t j = 0; j + 1 < n; ++j) out[j] = m[j] * keep + r[j] * g * s;
  out[n - 1] = m[n - 1];
}

}  // namespace

Distribution InterpolateAed(const Distribution &p_mdl, const PtrStep &ptr) {
  TCPGEN_CHECK(p_mdl.p.size() == ptr.p_ptr.size());
  Distribution out{Vector(p_mdl.p.size())};
  InterpolateAedRaw(p_mdl.p, ptr.p_ptr, ptr.p_gen, out.p);
  return out;
}

Distribution InterpolateRnnt(const Distribution &p_mdl, const PtrStep &ptr) {
  TCPGEN_CHECK(p_mdl.p.size() == ptr.p_ptr.size());
  Distribution out{Vector(p_mdl.p.size())};
  InterpolateRnntRaw(p_mdl.p, ptr.p_ptr, ptr.p_gen, out.p);
  return out;
}

Vector DeepBiasingVector(const Matrix &embeddings, std::span<const int> valid) {
  Vector out(embeddings.cols(), 0.0);
  for (int j : valid) kernels::Axpy(1.0, embeddings.Row(j), out);
  return out;
}

namespace graph {

using ad::Tape;
using ad::Var;

PtrMemory BuildPtrMemory(Tape &t, const TcpgenParams &params,
                         const Matrix &embeddings, int num_lexical) {
  Var table = ad::ParamStack(t, embeddings, params.ool_emb);
  PtrMemory mem;
  mem.keys = ad::LinearRows(t, params.wk, table);
  mem.values = ad::LinearRows(t, params.wv, table);
  mem.ool_row = embeddings.rows();
  mem.num_lexical = num_lexical;
  return mem;
}

Var Query(Tape &t, const TcpgenParams &params, Var context, Var prev_emb) {
  return ad::Add(t, ad::Linear(t, params.wq_c, context),
                 ad::Linear(t, params.wq_y, prev_emb));
}

PtrVars PtrAttention(Tape &t, const TcpgenParams &params, const PtrMemory &mem,
                     Var query, std::span<const int> valid) {
  std::vector<int> rows(valid.begin(), valid.end());
  std::vector<int> slots(valid.begin(), valid.end());
  for (int j : valid) TCPGEN_CHECK(j >= 0 && j < mem.num_lexical);
  rows.push_back(mem.ool_row);
  slots.push_back(mem.num_lexical);

  Var logits = ad::Scale(t, ad::GatherMatVec(t, mem.keys, rows, query),
                         1.0 / std::sqrt(params.AttentionDim()));
  Var p = ad::Softmax(t, logits);

  // h_ptr splits into the lexical part and the OOL row's share.
  PtrVars out;
  out.p_ptr = ad::Scatter(t, p, slots, mem.num_lexical + 1);
  out.h_ptr_lexical = ad::GatherMatTVec(t, mem.values, valid, p);
  const int last = static_cast<int>(valid.size());
  Var p_ool = ad::GatherRows(t, p, std::span<const int>(&last, 1));
  out.h_ptr = ad::Add(t, out.h_ptr_lexical,
                      ad::GatherMatTVec(t, mem.values,
                                        std::span<const int>(&mem.ool_row, 1), p_ool));
  return out;
}

Var GenerationProb(Tape &t, const TcpgenParams &params, Var hidden,
                   Var h_ptr) {
  Var z = ad::Linear(t, params.wgen, ad::Concat(t, hidden, h_ptr));
  return ad::Clamp(t, ad::Sigmoid(t, z), kGenClamp, 1.0 - kGenClamp);
}

Var InterpolateAed(Tape &t, Var p_mdl, Var p_ptr, Var p_gen) {
  const size_t n = t.size(p_mdl);
  TCPGEN_CHECK(t.size(p_ptr) == n && t.size(p_gen) == 1);
  Vector out_v(n);
  InterpolateAedRaw(t.value(p_mdl), t.value(p_ptr), t.scalar(p_gen), out_v);
  Var out{static_cast<int>(t.num_nodes())};
  return t.Push(std::move(out_v), static_cast<int>(n), 1,
                [p_mdl, p_ptr, p_gen, n, out](Tape &t) {
                  const Vector &gy = t.grad(out);
                  const Vector &m = t.value(p_mdl);
                  const Vector &r = t.value(p_ptr);
                  const double g = t.scalar(p_gen);
                  const double o = r[n - 1];
                  const double keep = 1.0 - g * (1.0 - o);
                  Vector &gm = t.grad(p_mdl);
                  Vector &gr = t.grad(p_ptr);
                  double dg = 0.0;
                  double d_ool = 0.0;
                  for (size_t j = 0; j < n; ++j) {
                    gm[j] += gy[j] * keep;
                    dg -= gy[j] * m[j] * (1.0 - o);
                    d_ool += gy[j] * m[j] * g;
                    if (j + 1 < n) {
                      gr[j] += gy[j] * g;
                      dg += gy[j] * r[j];
                    }
                  }
                  gr[n - 1] += d_ool;
                  t.grad(p_gen)[0] += dg;
                });
}

Var InterpolateRnnt(Tape &t, Var p_mdl, Var p_ptr, Var p_gen) {
  const size_t n = t.size(p_mdl);
  TCPGEN_CHECK(t.size(p_ptr) == n && t.size(p_gen) == 1);
  Vector out_v(n);
  InterpolateRnntRaw(t.value(p_mdl), t.value(p_ptr), t.scalar(p_gen), out_v);
  Var out{static_cast<int>(t.num_nodes())};
  return t.Push(std::move(out_v), static_cast<int>(n), 1,
                [p_mdl, p_ptr, p_gen, n, out](Tape &t) {
                  const Vector &gy = t.grad(out);
                  const Vector &m = t.value(p_mdl);
                  const Vector &r = t.value(p_ptr);
                  const double g = t.scalar(p_gen);
                  const double o = r[n - 1];
                  const double keep = 1.0 - g * (1.0 - o);
                  const double s = 1.0 - m[n - 1];
                  Vector &gm = t.grad(p_mdl);
                  Vector &gr = t.grad(p_ptr);
                  double dg = 0.0;
                  double d_ool = 0.0;
                  double d_blank = gy[n - 1];
                  for (size_t j = 0; j + 1 < n; ++j) {
                    gm[j] += gy[j] * keep;
                    gr[j] += gy[j] * g * s;
                    dg += gy[j] * (r[j] * s - m[j] * (1.0 - o));
                    d_ool += gy[j] * m[j] * g;
                    d_blank -= gy[j] * r[j] * g;
                  }
                  gm[n - 1] += d_blank;
                  gr[n - 1] += d_ool;
                  t.grad(p_gen)[0] += dg;
                });
}

Var DeepBiasingVector(Tape &t, const Matrix &embeddings,
                      std::span<const int> valid) {
  return ad::ParamRowSum(t, embeddings, valid);
}

}  // namespace graph
}  // namespace tcpgen
