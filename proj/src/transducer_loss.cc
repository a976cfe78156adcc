// tcpgen/src/transducer_loss.cc

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

#include "tcpgen/transducer_loss.h"

#include <cmath>
#include <limits>
#include <memory>

namespace tcpgen {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

TransducerLossResult TransducerLossCompact(const Matrix &blank_logp,
                                           const Matrix &label_logp) {
  const int T = blank_logp.rows();
  const int U = blank_logp.cols() - 1;
  if (T < 1) throw ContractViolation("transducer loss: no frames");
  TCPGEN_CHECK(U >= 0);
  TCPGEN_CHECK(label_logp.rows() == T && label_logp.cols() == U);

  Matrix alpha(T, U + 1, kNegInf);
  alpha(0, 0) = 0.0;
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      if (t == 0 && u == 0) continue;
      double a = kNegInf;
      if (t > 0) a = alpha(t - 1, u) + blank_logp(t - 1, u);
      if (u > 0) {
        a = kernels::LogSumExp(a, alpha(t, u - 1) + label_logp(t, u - 1));
      }
      alpha(t, u) = a;
    }
  }
  const double log_like = alpha(T - 1, U) + blank_logp(T - 1, U);

  // beta(t, u): log-prob of finishing from (t, u), including the final blank.
  Matrix beta(T, U + 1, kNegInf);
  beta(T - 1, U) = blank_logp(T - 1, U);
  for (int t = T - 1; t >= 0; --t) {
    for (int u = U; u >= 0; --u) {
      if (t == T - 1 && u == U) continue;
      double b = kNegInf;
      if (t + 1 < T) b = beta(t + 1, u) + blank_logp(t, u);
      if (u < U) b = kernels::LogSumExp(b, beta(t, u + 1) + label_logp(t, u));
      beta(t, u) = b;
    }
  }

  TransducerLossResult res;
  res.loss = -log_like;
  res.grad_blank = Matrix(T, U + 1);
  res.grad_label = Matrix(T, U);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      double next = t + 1 < T ? beta(t + 1, u) : (u == U ? 0.0 : kNegInf);
      res.grad_blank(t, u) =
          -std::exp(alpha(t, u) + blank_logp(t, u) + next - log_like);
      if (u < U) {
        res.grad_label(t, u) = -std::exp(alpha(t, u) + label_logp(t, u) +
                                         beta(t, u + 1) - log_like);
      }
    }
  }
  return res;
}

double TransducerLoss(const TransducerLattice &lattice,
                      const std::vector<int> &target, int blank) {
  const int T = lattice.num_frames();
  const int U = lattice.num_targets();
  if (T < 1) throw ContractViolation("transducer loss: no frames");
  TCPGEN_CHECK(static_cast<int>(target.size()) == U);
  TCPGEN_CHECK(blank >= 0 && blank < lattice.num_classes());
  Matrix blank_lp(T, U + 1);
  Matrix label_lp(T, U);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      blank_lp(t, u) = lattice(u, t, blank);
      if (u < U) {
        TCPGEN_CHECK(target[u] >= 0 && target[u] < lattice.num_classes());
        label_lp(t, u) = lattice(u, t, target[u]);
      }
    }
  }
  return TransducerLossCompact(blank_lp, label_lp).loss;
}

namespace graph {

ad::Var TransducerLoss(ad::Tape &t,
                       const std::vector<std::vector<ad::Var>> &cells,
                       const std::vector<int> &target, int blank) {
  const int T = static_cast<int>(cells.size());
  const int U = static_cast<int>(target.size());
  if (T < 1) throw ContractViolation("transducer loss: no frames");
  Matrix blank_lp(T, U + 1);
  Matrix label_lp(T, U);
  for (int f = 0; f < T; ++f) {
    TCPGEN_CHECK(static_cast<int>(cells[f].size()) == U + 1);
    for (int u = 0; u <= U; ++u) {
      const Vector &p = t.value(cells[f][u]);
      blank_lp(f, u) = std::log(p[blank]);
      if (u < U) label_lp(f, u) = std::log(p[target[u]]);
    }
  }
  TransducerLossResult res = TransducerLossCompact(blank_lp, label_lp);
  ad::Var out{static_cast<int>(t.num_nodes())};
  auto grads = std::make_shared<TransducerLossResult>(std::move(res));
  const double loss = grads->loss;
  return t.Push({loss}, 1, 1,
                [cells, target, blank, grads, out](ad::Tape &t) {
                  const double g = t.grad(out)[0];
                  const int T = static_cast<int>(cells.size());
                  const int U = static_cast<int>(target.size());
                  for (int f = 0; f < T; ++f) {
                    for (int u = 0; u <= U; ++u) {
                      const Vector &p = t.value(cells[f][u]);
                      Vector &gp = t.grad(cells[f][u]);
                      gp[blank] += g * grads->grad_blank(f, u) / p[blank];
                      if (u < U) {
                        gp[target[u]] +=
                            g * grads->grad_label(f, u) / p[target[u]];
                      }
                    }
                  }
                });
}

}  // namespace graph
}  // namespace tcpgen
