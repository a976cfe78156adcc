// tcpgen/include/tcpgen/transducer_loss.h

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

#ifndef TCPGEN_TRANSDUCER_LOSS_H_
#define TCPGEN_TRANSDUCER_LOSS_H_

#include <vector>

#include "tcpgen/autodiff.h"
#include "tcpgen/lexicon.h"
#include "tcpgen/matrix.h"

namespace tcpgen {

// Log-probability lattice indexed (u, t, k): u in [0, U] is the number of
// labels already emitted, t in [0, T) the frame, k the output class.
class TransducerLattice {
 public:
  TransducerLattice(int num_targets, int num_frames, int num_classes)
      : u_(num_targets + 1),
        t_(num_frames),
        k_(num_classes),
        data_(static_cast<size_t>(u_) * t_ * k_, 0.0) {}

  int num_targets() const { return u_ - 1; }
  int num_frames() const { return t_; }
  int num_classes() const { return k_; }

  double &operator()(int u, int t, int k) { return data_[Index(u, t, k)]; }
  double operator()(int u, int t, int k) const { return data_[Index(u, t, k)]; }

 private:
  size_t Index(int u, int t, int k) const {
    return (static_cast<size_t>(u) * t_ + t) * k_ + k;
  }
  int u_, t_, k_;
  Vector data_;
};

// Loss and its gradient with respect to the per-cell log-probabilities that
// take part in some alignment.
struct TransducerLossResult {
  double loss = 0.0;
  Matrix grad_blank;  // T x (U + 1)
  Matrix grad_label;  // T x U
};

// Full-sum loss from the two lattices the recursion actually reads:
// blank_logp(t, u) and label_logp(t, u) = log P(target[u] | t, u).
// alpha(t, u) = logsumexp(alpha(t-1, u) + blank(t-1, u),
//                         alpha(t, u-1) + label(t, u-1))
TransducerLossResult TransducerLossCompact(const Matrix &blank_logp,
                                           const Matrix &label_logp);

// -log sum over all alignments of `target` (class indices) through the
// lattice. Throws ContractViolation when T < 1 or the target is not in range.
double TransducerLoss(const TransducerLattice &lattice,
                      const std::vector<int> &target, int blank);

namespace graph {

// Transducer loss over a T x (U + 1) grid of probability vectors (one node per
// cell, `cells[t][u]`). Gradients flow back through log(p).
ad::Var TransducerLoss(ad::Tape &t,
                       const std::vector<std::vector<ad::Var>> &cells,
                       const std::vector<int> &target, int blank);

}  // namespace graph
}  // namespace tcpgen

#endif  // TCPGEN_TRANSDUCER_LOSS_H_
