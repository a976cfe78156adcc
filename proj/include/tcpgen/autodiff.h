// tcpgen/include/tcpgen/autodiff.h

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

#ifndef TCPGEN_AUTODIFF_H_
#define TCPGEN_AUTODIFF_H_

#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tcpgen/matrix.h"
#include "tcpgen/prng.h"

namespace tcpgen {

// A trainable tensor registered under its checkpoint name.
struct NamedParam {
  std::string name;
  Matrix *value;
};
using ParamList = std::vector<NamedParam>;

// Gradient buffers aligned with a ParamList, keyed by parameter address.
class GradSet {
 public:
  GradSet() = default;
  explicit GradSet(const ParamList &params);

  // Gradient slot for `param`, or nullptr when the parameter is not tracked.
  Matrix *Find(const Matrix *param);
  Matrix &at(size_t i) { return grads_[i]; }
  const Matrix &at(size_t i) const { return grads_[i]; }
  size_t size() const { return grads_.size(); }

  void SetZero();
  void Add(const GradSet &other);
  void Scale(double s);
  double SquaredNorm() const;

 private:
  std::vector<Matrix> grads_;
  std::unordered_map<const Matrix *, size_t> index_;
};

namespace ad {

// Handle to a tape node.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape over vector/matrix-valued nodes. Every node holds a flat
// row-major value with (rows, cols); vectors have cols == 1.
//
// Parameters are not nodes: ops that read a parameter take the Matrix by
// reference and, during Backward, accumulate into the GradSet slot for it.
// A tape constructed without a GradSet records no backward closures and is
// used for inference.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape &)>;

  explicit Tape(GradSet *grads = nullptr) : grads_(grads) {}

  bool recording() const { return grads_ != nullptr; }
  GradSet *grads() { return grads_; }

  Var Constant(Vector value, int rows = -1, int cols = 1);
  // Adds a node; `backward` may be empty. Returns the new handle.
  Var Push(Vector value, int rows, int cols, BackwardFn backward);

  const Vector &value(Var v) const { return nodes_[v.id].value; }
  double scalar(Var v) const { return nodes_[v.id].value[0]; }
  int rows(Var v) const { return nodes_[v.id].rows; }
  int cols(Var v) const { return nodes_[v.id].cols; }
  size_t size(Var v) const { return nodes_[v.id].value.size(); }

  // Gradient buffer of a node, allocated on first access during Backward.
  Vector &grad(Var v);

  // Seeds d(out)/d(out) = 1 for a scalar output and runs every recorded
  // closure in reverse order. Parameter gradients are accumulated (+=).
  void Backward(Var out);

  size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Vector value;
    Vector grad;
    int rows;
    int cols;
    BackwardFn backward;
  };

  std::vector<Node> nodes_;
  GradSet *grads_;
};

// --- parameter ops
// W x
Var Linear(Tape &t, const Matrix &w, Var x);
// W x + b
Var Affine(Tape &t, const Matrix &w, const Matrix &b, Var x);
// Rows of X (m x c) projected: X W^T (m x r)
Var LinearRows(Tape &t, const Matrix &w, Var x);
// Row `r` of a parameter table.
Var ParamRow(Tape &t, const Matrix &table, int r);
// Parameter table stacked below its extra rows: [table; extra] as a node.
Var ParamStack(Tape &t, const Matrix &table, const Matrix &extra);
// Sum of the listed rows of a parameter table (zero vector when empty).
Var ParamRowSum(Tape &t, const Matrix &table, std::span<const int> rows);

// --- structural ops
Var Add(Tape &t, Var a, Var b);
Var Scale(Tape &t, Var a, double s);
Var Concat(Tape &t, Var a, Var b);
Var StackRows(Tape &t, std::span<const Var> rows);
Var GatherRows(Tape &t, Var m, std::span<const int> rows);
// Dense vector of length n with v[i] placed at index[i].
Var Scatter(Tape &t, Var v, std::span<const int> index, int n);
// M x (M is m x n, x has n entries)
Var MatVec(Tape &t, Var m, Var x);
// M^T p
Var MatTVec(Tape &t, Var m, Var p);
// Row-gathered forms that skip the intermediate copy: y[i] = M[rows[i]] . x
// and y = sum_i p[i] M[rows[i]], where p may be longer than rows.
Var GatherMatVec(Tape &t, Var m, std::span<const int> rows, Var x);
Var GatherMatTVec(Tape &t, Var m, std::span<const int> rows, Var p);

// --- elementwise / reductions
Var Tanh(Tape &t, Var a);
Var Sigmoid(Tape &t, Var a);
Var Softmax(Tape &t, Var a);
// Clamps each entry to [lo, hi]; gradient is zero outside.
Var Clamp(Tape &t, Var a, double lo, double hi);
// Inverted dropout: each entry is zeroed with probability `rate` and the
// survivors are scaled by 1 / (1 - rate). Identity when `rng` is null.
Var Dropout(Tape &t, Var a, double rate, Prng *rng);
// -log a[index]
Var NegLogPick(Tape &t, Var a, int index);
// Sum of scalar nodes, scaled by `scale`.
Var SumScalars(Tape &t, std::span<const Var> xs, double scale = 1.0);

}  // namespace ad
}  // namespace tcpgen

#endif  // TCPGEN_AUTODIFF_H_
