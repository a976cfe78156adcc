// tcpgen/src/autodiff.cc

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

#include "tcpgen/autodiff.h"

#include <algorithm>
#include <cmath>

namespace tcpgen {

GradSet::GradSet(const ParamList &params) {
  grads_.reserve(params.size());
  for (size_t i = 0; i < params.size(); ++i) {
    grads_.emplace_back(params[i].value->rows(), params[i].value->cols());
    index_.emplace(params[i].value, i);
  }
}

Matrix *GradSet::Find(const Matrix *param) {
  auto it = index_.find(param);
  return it == index_.end() ? nullptr : &grads_[it->second];
}

void GradSet::SetZero() {
  for (auto &g : grads_) g.SetZero();
}

void GradSet::Add(const GradSet &other) {
  TCPGEN_CHECK(other.grads_.size() == grads_.size());
  for (size_t i = 0; i < grads_.size(); ++i) {
    kernels::Axpy(1.0, other.grads_[i].data(), grads_[i].data());
  }
}

void GradSet::Scale(double s) {
  for (auto &g : grads_) {
    for (double &x : g.data()) x *= s;
  }
}

double GradSet::SquaredNorm() const {
  double s = 0.0;
  for (const auto &g : grads_) {
    for (double x : g.data()) s += x * x;
  }
  return s;
}

namespace ad {

Var Tape::Constant(Vector value, int rows, int cols) {
  if (rows < 0) rows = static_cast<int>(value.size());
  return Push(std::move(value), rows, cols, nullptr);
}

Var Tape::Push(Vector value, int rows, int cols, BackwardFn backward) {
  TCPGEN_CHECK(static_cast<size_t>(rows) * cols == value.size());
  nodes_.push_back(
      Node{std::move(value), {}, rows, cols,
           recording() ? std::move(backward) : BackwardFn()});
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Vector &Tape::grad(Var v) {
  Node &n = nodes_[v.id];
  if (n.grad.empty()) n.grad.assign(n.value.size(), 0.0);
  return n.grad;
}

void Tape::Backward(Var out) {
  TCPGEN_CHECK(recording());
  TCPGEN_CHECK(size(out) == 1);
  grad(out)[0] += 1.0;
  for (int i = out.id; i >= 0; --i) {
    Node &n = nodes_[i];
    if (n.backward && !n.grad.empty()) n.backward(*this);
  }
}

namespace {

Var NextVar(const Tape &t) { return Var{static_cast<int>(t.num_nodes())}; }

}  // namespace

Var Linear(Tape &t, const Matrix &w, Var x) {
  Vector y(w.rows());
  kernels::MatVec(w, t.value(x), y);
  Var out = NextVar(t);
  return t.Push(std::move(y), w.rows(), 1, [&w, x, out](Tape &t) {
    const Vector &g = t.grad(out);
    if (Matrix *gw = t.grads()->Find(&w)) kernels::OuterAdd(g, t.value(x), gw);
    kernels::MatTVecAdd(w, g, t.grad(x));
  });
}

Var Affine(Tape &t, const Matrix &w, const Matrix &b, Var x) {
  TCPGEN_CHECK(b.rows() == w.rows() && b.cols() == 1);
  Vector y(b.data());
  kernels::MatVecAdd(w, t.value(x), y);
  Var out = NextVar(t);
  return t.Push(std::move(y), w.rows(), 1, [&w, &b, x, out](Tape &t) {
    const Vector &g = t.grad(out);
    if (Matrix *gw = t.grads()->Find(&w)) kernels::OuterAdd(g, t.value(x), gw);
    if (Matrix *gb = t.grads()->Find(&b)) kernels::Axpy(1.0, g, gb->data());
    kernels::MatTVecAdd(w, g, t.grad(x));
  });
}

Var LinearRows(Tape &t, const Matrix &w, Var x) {
  const int m = t.rows(x);
  const int c = t.cols(x);
  TCPGEN_CHECK(c == w.cols());
  const int r = w.rows();
  Vector y(static_cast<size_t>(m) * r);
  const Vector &xv = t.value(x);
  for (int i = 0; i < m; ++i) {
    kernels::MatVec(w, std::span<const double>(xv).subspan(size_t(i) * c, c),
                    std::span<double>(y).subspan(size_t(i) * r, r));
  }
  Var out = NextVar(t);
  return t.Push(std::move(y), m, r, [&w, x, out, m, r, c](Tape &t) {
    const Vector &g = t.grad(out);
    const Vector &xv = t.value(x);
    Matrix *gw = t.grads()->Find(&w);
    Vector &gx = t.grad(x);
    for (int i = 0; i < m; ++i) {
      auto gi = std::span<const double>(g).subspan(size_t(i) * r, r);
      if (gw) {
        kernels::OuterAdd(gi, std::span<const double>(xv).subspan(size_t(i) * c, c),
                          gw);
      }
      kernels::MatTVecAdd(w, gi, std::span<double>(gx).subspan(size_t(i) * c, c));
    }
  });
}

Var ParamRow(Tape &t, const Matrix &table, int r) {
  TCPGEN_CHECK(r >= 0 && r < table.rows());
  auto row = table.Row(r);
  Var out = NextVar(t);
  return t.Push(Vector(row.begin(), row.end()), table.cols(), 1,
                [&table, r, out](Tape &t) {
                  if (Matrix *g = t.grads()->Find(&table)) {
                    kernels::Axpy(1.0, t.grad(out), g->Row(r));
                  }
                });
}

Var ParamStack(Tape &t, const Matrix &table, const Matrix &extra) {
  TCPGEN_CHECK(table.cols() == extra.cols());
  Vector v(table.data());
  v.insert(v.end(), extra.data().begin(), extra.data().end());
  Var out = NextVar(t);
  return t.Push(std::move(v), table.rows() + extra.rows(), table.cols(),
                [&table, &extra, out](Tape &t) {
                  const Vector &g = t.grad(out);
                  const size_t n = table.size();
                  if (Matrix *gt = t.grads()->Find(&table)) {
                    kernels::Axpy(1.0, std::span<const double>(g).first(n),
                                  gt->data());
                  }
                  if (Matrix *ge = t.grads()->Find(&extra)) {
                    kernels::Axpy(1.0, std::span<const double>(g).subspan(n),
                                  ge->data());
                  }
                });
}

Var ParamRowSum(Tape &t, const Matrix &table, std::span<const int> rows) {
  Vector v(table.cols(), 0.0);
  for (int r : rows) kernels::Axpy(1.0, table.Row(r), v);
  Var out = NextVar(t);
  std::vector<int> idx(rows.begin(), rows.end());
  return t.Push(std::move(v), table.cols(), 1,
                [&table, idx = std::move(idx), out](Tape &t) {
                  Matrix *g = t.grads()->Find(&table);
                  if (!g) return;
                  const Vector &go = t.grad(out);
                  for (int r : idx) kernels::Axpy(1.0, go, g->Row(r));
                });
}

Var Add(Tape &t, Var a, Var b) {
  TCPGEN_CHECK(t.size(a) == t.size(b));
  Vector v(t.value(a));
  kernels::Axpy(1.0, t.value(b), v);
  Var out = NextVar(t);
  return t.Push(std::move(v), t.rows(a), t.cols(a), [a, b, out](Tape &t) {
    const Vector &g = t.grad(out);
    kernels::Axpy(1.0, g, t.grad(a));
    kernels::Axpy(1.0, g, t.grad(b));
  });
}

Var Scale(Tape &t, Var a, double s) {
  Vector v(t.value(a));
  for (double &x : v) x *= s;
  Var out = NextVar(t);
  return t.Push(std::move(v), t.rows(a), t.cols(a), [a, s, out](Tape &t) {
    kernels::Axpy(s, t.grad(out), t.grad(a));
  });
}

Var Concat(Tape &t, Var a, Var b) {
  Vector v(t.value(a));
  const size_t na = v.size();
  v.insert(v.end(), t.value(b).begin(), t.value(b).end());
  const int n = static_cast<int>(v.size());
  Var out = NextVar(t);
  return t.Push(std::move(v), n, 1, [a, b, na, out](Tape &t) {
    const Vector &g = t.grad(out);
    kernels::Axpy(1.0, std::span<const double>(g).first(na), t.grad(a));
    kernels::Axpy(1.0, std::span<const double>(g).subspan(na), t.grad(b));
  });
}

Var StackRows(Tape &t, std::span<const Var> rows) {
  TCPGEN_CHECK(!rows.empty());
  const size_t c = t.size(rows[0]);
  Vector v;
  v.reserve(c * rows.size());
  for (Var r : rows) {
    TCPGEN_CHECK(t.size(r) == c);
    v.insert(v.end(), t.value(r).begin(), t.value(r).end());
  }
  std::vector<Var> ids(rows.begin(), rows.end());
  Var out = NextVar(t);
  return t.Push(std::move(v), static_cast<int>(rows.size()),
                static_cast<int>(c), [ids = std::move(ids), c, out](Tape &t) {
                  const Vector &g = t.grad(out);
                  for (size_t i = 0; i < ids.size(); ++i) {
                    kernels::Axpy(1.0, std::span<const double>(g).subspan(i * c, c),
                                  t.grad(ids[i]));
                  }
                });
}

Var GatherRows(Tape &t, Var m, std::span<const int> rows) {
  const int c = t.cols(m);
  Vector v;
  v.reserve(rows.size() * c);
  const Vector &mv = t.value(m);
  for (int r : rows) {
    TCPGEN_CHECK(r >= 0 && r < t.rows(m));
    v.insert(v.end(), mv.begin() + size_t(r) * c, mv.begin() + size_t(r + 1) * c);
  }
  std::vector<int> idx(rows.begin(), rows.end());
  Var out = NextVar(t);
  return t.Push(std::move(v), static_cast<int>(idx.size()), c,
                [m, idx, c, out](Tape &t) {
                  const Vector &g = t.grad(out);
                  Vector &gm = t.grad(m);
                  for (size_t i = 0; i < idx.size(); ++i) {
                    for (int k = 0; k < c; ++k) {
                      gm[size_t(idx[i]) * c + k] += g[i * c + k];
                    }
                  }
                });
}

Var Scatter(Tape &t, Var v, std::span<const int> index, int n) {
  TCPGEN_CHECK(index.size() == t.size(v));
  Vector out_v(n, 0.0);
  const Vector &vv = t.value(v);
  for (size_t i = 0; i < index.size(); ++i) out_v[index[i]] += vv[i];
  std::vector<int> idx(index.begin(), index.end());
  Var out = NextVar(t);
  return t.Push(std::move(out_v), n, 1, [v, idx, out](Tape &t) {
    const Vector &g = t.grad(out);
    Vector &gv = t.grad(v);
    for (size_t i = 0; i < idx.size(); ++i) gv[i] += g[idx[i]];
  });
}

Var MatVec(Tape &t, Var m, Var x) {
  const int r = t.rows(m);
  const int c = t.cols(m);
  TCPGEN_CHECK(t.size(x) == static_cast<size_t>(c));
  Vector y(r, 0.0);
  const Vector &mv = t.value(m);
  const Vector &xv = t.value(x);
  for (int i = 0; i < r; ++i) {
    double s = 0.0;
    for (int k = 0; k < c; ++k) s += mv[size_t(i) * c + k] * xv[k];
    y[i] = s;
  }
  Var out = NextVar(t);
  return t.Push(std::move(y), r, 1, [m, x, r, c, out](Tape &t) {
    const Vector &g = t.grad(out);
    const Vector &mv = t.value(m);
    const Vector &xv = t.value(x);
    Vector &gm = t.grad(m);
    Vector &gx = t.grad(x);
    for (int i = 0; i < r; ++i) {
      const double gi = g[i];
      for (int k = 0; k < c; ++k) {
        gm[size_t(i) * c + k] += gi * xv[k];
        gx[k] += gi * mv[size_t(i) * c + k];
      }
    }
  });
}

Var MatTVec(Tape &t, Var m, Var p) {
  const int r = t.rows(m);
  const int c = t.cols(m);
  TCPGEN_CHECK(t.size(p) == static_cast<size_t>(r));
  Vector y(c, 0.0);
  const Vector &mv = t.value(m);
  const Vector &pv = t.value(p);
  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < c; ++k) y[k] += pv[i] * mv[size_t(i) * c + k];
  }
  Var out = NextVar(t);
  return t.Push(std::move(y), c, 1, [m, p, r, c, out](Tape &t) {
    const Vector &g = t.grad(out);
    const Vector &mv = t.value(m);
    const Vector &pv = t.value(p);
    Vector &gm = t.grad(m);
    Vector &gp = t.grad(p);
    for (int i = 0; i < r; ++i) {
      double s = 0.0;
      for (int k = 0; k < c; ++k) {
        gm[size_t(i) * c + k] += pv[i] * g[k];
        s += g[k] * mv[size_t(i) * c + k];
      }
      gp[i] += s;
    }
  });
}

Var GatherMatVec(Tape &t, Var m, std::span<const int> rows, Var x) {
  const int c = t.cols(m);
  TCPGEN_CHECK(t.size(x) == static_cast<size_t>(c));
  const Vector &mv = t.value(m);
  const Vector &xv = t.value(x);
  Vector y(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    TCPGEN_CHECK(rows[i] >= 0 && rows[i] < t.rows(m));
    y[i] = kernels::Dot(std::span<const double>(mv).subspan(size_t(rows[i]) * c, c), xv);
  }
  std::vector<int> idx(rows.begin(), rows.end());
  Var out = NextVar(t);
  return t.Push(std::move(y), static_cast<int>(idx.size()), 1,
                [m, x, idx, c, out](Tape &t) {
                  const Vector &g = t.grad(out);
                  const Vector &mv = t.value(m);
                  const Vector &xv = t.value(x);
                  Vector &gm = t.grad(m);
                  Vector &gx = t.grad(x);
                  for (size_t i = 0; i < idx.size(); ++i) {
                    const size_t base = size_t(idx[i]) * c;
                    for (int k = 0; k < c; ++k) {
                      gm[base + k] += g[i] * xv[k];
                      gx[k] += g[i] * mv[base + k];
                    }
                  }
                });
}

Var GatherMatTVec(Tape &t, Var m, std::span<const int> rows, Var p) {
  const int c = t.cols(m);
  TCPGEN_CHECK(t.size(p) >= rows.size());
  const Vector &mv = t.value(m);
  const Vector &pv = t.value(p);
  Vector y(c, 0.0);
  for (size_t i = 0; i < rows.size(); ++i) {
    TCPGEN_CHECK(rows[i] >= 0 && rows[i] < t.rows(m));
    kernels::Axpy(pv[i], std::span<const double>(mv).subspan(size_t(rows[i]) * c, c), y);
  }
  std::vector<int> idx(rows.begin(), rows.end());
  Var out = NextVar(t);
  return t.Push(std::move(y), c, 1, [m, p, idx, c, out](Tape &t) {
    const Vector &g = t.grad(out);
    const Vector &mv = t.value(m);
    const Vector &pv = t.value(p);
    Vector &gm = t.grad(m);
    Vector &gp = t.grad(p);
    for (size_t i = 0; i < idx.size(); ++i) {
      const size_t base = size_t(idx[i]) * c;
      double s = 0.0;
      for (int k = 0; k < c; ++k) {
        gm[base + k] += pv[i] * g[k];
        s += g[k] * mv[base + k];
      }
      gp[i] += s;
    }
  });
}

Var Tanh(Tape &t, Var a) {
  Vector v(t.value(a));
  for (double &x : v) x = std::tanh(x);
  Var out = NextVar(t);
  return t.Push(std::move(v), t.rows(a), t.cols(a), [a, out](Tape &t) {
    const Vector &g = t.grad(out);
    const Vector &y = t.value(out);
    Vector &ga = t.grad(a);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var Sigmoid(Tape &t, Var a) {
  Vector v(t.value(a));
  for (double &x : v) x = kernels::Sigmoid(x);
  Var out = NextVar(t);
  return t.Push(std::move(v), t.rows(a), t.cols(a), [a, out](Tape &t) {
    const Vector &g = t.grad(out);
    const Vector &y = t.value(out);
    Vector &ga = t.grad(a);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var Softmax(Tape &t, Var a) {
  Vector v(t.value(a));
  kernels::Softmax(v);
  Var out = NextVar(t);
  return t.Push(std::move(v), t.rows(a), t.cols(a), [a, out](Tape &t) {
    const Vector &g = t.grad(out);
    const Vector &y = t.value(out);
    double dot = kernels::Dot(g, y);
    Vector &ga = t.grad(a);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += y[i] * (g[i] - dot);
  });
}

Var Clamp(Tape &t, Var a, double lo, double hi) {
  Vector v(t.value(a));
  for (double &x : v) x = std::clamp(x, lo, hi);
  Var out = NextVar(t);
  return t.Push(std::move(v), t.rows(a), t.cols(a), [a, lo, hi, out](Tape &t) {
    const Vector &g = t.grad(out);
    const Vector &x = t.value(a);
    Vector &ga = t.grad(a);
    for (size_t i = 0; i < g.size(); ++i) {
      if (x[i] >= lo && x[i] <= hi) ga[i] += g[i];
    }
  });
}

Var Dropout(Tape &t, Var a, double rate, Prng *rng) {
  TCPGEN_CHECK(rate >= 0.0 && rate < 1.0);
  if (rng == nullptr || rate == 0.0) return a;
  const double keep = 1.0 / (1.0 - rate);
  Vector mask(t.size(a));
  for (double &m : mask) m = rng->Uniform() < rate ? 0.0 : keep;
  Vector v(t.value(a));
  for (size_t i = 0; i < v.size(); ++i) v[i] *= mask[i];
  Var out = NextVar(t);
  return t.Push(std::move(v), t.rows(a), t.cols(a),
                [a, mask = std::move(mask), out](Tape &t) {
                  const Vector &g = t.grad(out);
                  Vector &ga = t.grad(a);
                  for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * mask[i];
                });
}

Var NegLogPick(Tape &t, Var a, int index) {
  TCPGEN_CHECK(index >= 0 && static_cast<size_t>(index) < t.size(a));
  double p = t.value(a)[index];
  Var out = NextVar(t);
  return t.Push({-std::log(p)}, 1, 1, [a, index, out](Tape &t) {
    t.grad(a)[index] -= t.grad(out)[0] / t.value(a)[index];
  });
}

Var SumScalars(Tape &t, std::span<const Var> xs, double scale) {
  double s = 0.0;
  for (Var x : xs) s += t.scalar(x);
  std::vector<Var> ids(xs.begin(), xs.end());
  Var out = NextVar(t);
  return t.Push({scale * s}, 1, 1, [ids = std::move(ids), scale, out](Tape &t) {
    const double g = t.grad(out)[0] * scale;
    for (Var x : ids) t.grad(x)[0] += g;
  });
}

}  // namespace ad
}  // namespace tcpgen
