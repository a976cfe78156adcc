// tcpgen/src/matrix.cc

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

#include "tcpgen/matrix.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tcpgen/prng.h"

namespace tcpgen {
namespace kernels {

double Dot(std::span<const double> a, std::span<const double> b) {
  TCPGEN_CHECK(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void MatVec(const Matrix &w, std::span<const double> x, std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  MatVecAdd(w, x, y);
}

void MatVecAdd(const Matrix &w, std::span<const double> x,
               std::span<double> y) {
  TCPGEN_CHECK(x.size() == static_cast<size_t>(w.cols()));
  TCPGEN_CHECK(y.size() == static_cast<size_t>(w.rows()));
  const double *p = w.data().data();
  const size_t cols = x.size();
  for (int r = 0; r < w.rows(); ++r, p += cols) {
    double s = 0.0;
    for (size_t c = 0; c < cols; ++c) s += p[c] * x[c];
    y[r] += s;
  }
}

void MatTVecAdd(const Matrix &w, std::span<const double> g,
                std::span<double> y) {
  TCPGEN_CHECK(g.size() == static_cast<size_t>(w.rows()));
  TCPGEN_CHECK(y.size() == static_cast<size_t>(w.cols()));
  const double *p = w.data().data();
  const size_t cols = y.size();
  for (int r = 0; r < w.rows(); ++r, p += cols) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    for (size_t c = 0; c < cols; ++c) y[c] += gr * p[c];
  }
}

void OuterAdd(std::span<const double> g, std::span<const double> x,
              Matrix *w) {
  TCPGEN_CHECK(g.size() == static_cast<size_t>(w->rows()));
  TCPGEN_CHECK(x.size() == static_cast<size_t>(w->cols()));
  double *p = w->data().data();
  const size_t cols = x.size();
  for (size_t r = 0; r < g.size(); ++r, p += cols) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    for (size_t c = 0; c < cols; ++c) p[c] += gr * x[c];
  }
}

void Axpy(double a, std::span<const double> x, std::span<double> y) {
  TCPGEN_CHECK(x.size() == y.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void Softmax(std::span<double> v) {
  if (v.empty()) return;
  double mx = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double &x : v) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (double &x : v) x /= sum;
}

double LogSumExp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

double LogSumExp(std::span<const double> v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (mx == -std::numeric_limits<double>::infinity()) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace kernels

void FillGaussian(Matrix *m, double scale, Prng *rng) {
  for (double &x : m->data()) x = scale * rng->Gaussian();
}

}  // namespace tcpgen
