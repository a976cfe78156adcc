// tcpgen/include/tcpgen/matrix.h

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

#ifndef TCPGEN_MATRIX_H_
#define TCPGEN_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

#include "tcpgen/common.h"

namespace tcpgen {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. A column vector is a Matrix with one
// column; a bias is stored as rows x 1.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    TCPGEN_CHECK(rows >= 0 && cols >= 0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }

  double &operator()(int r, int c) { return data_[Index(r, c)]; }
  double operator()(int r, int c) const { return data_[Index(r, c)]; }

  std::span<double> Row(int r) {
    return {data_.data() + static_cast<size_t>(r) * cols_,
            static_cast<size_t>(cols_)};
  }
  std::span<const double> Row(int r) const {
    return {data_.data() + static_cast<size_t>(r) * cols_,
            static_cast<size_t>(cols_)};
  }

  std::vector<double> &data() { return data_; }
  const std::vector<double> &data() const { return data_; }

  void SetZero() { std::fill(data_.begin(), data_.end(), 0.0); }
  bool SameShape(const Matrix &o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  size_t Index(int r, int c) const {
    return static_cast<size_t>(r) * cols_ + c;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Serial numeric kernels shared by the pure (non-differentiable) code paths and
// the autodiff tape. Spans are read-only inputs; the output is the last
// argument.
namespace kernels {

double Dot(std::span<const double> a, std::span<const double> b);
// y = W x  (W is rows x cols, x has cols entries, y has rows entries)
void MatVec(const Matrix &w, std::span<const double> x, std::span<double> y);
// y += W x
void MatVecAdd(const Matrix &w, std::span<const double> x, std::span<double> y);
// y += W^T g
void MatTVecAdd(const Matrix &w, std::span<const double> g,
                std::span<double> y);
// W += g x^T
void OuterAdd(std::span<const double> g, std::span<const double> x, Matrix *w);
// y += a * x
void Axpy(double a, std::span<const double> x, std::span<double> y);
// In-place numerically stable softmax.
void Softmax(std::span<double> v);
double LogSumExp(double a, double b);
double LogSumExp(std::span<const double> v);
double Sigmoid(double x);

}  // namespace kernels

// Initializes every entry from N(0, scale^2).
void FillGaussian(Matrix *m, double scale, class Prng *rng);

}  // namespace tcpgen

#endif  // TCPGEN_MATRIX_H_
