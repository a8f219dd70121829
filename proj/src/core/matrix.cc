//
// Copyright 2026 The prunepriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "prunepriv/core/matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "prunepriv/core/errors.h"

namespace prunepriv {
namespace {

void RequireFinite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw ParameterError(std::string(what) + ": non-finite entry");
    }
  }
}

void RequireSameDim(const DenseVector& a, const DenseVector& b,
                    const char* op) {
  if (a.dim() != b.dim()) {
    throw ShapeError(std::string(op) + ": dimension " +
                     std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()));
  }
}

void RequireSameShape(const DenseMatrix& a, const DenseMatrix& b,
                      const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

}  // namespace

DenseVector::DenseVector(std::size_t dim, double fill) : data_(dim, fill) {
  RequireFinite(data_, "DenseVector");
}

DenseVector::DenseVector(std::vector<double> data) : data_(std::move(data)) {
  RequireFinite(data_, "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> values)
    : data_(values) {
  RequireFinite(data_, "DenseVector");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  RequireFinite(data_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("DenseMatrix: data length " +
                     std::to_string(data_.size()) + " != " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  RequireFinite(data_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("DenseMatrix: ragged rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  RequireFinite(data_, "DenseMatrix");
}

Norms norms(std::span<const double> v) {
  Norms n;
  double sq = 0.0;
  for (double x : v) {
    const double a = std::abs(x);
    n.l1 += a;
    sq += a * a;
    n.linf = std::max(n.linf, a);
  }
  n.l2 = std::sqrt(sq);
  return n;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

DenseVector relu(const DenseVector& v) {
  DenseVector out = v;
  for (double& x : out.values()) x = std::max(x, 0.0);
  return out;
}

DenseVector matvec(const DenseMatrix& a, const DenseVector& x) {
  if (a.cols() != x.dim()) {
    throw ShapeError("matvec: matrix has " + std::to_string(a.cols()) +
                     " columns, vector has dimension " +
                     std::to_string(x.dim()));
  }
  DenseVector y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot(a.row(r), x.values());
  return y;
}

DenseVector matvec_transposed(const DenseMatrix& a, const DenseVector& x) {
  if (a.rows() != x.dim()) {
    throw ShapeError("matvec_transposed: matrix has " +
                     std::to_string(a.rows()) + " rows, vector has dimension " +
                     std::to_string(x.dim()));
  }
  DenseVector y(a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) y[c] += row[c] * xr;
  }
  return y;
}

DenseVector operator+(const DenseVector& a, const DenseVector& b) {
  RequireSameDim(a, b, "vector +");
  DenseVector out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] += b[i];
  return out;
}

DenseVector operator-(const DenseVector& a, const DenseVector& b) {
  RequireSameDim(a, b, "vector -");
  DenseVector out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] -= b[i];
  return out;
}

DenseVector operator*(double s, const DenseVector& v) {
  DenseVector out = v;
  for (double& x : out.values()) x *= s;
  return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  RequireSameShape(a, b, "matrix -");
  DenseMatrix out = a;
  auto o = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
  return out;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  RequireSameShape(a, b, "matrix +");
  DenseMatrix out = a;
  auto o = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bv[i];
  return out;
}

DenseVector hadamard(const DenseVector& a, const DenseVector& b) {
  RequireSameDim(a, b, "hadamard");
  DenseVector out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] *= b[i];
  return out;
}

double zero_fraction(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  const auto zeros = std::count(m.values().begin(), m.values().end(), 0.0);
  return static_cast<double>(zeros) / static_cast<double>(m.size());
}

}  // namespace prunepriv
