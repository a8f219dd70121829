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

#ifndef PRUNEPRIV_CORE_MATRIX_H_
#define PRUNEPRIV_CORE_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace prunepriv {

// Dense real vector. Entries are finite at construction time.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim, double fill = 0.0);
  explicit DenseVector(std::vector<double> data);
  DenseVector(std::initializer_list<double> values);

  std::size_t dim() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<double> data_;
};

// Dense row-major real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // `data` must hold rows * cols finite values in row-major order.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }
  std::span<double> row(std::size_t r) {
    return std::span<double>(data_).subspan(r * cols_, cols_);
  }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Norms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

Norms norms(std::span<const double> v);
inline Norms norms(const DenseVector& v) { return norms(v.values()); }

double dot(std::span<const double> a, std::span<const double> b);

DenseVector relu(const DenseVector& v);

// y = A x. Throws ShapeError when A.cols() != x.dim().
DenseVector matvec(const DenseMatrix& a, const DenseVector& x);
// y = A^T x. Throws ShapeError when A.rows() != x.dim().
DenseVector matvec_transposed(const DenseMatrix& a, const DenseVector& x);

DenseVector operator+(const DenseVector& a, const DenseVector& b);
DenseVector operator-(const DenseVector& a, const DenseVector& b);
DenseVector operator*(double s, const DenseVector& v);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);

// Elementwise (Hadamard) product.
DenseVector hadamard(const DenseVector& a, const DenseVector& b);

// Fraction of exactly-zero entries.
double zero_fraction(const DenseMatrix& m);

}  // namespace prunepriv

#endif  // PRUNEPRIV_CORE_MATRIX_H_
