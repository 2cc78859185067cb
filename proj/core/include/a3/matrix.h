/*
 * Copyright 2026 The A3 Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef A3_MATRIX_H_
#define A3_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace a3 {

// Dense row-major matrix of doubles. The single numeric carrier for
// features, parameters and activations.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  // Row-wise literal, e.g. Matrix({{1, 2}, {3, 4}}).
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix RowVector(std::span<const double> values);
  static Matrix ColumnVector(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  std::string shape_string() const;
  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Rows of `source` picked by `indices`, in that order (repeats allowed).
Matrix GatherRows(const Matrix& source, std::span<const std::size_t> indices);

// Stacks a on top of b; column counts must agree (either may be empty).
Matrix VStack(const Matrix& a, const Matrix& b);

// Side-by-side concatenation; row counts must agree.
Matrix HStack(std::span<const Matrix> blocks);

// out = a * b^T, the dense-layer product with weights stored (out x in).
Matrix MultiplyTransposed(const Matrix& a, const Matrix& b);
// out = a^T * b
Matrix TransposedMultiply(const Matrix& a, const Matrix& b);
// out = a * b
Matrix Multiply(const Matrix& a, const Matrix& b);

}  // namespace a3

#endif  // A3_MATRIX_H_
