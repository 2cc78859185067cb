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

#include "a3/matrix.h"

#include <Eigen/Core>
#include <cmath>
#include <utility>

#include "a3/error.h"

namespace a3 {
namespace {

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

ConstMap View(const Matrix& m) {
  return ConstMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                  static_cast<Eigen::Index>(m.cols()));
}
MutMap View(Matrix& m) {
  return MutMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                static_cast<Eigen::Index>(m.cols()));
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("Matrix", std::to_string(rows_ * cols_) + " values",
                         std::to_string(data_.size()));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw DimensionError("Matrix literal", std::to_string(cols_) + " columns",
                           std::to_string(r.size()));
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::RowVector(std::span<const double> values) {
  return Matrix(1, values.size(), {values.begin(), values.end()});
}

Matrix Matrix::ColumnVector(std::span<const double> values) {
  return Matrix(values.size(), 1, {values.begin(), values.end()});
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool Matrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix GatherRows(const Matrix& source, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), source.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= source.rows()) {
      throw DimensionError("GatherRows", "row < " + std::to_string(source.rows()),
                           std::to_string(indices[i]));
    }
    auto src = source.row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix VStack(const Matrix& a, const Matrix& b) {
  if (a.empty() && a.cols() == 0) return b;
  if (b.empty() && b.cols() == 0) return a;
  if (a.cols() != b.cols()) {
    throw DimensionError("VStack", std::to_string(a.cols()) + " columns",
                         std::to_string(b.cols()));
  }
  std::vector<double> data;
  data.reserve(a.size() + b.size());
  data.insert(data.end(), a.data().begin(), a.data().end());
  data.insert(data.end(), b.data().begin(), b.data().end());
  return Matrix(a.rows() + b.rows(), a.cols(), std::move(data));
}

Matrix HStack(std::span<const Matrix> blocks) {
  if (blocks.empty()) return {};
  const std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const Matrix& b : blocks) {
    if (b.rows() != rows) {
      throw DimensionError("HStack", std::to_string(rows) + " rows",
                           std::to_string(b.rows()));
    }
    cols += b.cols();
  }
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto dst = out.row(r).begin();
    for (const Matrix& b : blocks) {
      auto src = b.row(r);
      dst = std::copy(src.begin(), src.end(), dst);
    }
  }
  return out;
}

Matrix MultiplyTransposed(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("MultiplyTransposed",
                         "inner dim " + std::to_string(b.cols()),
                         std::to_string(a.cols()));
  }
  Matrix out(a.rows(), b.rows());
  if (out.empty()) return out;
  View(out).noalias() = View(a) * View(b).transpose();
  return out;
}

Matrix TransposedMultiply(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("TransposedMultiply",
                         "inner dim " + std::to_string(b.rows()),
                         std::to_string(a.rows()));
  }
  Matrix out(a.cols(), b.cols());
  if (out.empty()) return out;
  View(out).noalias() = View(a).transpose() * View(b);
  return out;
}

Matrix Multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("Multiply", "inner dim " + std::to_string(b.rows()),
                         std::to_string(a.cols()));
  }
  Matrix out(a.rows(), b.cols());
  if (out.empty()) return out;
  View(out).noalias() = View(a) * View(b);
  return out;
}

}  // namespace a3
