// gramctc/src/matrix.cpp
//
// Copyright 2026 The gramctc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gramctc/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "gramctc/error.hpp"

namespace gramctc {

ConstMatrixView::ConstMatrixView(std::span<const double> data,
                                 std::size_t rows, std::size_t cols)
    : data_(data), rows_(rows), cols_(cols) {
  if (data.size() != rows * cols) {
    throw Error(ErrorKind::kDimensionMismatch,
                "matrix view of " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " over " +
                    std::to_string(data.size()) + " values");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorKind::kDimensionMismatch,
                "matrix of " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " given " +
                    std::to_string(data_.size()) + " values");
  }
}

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorKind::kDimensionMismatch, "matrix sum shape mismatch");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

double max_abs_diff(ConstMatrixView a, ConstMatrixView b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "max_abs_diff shape mismatch");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  }
  return worst;
}

}  // namespace gramctc
