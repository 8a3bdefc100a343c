// Copyright 2026 The qembed Authors
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

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qembed/error.hpp"

namespace qembed {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;

/// Dense numeric samples x features with binary labels.
struct FeatureMatrix {
  Matrix values;
  std::vector<std::string> columns;
  Labels labels;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  void validate() const {
    if (static_cast<Eigen::Index>(columns.size()) != values.cols()) {
      fail(ErrorCode::DimensionMismatch, "column name count does not match matrix width");
    }
    if (static_cast<Eigen::Index>(labels.size()) != values.rows()) {
      fail(ErrorCode::DimensionMismatch, "label count does not match row count");
    }
    if (!values.allFinite()) fail(ErrorCode::NonFiniteFeature, "feature matrix has NaN/Inf entries");
    for (int y : labels) {
      if (y != 0 && y != 1) fail(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    }
  }

  /// Rows picked by index, in the given order.
  FeatureMatrix select_rows(const std::vector<std::size_t>& idx) const {
    FeatureMatrix out;
    out.columns = columns;
    out.values.resize(static_cast<Eigen::Index>(idx.size()), values.cols());
    out.labels.reserve(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      out.values.row(static_cast<Eigen::Index>(r)) = values.row(static_cast<Eigen::Index>(idx[r]));
      out.labels.push_back(labels.empty() ? 0 : labels[idx[r]]);
    }
    if (labels.empty()) out.labels.clear();
    return out;
  }
};

inline std::vector<double> row_vector(const Matrix& m, Eigen::Index r) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(c)] = m(r, c);
  return out;
}

}  // namespace qembed
