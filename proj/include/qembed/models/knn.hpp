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

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "qembed/feature_matrix.hpp"

namespace qembed::models {

struct KnnModel {
  Matrix train;
  Labels labels;
  int k = 5;
};

/// Fraction of the k nearest training rows (Euclidean; distance ties broken
/// by lower row index) that belong to class 1.
inline double knn_proba(const KnnModel& m, const Matrix& x, Eigen::Index r) {
  const auto n = static_cast<std::size_t>(m.train.rows());
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m.k), n);
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = {(m.train.row(static_cast<Eigen::Index>(i)) - x.row(r)).squaredNorm(), i};
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  int votes = 0;
  for (std::size_t i = 0; i < k; ++i) votes += m.labels[dist[i].second];
  return static_cast<double>(votes) / static_cast<double>(k);
}

}  // namespace qembed::models
