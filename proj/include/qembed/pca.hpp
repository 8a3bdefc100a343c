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
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qembed/error.hpp"
#include "qembed/feature_matrix.hpp"

namespace qembed::pipeline {

/// Principal components of a centered data matrix.
struct PcaModel {
  Vector mean;
  Matrix components;                             // k x d, orthonormal rows
  std::vector<double> explained_variance_ratio;  // k entries, over all d components
  std::vector<double> singular_values;           // k entries
  std::size_t rank = 0;                          // numerical rank of the centered data
  bool rank_deficient = false;                   // k > rank; trailing ratios are ~0

  std::size_t n_components() const { return static_cast<std::size_t>(components.rows()); }
};

/// Top-k right singular vectors of the centered matrix. Each component's
/// largest-magnitude entry is made positive.
inline PcaModel pca_fit(const Matrix& x, std::size_t k) {
  if (!x.allFinite()) fail(ErrorCode::NonFiniteFeature, "PCA input has NaN/Inf");
  const auto n = static_cast<std::size_t>(x.rows());
  const auto d = static_cast<std::size_t>(x.cols());
  if (n < 2 || k < 1 || k > std::min(n - 1, d)) {
    fail(ErrorCode::InvalidArgument, "PCA needs 1 <= k <= min(rows-1, cols); got k=" + std::to_string(k) +
                                         " for " + std::to_string(n) + "x" + std::to_string(d));
  }
  PcaModel m;
  m.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - m.mean.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();

  const double total = sv.squaredNorm();
  const double tol = sv.size() ? sv(0) * static_cast<double>(std::max(n, d)) *
                                     std::numeric_limits<double>::epsilon()
                               : 0.0;
  m.rank = static_cast<std::size_t>((sv.array() > tol).count());
  m.rank_deficient = k > m.rank;

  m.components.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::VectorXd v = svd.matrixV().col(static_cast<Eigen::Index>(i));
    Eigen::Index argmax = 0;
    v.cwiseAbs().maxCoeff(&argmax);
    if (v(argmax) < 0) v = -v;
    m.components.row(static_cast<Eigen::Index>(i)) = v.transpose();
    const double s = sv(static_cast<Eigen::Index>(i));
    m.singular_values.push_back(s);
    m.explained_variance_ratio.push_back(total > 0.0 ? s * s / total : 0.0);
  }
  return m;
}

inline Matrix pca_transform(const PcaModel& m, const Matrix& x) {
  if (x.cols() != m.mean.size()) {
    fail(ErrorCode::DimensionMismatch, "PCA expects " + std::to_string(m.mean.size()) + " columns, got " +
                                           std::to_string(x.cols()));
  }
  return (x.rowwise() - m.mean.transpose()) * m.components.transpose();
}

inline Matrix pca_inverse_transform(const PcaModel& m, const Matrix& scores) {
  if (scores.cols() != m.components.rows()) {
    fail(ErrorCode::DimensionMismatch, "score width does not match component count");
  }
  Matrix out = scores * m.components;
  out.rowwise() += m.mean.transpose();
  return out;
}

inline FeatureMatrix pca_transform(const PcaModel& m, const FeatureMatrix& x) {
  FeatureMatrix out;
  out.values = pca_transform(m, x.values);
  out.labels = x.labels;
  for (std::size_t i = 0; i < m.n_components(); ++i) out.columns.push_back("pc" + std::to_string(i));
  return out;
}

/// Knee of the cumulative explained-variance curve: the index farthest from
/// the chord joining its first and last points. Near-ties go to the smaller
/// index.
inline std::size_t find_elbow(std::span<const double> ratios) {
  if (ratios.size() < 3) {
    fail(ErrorCode::TooFewComponents, "elbow detection needs at least 3 ratios, got " +
                                          std::to_string(ratios.size()));
  }
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    if (ratios[i] > ratios[i - 1] + 1e-9) {
      fail(ErrorCode::InvalidArgument, "explained variance ratios must be nonincreasing");
    }
  }
  std::vector<double> cum(ratios.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) cum[i] = acc += ratios[i];

  const double x1 = 0.0;
  const double y1 = cum.front();
  const double x2 = static_cast<double>(cum.size() - 1);
  const double y2 = cum.back();
  const double len = std::hypot(x2 - x1, y2 - y1);
  std::vector<double> dist(cum.size());
  for (std::size_t i = 0; i < cum.size(); ++i) {
    const double x0 = static_cast<double>(i);
    dist[i] = std::abs((y2 - y1) * x0 - (x2 - x1) * cum[i] + x2 * y1 - y2 * x1) / len;
  }
  const double best = *std::max_element(dist.begin(), dist.end());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] >= best - 1e-12) return i;
  }
  return 0;
}

inline std::vector<double> cumulative(std::span<const double> ratios) {
  std::vector<double> out(ratios.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) out[i] = acc += ratios[i];
  return out;
}

}  // namespace qembed::pipeline
