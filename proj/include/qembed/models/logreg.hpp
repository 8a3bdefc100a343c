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

#include "qembed/feature_matrix.hpp"
#include "qembed/models/spec.hpp"

namespace qembed::models {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

struct LogisticModel {
  Vector weights;
  double bias = 0.0;
};

struct LossGradient {
  double loss = 0.0;
  Vector grad_w;
  double grad_b = 0.0;
};

/// Mean cross-entropy plus (l2 / 2) * ||w||^2 (bias not penalized), and its
/// analytic gradient.
inline LossGradient logistic_loss_gradient(const Matrix& x, const Labels& y, const Vector& w, double b, double l2) {
  const Eigen::Index n = x.rows();
  const Vector z = (x * w).array() + b;
  Vector residual(n);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double yi = y[static_cast<std::size_t>(i)];
    // -y log p - (1 - y) log(1 - p) with p = sigmoid(z)
    loss += yi ? softplus(-z(i)) : softplus(z(i));
    residual(i) = sigmoid(z(i)) - yi;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  LossGradient out;
  out.loss = loss * inv_n + 0.5 * l2 * w.squaredNorm();
  out.grad_w = x.transpose() * residual * inv_n + l2 * w;
  out.grad_b = residual.sum() * inv_n;
  return out;
}

struct LogRegFit {
  LogisticModel model;
  long iterations = 0;
  bool converged = false;
};

/// Full-batch gradient descent until the gradient's max-norm drops below the
/// tolerance or the epoch cap is hit.
inline LogRegFit fit_logreg(const Matrix& x, const Labels& y, const LogRegParams& p) {
  LogRegFit f;
  f.model.weights = Vector::Zero(x.cols());
  for (int epoch = 0; epoch < p.max_epochs; ++epoch) {
    const auto g = logistic_loss_gradient(x, y, f.model.weights, f.model.bias, p.l2);
    const double gmax = std::max(g.grad_w.size() ? g.grad_w.cwiseAbs().maxCoeff() : 0.0, std::abs(g.grad_b));
    if (gmax < p.gradient_tolerance) {
      f.converged = true;
      break;
    }
    f.model.weights -= p.learning_rate * g.grad_w;
    f.model.bias -= p.learning_rate * g.grad_b;
    ++f.iterations;
  }
  return f;
}

inline double logreg_proba(const LogisticModel& m, const Matrix& x, Eigen::Index r) {
  return sigmoid(x.row(r).dot(m.weights) + m.bias);
}

}  // namespace qembed::models
