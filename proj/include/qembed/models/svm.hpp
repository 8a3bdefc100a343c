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

// Soft-margin kernel SVM trained with SMO on the dual
//   min 0.5 a'Qa - e'a,  0 <= a_i <= C,  y'a = 0,  Q_ij = y_i y_j K(x_i, x_j)
// using second-order working set selection (Fan, Chen and Lin, JMLR 2005),
// the same scheme libsvm uses. Labels are mapped 0 -> -1, 1 -> +1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "qembed/feature_matrix.hpp"
#include "qembed/models/kernel.hpp"
#include "qembed/models/logreg.hpp"
#include "qembed/models/spec.hpp"

namespace qembed::models {

struct SvmModel {
  KernelFn kernel;  // gamma resolved
  Matrix support;   // support vectors, one per row
  std::vector<double> coef;  // alpha_i * y_i
  double rho = 0.0;

  double decision(std::span<const double> x) const {
    double f = -rho;
    for (Eigen::Index i = 0; i < support.rows(); ++i) {
      f += coef[static_cast<std::size_t>(i)] *
           kernel_eval(kernel, std::span<const double>(support.row(i).data(), static_cast<std::size_t>(support.cols())), x);
    }
    return f;
  }
};

struct SvmFit {
  SvmModel model;
  std::vector<double> alpha;  // full dual vector, training order
  long iterations = 0;
  bool converged = false;
};

inline Matrix gram_matrix(const KernelFn& k, const Matrix& x) {
  const Eigen::Index n = x.rows();
  const auto d = static_cast<std::size_t>(x.cols());
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::span<const double> a(x.row(i).data(), d);
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = kernel_eval(k, a, std::span<const double>(x.row(j).data(), d));
    }
  }
  return g;
}

inline SvmFit fit_svm(const Matrix& x, const Labels& labels, const SvmParams& p) {
  constexpr double kTau = 1e-12;
  const auto n = static_cast<std::size_t>(x.rows());
  KernelFn kernel = p.kernel;
  if (!kernel.gamma) kernel.gamma = 1.0 / static_cast<double>(std::max<Eigen::Index>(1, x.cols()));
  const Matrix k = gram_matrix(kernel, x);
  const double c = p.c;

  std::vector<double> y(n), alpha(n, 0.0), grad(n, -1.0);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] ? 1.0 : -1.0;
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); };
  auto upper = [&](std::size_t t) { return alpha[t] >= c; };
  auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  SvmFit fit;
  while (fit.iterations < p.max_iterations) {
    // i: maximal violator in I_up
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0 ? !upper(t) : !lower(t)) {
        const double v = -y[t] * grad[t];
        if (v > gmax) {
          gmax = v;
          i = t;
        }
      }
    }
    // j: second-order choice in I_low
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0 ? lower(t) : upper(t)) continue;
      const double v = y[t] * grad[t];
      gmax2 = std::max(gmax2, v);
      if (i == n) continue;
      const double b = gmax + v;
      if (b > 0.0) {
        double a = k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +
                   k(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(t)) -
                   2.0 * k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
        if (a <= 0.0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj < best) {
          best = obj;
          j = t;
        }
      }
    }
    if (i == n || j == n || gmax + gmax2 < p.tolerance) {
      fit.converged = true;
      break;
    }
    ++fit.iterations;

    const double ai = alpha[i], aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double dai = alpha[i] - ai, daj = alpha[j] - aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(t, i) * dai + q(t, j) * daj;
  }

  // rho from free vectors, or the middle of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum += yg;
    }
  }
  fit.model.rho = n_free > 0 ? sum / static_cast<double>(n_free) : (ub + lb) / 2.0;
  fit.model.kernel = kernel;

  std::vector<Eigen::Index> sv;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      sv.push_back(static_cast<Eigen::Index>(t));
      fit.model.coef.push_back(alpha[t] * y[t]);
    }
  }
  fit.model.support = Matrix(static_cast<Eigen::Index>(sv.size()), x.cols());
  for (std::size_t s = 0; s < sv.size(); ++s) fit.model.support.row(static_cast<Eigen::Index>(s)) = x.row(sv[s]);
  fit.alpha = std::move(alpha);
  return fit;
}

/// Logistic squashing of the decision value.
inline double svm_proba(const SvmModel& m, std::span<const double> x) { return sigmoid(m.decision(x)); }

}  // namespace qembed::models
