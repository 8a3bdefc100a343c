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
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "qembed/feature_matrix.hpp"
#include "qembed/models/logreg.hpp"
#include "qembed/models/spec.hpp"
#include "qembed/models/tree.hpp"

namespace qembed::models {

/// Seed for ensemble member `i`; keeps members independent of each other's
/// draw counts.
inline std::uint64_t member_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---- random forest ----

struct ForestModel {
  std::vector<Tree> trees;

  double proba(const Matrix& x, Eigen::Index r) const {
    double s = 0.0;
    for (const auto& t : trees) s += t.predict_row(x, r);
    return s / static_cast<double>(trees.size());
  }
};

inline std::size_t forest_max_features(const ForestParams& p, std::size_t d) {
  const double frac = p.feature_fraction.value_or(std::sqrt(static_cast<double>(d)) / static_cast<double>(d));
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(frac * static_cast<double>(d))), 1, d);
}

inline ForestModel fit_forest(const Matrix& x, const Labels& y, const ForestParams& p, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.rows());
  const std::size_t max_features = forest_max_features(p, static_cast<std::size_t>(x.cols()));
  ForestModel m;
  m.trees.reserve(static_cast<std::size_t>(p.n_trees));
  for (int t = 0; t < p.n_trees; ++t) {
    std::mt19937_64 rng(member_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> rows(n);
    if (p.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (auto& r : rows) r = pick(rng);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    m.trees.push_back(fit_classification_tree(x, y, rows, nullptr, p.tree, max_features, &rng));
  }
  return m;
}

// ---- AdaBoost (SAMME, two classes, depth-1 stumps) ----

struct AdaBoostModel {
  std::vector<Tree> stumps;
  std::vector<double> alphas;

  /// Weighted vote mapped from [-1, 1] to [0, 1].
  double proba(const Matrix& x, Eigen::Index r) const {
    double score = 0.0, total = 0.0;
    for (std::size_t m = 0; m < stumps.size(); ++m) {
      const double h = stumps[m].predict_row(x, r) > 0.5 ? 1.0 : -1.0;
      score += alphas[m] * h;
      total += alphas[m];
    }
    if (total <= 0.0) return 0.5;
    return std::clamp((score / total + 1.0) / 2.0, 0.0, 1.0);
  }
};

struct AdaBoostFit {
  AdaBoostModel model;
  std::vector<double> weight_sums;  // sample weight total after each round
  int rounds = 0;
};

inline AdaBoostFit fit_adaboost(const Matrix& x, const Labels& y, const AdaBoostParams& p) {
  constexpr double kMinError = 1e-10;
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const TreeParams stump{1, 1};

  AdaBoostFit fit;
  for (int round = 0; round < p.n_rounds; ++round) {
    Tree t = fit_classification_tree(x, y, rows, &w, stump);
    std::vector<bool> wrong(n);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      wrong[i] = (t.predict_row(x, static_cast<Eigen::Index>(i)) > 0.5 ? 1 : 0) != y[i];
      if (wrong[i]) err += w[i];
    }
    ++fit.rounds;
    // No better than chance on two classes: this learner adds nothing.
    if (err >= 0.5) break;
    const double e = std::max(err, kMinError);
    const double a = std::log((1.0 - e) / e);
    fit.model.stumps.push_back(std::move(t));
    fit.model.alphas.push_back(a);
    if (err <= 0.0) {
      fit.weight_sums.push_back(1.0);
      break;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (wrong[i]) w[i] *= std::exp(a);
      total += w[i];
    }
    for (auto& v : w) v /= total;
    fit.weight_sums.push_back(std::accumulate(w.begin(), w.end(), 0.0));
  }
  return fit;
}

// ---- gradient-boosted trees on log-loss ----

struct GbtModel {
  double base_score = 0.0;  // initial log-odds
  std::vector<Tree> trees;
  std::vector<double> steps;  // learning rate times any backtracking factor

  double margin(const Matrix& x, Eigen::Index r) const {
    double f = base_score;
    for (std::size_t m = 0; m < trees.size(); ++m) f += steps[m] * trees[m].predict_row(x, r);
    return f;
  }
  double proba(const Matrix& x, Eigen::Index r) const { return sigmoid(margin(x, r)); }
};

struct GbtFit {
  GbtModel model;
  std::vector<double> losses;  // training log-loss; [0] is the base score, then one per round
};

inline double mean_log_loss(const std::vector<double>& f, const Labels& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += y[i] ? softplus(-f[i]) : softplus(f[i]);
  return s / static_cast<double>(f.size());
}

/// Each round fits a regression tree to the residuals y - p and sets leaf
/// values by one Newton step. If the shrunken step raises the training loss
/// it is halved until it does not (at most 30 times, then dropped).
inline GbtFit fit_gbt(const Matrix& x, const Labels& y, const GbtParams& p) {
  const auto n = static_cast<std::size_t>(x.rows());
  const double pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
  GbtFit fit;
  fit.model.base_score = std::log(pos / (static_cast<double>(n) - pos));
  std::vector<double> f(n, fit.model.base_score), trial(n), leaf(n);
  double loss = mean_log_loss(f, y);
  fit.losses.push_back(loss);

  const TreeParams tp{p.max_depth, p.min_leaf};
  for (int round = 0; round < p.n_rounds; ++round) {
    std::vector<TreeSample> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double pi = sigmoid(f[i]);
      samples[i] = TreeSample{i, 1.0, static_cast<double>(y[i]) - pi, pi * (1.0 - pi)};
    }
    Tree t = TreeBuilder<NewtonCriterion>(x, tp).build(std::move(samples));
    for (std::size_t i = 0; i < n; ++i) leaf[i] = t.predict_row(x, static_cast<Eigen::Index>(i));

    double step = p.learning_rate;
    double next = loss;
    bool accepted = false;
    for (int halvings = 0; halvings <= 30; ++halvings, step /= 2.0) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = f[i] + step * leaf[i];
      next = mean_log_loss(trial, y);
      if (next <= loss) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      step = 0.0;
      next = loss;
    } else {
      f.swap(trial);
    }
    fit.model.trees.push_back(std::move(t));
    fit.model.steps.push_back(step);
    loss = next;
    fit.losses.push_back(loss);
  }
  return fit;
}

}  // namespace qembed::models
