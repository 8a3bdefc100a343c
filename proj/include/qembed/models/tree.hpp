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

// CART trees. Classification trees split on weighted Gini impurity and store
// the weighted class-1 fraction in each leaf; regression trees split on
// squared error and store a Newton step sum(g) / sum(h) for gradient boosting.
// Split candidates are midpoints between consecutive distinct sorted values;
// ties go to the lower feature index, then the lower threshold.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "qembed/feature_matrix.hpp"
#include "qembed/models/spec.hpp"

namespace qembed::models {

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  template <typename Row>
  double predict(const Row& row) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
      const TreeNode& n = nodes[static_cast<std::size_t>(i)];
      i = row[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
  }

  double predict_row(const Matrix& x, Eigen::Index r) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
      const TreeNode& n = nodes[static_cast<std::size_t>(i)];
      i = x(r, n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
  }

  int depth(int node = 0) const {
    const TreeNode& n = nodes[static_cast<std::size_t>(node)];
    if (n.feature < 0) return 0;
    return 1 + std::max(depth(n.left), depth(n.right));
  }
};

struct TreeSample {
  std::size_t row = 0;
  double weight = 1.0;
  double target = 0.0;  // class label, or gradient for regression trees
  double hess = 0.0;
};

struct GiniCriterion {
  struct Stats {
    double w = 0.0;
    double wpos = 0.0;
    void add(const TreeSample& s) {
      w += s.weight;
      wpos += s.weight * s.target;
    }
  };
  static Stats diff(const Stats& a, const Stats& b) { return {a.w - b.w, a.wpos - b.wpos}; }
  // Node weight times Gini index.
  static double impurity(const Stats& s) {
    if (s.w <= 0.0) return 0.0;
    const double p = std::clamp(s.wpos / s.w, 0.0, 1.0);
    return s.w * 2.0 * p * (1.0 - p);
  }
  static bool pure(const Stats& s) { return s.wpos <= 0.0 || s.wpos >= s.w; }
  static double leaf_value(const Stats& s, const std::vector<TreeSample>&) {
    return s.w > 0.0 ? std::clamp(s.wpos / s.w, 0.0, 1.0) : 0.5;
  }
};

struct NewtonCriterion {
  struct Stats {
    double w = 0.0;
    double s = 0.0;
    double ss = 0.0;
    void add(const TreeSample& t) {
      w += t.weight;
      s += t.weight * t.target;
      ss += t.weight * t.target * t.target;
    }
  };
  static Stats diff(const Stats& a, const Stats& b) { return {a.w - b.w, a.s - b.s, a.ss - b.ss}; }
  static double impurity(const Stats& st) { return st.w > 0.0 ? std::max(0.0, st.ss - st.s * st.s / st.w) : 0.0; }
  static bool pure(const Stats& st) { return impurity(st) <= 1e-14 * std::max(1.0, st.ss); }
  static double leaf_value(const Stats&, const std::vector<TreeSample>& samples) {
    double g = 0.0, h = 0.0;
    for (const auto& t : samples) {
      g += t.weight * t.target;
      h += t.weight * t.hess;
    }
    return g / std::max(h, 1e-12);
  }
};

template <typename Criterion>
class TreeBuilder {
 public:
  /// max_features == 0 or >= n_features: every feature at every split.
  TreeBuilder(const Matrix& x, TreeParams params, std::size_t max_features = 0, std::mt19937_64* rng = nullptr)
      : x_(x), params_(params), rng_(rng) {
    const auto d = static_cast<std::size_t>(x.cols());
    max_features_ = (max_features == 0 || max_features >= d) ? d : max_features;
  }

  Tree build(std::vector<TreeSample> samples) {
    tree_ = Tree{};
    tree_.nodes.reserve(64);
    grow(std::move(samples), 0);
    return std::move(tree_);
  }

 private:
  struct Candidate {
    int feature = -1;
    double threshold = 0.0;
    double gain = -std::numeric_limits<double>::infinity();
  };

  std::vector<int> candidate_features() {
    const auto d = static_cast<int>(x_.cols());
    std::vector<int> f(static_cast<std::size_t>(d));
    std::iota(f.begin(), f.end(), 0);
    if (max_features_ < f.size() && rng_) {
      for (std::size_t i = 0; i < max_features_; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, f.size() - 1);
        std::swap(f[i], f[pick(*rng_)]);
      }
      f.resize(max_features_);
      std::sort(f.begin(), f.end());
    }
    return f;
  }

  int grow(std::vector<TreeSample> samples, int depth) {
    typename Criterion::Stats total;
    for (const auto& s : samples) total.add(s);
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{-1, 0.0, -1, -1, Criterion::leaf_value(total, samples)});

    const auto n = samples.size();
    const auto min_leaf = static_cast<std::size_t>(params_.min_leaf);
    if ((params_.max_depth > 0 && depth >= params_.max_depth) || n < 2 * min_leaf || Criterion::pure(total)) {
      return id;
    }

    const double parent = Criterion::impurity(total);
    const double eps = 1e-12 * std::max(1.0, parent);
    Candidate best;
    for (int f : candidate_features()) {
      std::sort(samples.begin(), samples.end(), [&](const TreeSample& a, const TreeSample& b) {
        const double va = x_(static_cast<Eigen::Index>(a.row), f);
        const double vb = x_(static_cast<Eigen::Index>(b.row), f);
        return va < vb || (va == vb && a.row < b.row);
      });
      typename Criterion::Stats left;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left.add(samples[i]);
        const double lo = x_(static_cast<Eigen::Index>(samples[i].row), f);
        const double hi = x_(static_cast<Eigen::Index>(samples[i + 1].row), f);
        if (!(lo < hi)) continue;
        if (i + 1 < min_leaf || n - i - 1 < min_leaf) continue;
        const double gain = parent - Criterion::impurity(left) - Criterion::impurity(Criterion::diff(total, left));
        if (gain > best.gain + eps) {
          double thr = lo + (hi - lo) / 2.0;
          if (!(thr < hi)) thr = lo;
          best = Candidate{f, thr, gain};
        }
      }
    }
    if (best.feature < 0) return id;

    std::vector<TreeSample> left_samples, right_samples;
    for (const auto& s : samples) {
      (x_(static_cast<Eigen::Index>(s.row), best.feature) <= best.threshold ? left_samples : right_samples).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();
    const int l = grow(std::move(left_samples), depth + 1);
    const int r = grow(std::move(right_samples), depth + 1);
    TreeNode& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  const Matrix& x_;
  TreeParams params_;
  std::mt19937_64* rng_;
  std::size_t max_features_ = 0;
  Tree tree_;
};

/// Classification tree on rows `rows` (duplicates allowed) with optional
/// per-row weights.
inline Tree fit_classification_tree(const Matrix& x, const Labels& y, const std::vector<std::size_t>& rows,
                                    const std::vector<double>* weights, TreeParams params,
                                    std::size_t max_features = 0, std::mt19937_64* rng = nullptr) {
  std::vector<TreeSample> samples;
  samples.reserve(rows.size());
  for (std::size_t r : rows) {
    samples.push_back(TreeSample{r, weights ? (*weights)[r] : 1.0, static_cast<double>(y[r]), 0.0});
  }
  return TreeBuilder<GiniCriterion>(x, params, max_features, rng).build(std::move(samples));
}

}  // namespace qembed::models
