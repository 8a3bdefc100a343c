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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qembed/error.hpp"

namespace qembed::models {

enum class ModelKind { logreg, knn, svm, tree, forest, adaboost, gbt };

constexpr std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::logreg: return "logreg";
    case ModelKind::knn: return "knn";
    case ModelKind::svm: return "svm";
    case ModelKind::tree: return "tree";
    case ModelKind::forest: return "forest";
    case ModelKind::adaboost: return "adaboost";
    case ModelKind::gbt: return "gbt";
  }
  return "?";
}

inline ModelKind model_kind_from_string(std::string_view s) {
  for (auto k : {ModelKind::logreg, ModelKind::knn, ModelKind::svm, ModelKind::tree, ModelKind::forest,
                 ModelKind::adaboost, ModelKind::gbt}) {
    if (to_string(k) == s) return k;
  }
  fail(ErrorCode::ConfigError, "unknown model kind '" + std::string(s) + "'");
}

struct KernelFn {
  enum class Kind { linear, polynomial, rbf, sigmoid };
  Kind kind = Kind::rbf;
  int degree = 3;
  std::optional<double> gamma{};  // unset: 1 / n_features, resolved at fit time
  double coef0 = 0.0;

  void validate() const {
    if (gamma && !(*gamma > 0.0)) fail(ErrorCode::InvalidArgument, "kernel gamma must be > 0");
    if (kind == Kind::polynomial && degree < 1) fail(ErrorCode::InvalidArgument, "polynomial degree must be >= 1");
  }
};

constexpr std::string_view to_string(KernelFn::Kind k) {
  switch (k) {
    case KernelFn::Kind::linear: return "linear";
    case KernelFn::Kind::polynomial: return "polynomial";
    case KernelFn::Kind::rbf: return "rbf";
    case KernelFn::Kind::sigmoid: return "sigmoid";
  }
  return "?";
}

inline KernelFn::Kind kernel_kind_from_string(std::string_view s) {
  for (auto k : {KernelFn::Kind::linear, KernelFn::Kind::polynomial, KernelFn::Kind::rbf, KernelFn::Kind::sigmoid}) {
    if (to_string(k) == s) return k;
  }
  fail(ErrorCode::ConfigError, "unknown kernel '" + std::string(s) + "'");
}

struct LogRegParams {
  double learning_rate = 0.1;
  int max_epochs = 5000;
  double l2 = 1e-4;
  double gradient_tolerance = 1e-6;
};

struct KnnParams {
  int k = 5;
};

struct SvmParams {
  KernelFn kernel;
  double c = 1.0;
  double tolerance = 1e-3;
  long max_iterations = 1'000'000;
};

struct TreeParams {
  int max_depth = 8;  // <= 0: unlimited
  int min_leaf = 2;
};

struct ForestParams {
  int n_trees = 100;
  std::optional<double> feature_fraction{};  // unset: sqrt(d) / d
  bool bootstrap = true;
  TreeParams tree;
};

struct AdaBoostParams {
  int n_rounds = 100;
};

struct GbtParams {
  int n_rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_leaf = 1;
};

/// Classifier configuration. Only the parameter block matching `kind` is used.
struct ModelSpec {
  ModelKind kind = ModelKind::logreg;
  std::string name;  // display name; defaults to the kind
  std::uint64_t seed = 0;
  LogRegParams logreg;
  KnnParams knn;
  SvmParams svm;
  TreeParams tree;
  ForestParams forest;
  AdaBoostParams adaboost;
  GbtParams gbt;

  std::string display_name() const { return name.empty() ? std::string(to_string(kind)) : name; }

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) fail(ErrorCode::InvalidArgument, what);
    };
    switch (kind) {
      case ModelKind::logreg:
        require(logreg.learning_rate > 0.0, "logreg learning_rate must be > 0");
        require(logreg.max_epochs >= 1, "logreg max_epochs must be >= 1");
        require(logreg.l2 >= 0.0, "logreg l2 must be >= 0");
        break;
      case ModelKind::knn:
        require(knn.k >= 1, "knn k must be >= 1");
        break;
      case ModelKind::svm:
        require(svm.c > 0.0, "svm C must be > 0");
        require(svm.tolerance > 0.0, "svm tolerance must be > 0");
        require(svm.max_iterations >= 1, "svm max_iterations must be >= 1");
        svm.kernel.validate();
        break;
      case ModelKind::tree:
        require(tree.min_leaf >= 1, "tree min_leaf must be >= 1");
        break;
      case ModelKind::forest:
        require(forest.n_trees >= 1, "forest n_trees must be >= 1");
        require(!forest.feature_fraction || (*forest.feature_fraction > 0.0 && *forest.feature_fraction <= 1.0),
                "forest feature_fraction must be in (0, 1]");
        require(forest.tree.min_leaf >= 1, "forest min_leaf must be >= 1");
        break;
      case ModelKind::adaboost:
        require(adaboost.n_rounds >= 1, "adaboost n_rounds must be >= 1");
        break;
      case ModelKind::gbt:
        require(gbt.n_rounds >= 1, "gbt n_rounds must be >= 1");
        require(gbt.learning_rate > 0.0, "gbt learning_rate must be > 0");
        require(gbt.min_leaf >= 1, "gbt min_leaf must be >= 1");
        break;
    }
  }
};

}  // namespace qembed::models
