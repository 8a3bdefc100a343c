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

#include <chrono>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qembed/error.hpp"
#include "qembed/feature_matrix.hpp"
#include "qembed/models/ensemble.hpp"
#include "qembed/models/kernel.hpp"
#include "qembed/models/knn.hpp"
#include "qembed/models/logreg.hpp"
#include "qembed/models/spec.hpp"
#include "qembed/models/svm.hpp"
#include "qembed/models/tree.hpp"

namespace qembed::models {

struct TreeModel {
  Tree tree;
};

using FittedParams = std::variant<LogisticModel, KnnModel, SvmModel, TreeModel, ForestModel, AdaBoostModel, GbtModel>;

struct TrainedModel {
  ModelSpec spec;
  std::size_t n_features = 0;
  FittedParams params;
  long iterations = 0;  // epochs, SMO steps, trees or rounds
  bool converged = true;
  double fit_ms = 0.0;
};

namespace detail {

inline void check_finite(const Matrix& x) {
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (!std::isfinite(x(r, c))) {
        fail(ErrorCode::NonFiniteFeature,
             "feature (" + std::to_string(r) + ", " + std::to_string(c) + ") is not finite");
      }
    }
  }
}

}  // namespace detail

inline TrainedModel fit(const ModelSpec& spec, const Matrix& x, const Labels& y) {
  spec.validate();
  if (x.rows() == 0) fail(ErrorCode::EmptyInput, "no training rows");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    fail(ErrorCode::LengthMismatch, "feature rows and labels differ in length");
  }
  std::size_t pos = 0;
  for (int v : y) {
    if (v != 0 && v != 1) fail(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    pos += static_cast<std::size_t>(v);
  }
  if (pos == 0 || pos == y.size()) fail(ErrorCode::SingleClass, "training labels contain a single class");
  detail::check_finite(x);

  const auto start = std::chrono::steady_clock::now();
  TrainedModel m;
  m.spec = spec;
  m.n_features = static_cast<std::size_t>(x.cols());
  switch (spec.kind) {
    case ModelKind::logreg: {
      auto f = fit_logreg(x, y, spec.logreg);
      m.params = std::move(f.model);
      m.iterations = f.iterations;
      m.converged = f.converged;
      break;
    }
    case ModelKind::knn:
      m.params = KnnModel{x, y, spec.knn.k};
      break;
    case ModelKind::svm: {
      auto f = fit_svm(x, y, spec.svm);
      m.params = std::move(f.model);
      m.iterations = f.iterations;
      m.converged = f.converged;
      break;
    }
    case ModelKind::tree: {
      std::vector<std::size_t> rows(y.size());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      m.params = TreeModel{fit_classification_tree(x, y, rows, nullptr, spec.tree)};
      break;
    }
    case ModelKind::forest:
      m.params = fit_forest(x, y, spec.forest, spec.seed);
      m.iterations = spec.forest.n_trees;
      break;
    case ModelKind::adaboost: {
      auto f = fit_adaboost(x, y, spec.adaboost);
      m.iterations = f.rounds;
      m.params = std::move(f.model);
      break;
    }
    case ModelKind::gbt: {
      auto f = fit_gbt(x, y, spec.gbt);
      m.iterations = static_cast<long>(f.model.trees.size());
      m.params = std::move(f.model);
      break;
    }
  }
  m.fit_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return m;
}

inline TrainedModel fit(const ModelSpec& spec, const FeatureMatrix& data) { return fit(spec, data.values, data.labels); }

/// P(class = 1) per row.
inline std::vector<double> predict_proba(const TrainedModel& m, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != m.n_features) {
    fail(ErrorCode::DimensionMismatch, "model expects " + std::to_string(m.n_features) + " features, got " +
                                           std::to_string(x.cols()));
  }
  detail::check_finite(x);
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
          double v;
          if constexpr (std::is_same_v<T, LogisticModel>) {
            v = logreg_proba(p, x, r);
          } else if constexpr (std::is_same_v<T, KnnModel>) {
            v = knn_proba(p, x, r);
          } else if constexpr (std::is_same_v<T, SvmModel>) {
            v = svm_proba(p, std::span<const double>(x.row(r).data(), static_cast<std::size_t>(x.cols())));
          } else if constexpr (std::is_same_v<T, TreeModel>) {
            v = p.tree.predict_row(x, r);
          } else {
            v = p.proba(x, r);
          }
          out[static_cast<std::size_t>(r)] = v;
        }
      },
      m.params);
  return out;
}

inline std::vector<double> predict_proba(const TrainedModel& m, const FeatureMatrix& data) {
  return predict_proba(m, data.values);
}

// ---- JSON ----

using nlohmann::json;

inline json spec_to_json(const ModelSpec& s) {
  json j;
  j["kind"] = std::string(to_string(s.kind));
  if (!s.name.empty()) j["name"] = s.name;
  j["seed"] = s.seed;
  switch (s.kind) {
    case ModelKind::logreg:
      j["learning_rate"] = s.logreg.learning_rate;
      j["max_epochs"] = s.logreg.max_epochs;
      j["l2"] = s.logreg.l2;
      j["gradient_tolerance"] = s.logreg.gradient_tolerance;
      break;
    case ModelKind::knn:
      j["k"] = s.knn.k;
      break;
    case ModelKind::svm:
      j["c"] = s.svm.c;
      j["kernel"] = std::string(to_string(s.svm.kernel.kind));
      j["degree"] = s.svm.kernel.degree;
      if (s.svm.kernel.gamma) j["gamma"] = *s.svm.kernel.gamma;
      j["coef0"] = s.svm.kernel.coef0;
      j["tolerance"] = s.svm.tolerance;
      j["max_iterations"] = s.svm.max_iterations;
      break;
    case ModelKind::tree:
      j["max_depth"] = s.tree.max_depth;
      j["min_leaf"] = s.tree.min_leaf;
      break;
    case ModelKind::forest:
      j["n_trees"] = s.forest.n_trees;
      if (s.forest.feature_fraction) j["feature_fraction"] = *s.forest.feature_fraction;
      j["bootstrap"] = s.forest.bootstrap;
      j["max_depth"] = s.forest.tree.max_depth;
      j["min_leaf"] = s.forest.tree.min_leaf;
      break;
    case ModelKind::adaboost:
      j["n_rounds"] = s.adaboost.n_rounds;
      break;
    case ModelKind::gbt:
      j["n_rounds"] = s.gbt.n_rounds;
      j["learning_rate"] = s.gbt.learning_rate;
      j["max_depth"] = s.gbt.max_depth;
      j["min_leaf"] = s.gbt.min_leaf;
      break;
  }
  return j;
}

/// Parses a model entry. Keys not used by the entry's kind are a ConfigError
/// so typos don't silently fall back to defaults.
inline ModelSpec spec_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::ConfigError, "model entry must be an object");
  if (!j.contains("kind") || !j["kind"].is_string()) fail(ErrorCode::ConfigError, "model entry needs a string 'kind'");
  ModelSpec s;
  s.kind = model_kind_from_string(j["kind"].get<std::string>());
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "kind") continue;
      if (key == "name") { s.name = v.get<std::string>(); continue; }
      if (key == "seed") { s.seed = v.get<std::uint64_t>(); continue; }
      bool known = true;
      switch (s.kind) {
        case ModelKind::logreg:
          if (key == "learning_rate") s.logreg.learning_rate = v.get<double>();
          else if (key == "max_epochs") s.logreg.max_epochs = v.get<int>();
          else if (key == "l2") s.logreg.l2 = v.get<double>();
          else if (key == "gradient_tolerance") s.logreg.gradient_tolerance = v.get<double>();
          else known = false;
          break;
        case ModelKind::knn:
          if (key == "k") s.knn.k = v.get<int>();
          else known = false;
          break;
        case ModelKind::svm:
          if (key == "c" || key == "C") s.svm.c = v.get<double>();
          else if (key == "kernel") s.svm.kernel.kind = kernel_kind_from_string(v.get<std::string>());
          else if (key == "degree") s.svm.kernel.degree = v.get<int>();
          else if (key == "gamma") s.svm.kernel.gamma = v.get<double>();
          else if (key == "coef0") s.svm.kernel.coef0 = v.get<double>();
          else if (key == "tolerance") s.svm.tolerance = v.get<double>();
          else if (key == "max_iterations") s.svm.max_iterations = v.get<long>();
          else known = false;
          break;
        case ModelKind::tree:
          if (key == "max_depth") s.tree.max_depth = v.get<int>();
          else if (key == "min_leaf") s.tree.min_leaf = v.get<int>();
          else known = false;
          break;
        case ModelKind::forest:
          if (key == "n_trees") s.forest.n_trees = v.get<int>();
          else if (key == "feature_fraction") s.forest.feature_fraction = v.get<double>();
          else if (key == "bootstrap") s.forest.bootstrap = v.get<bool>();
          else if (key == "max_depth") s.forest.tree.max_depth = v.get<int>();
          else if (key == "min_leaf") s.forest.tree.min_leaf = v.get<int>();
          else known = false;
          break;
        case ModelKind::adaboost:
          if (key == "n_rounds") s.adaboost.n_rounds = v.get<int>();
          else known = false;
          break;
        case ModelKind::gbt:
          if (key == "n_rounds") s.gbt.n_rounds = v.get<int>();
          else if (key == "learning_rate") s.gbt.learning_rate = v.get<double>();
          else if (key == "max_depth") s.gbt.max_depth = v.get<int>();
          else if (key == "min_leaf") s.gbt.min_leaf = v.get<int>();
          else known = false;
          break;
      }
      if (!known) fail(ErrorCode::ConfigError, "unknown key '" + key + "' for model kind " + std::string(to_string(s.kind)));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("bad model entry: ") + e.what());
  }
  try {
    s.validate();
  } catch (const Error& e) {
    fail(ErrorCode::ConfigError, e.what());
  }
  return s;
}

namespace detail {

inline json tree_to_json(const Tree& t, int node = 0) {
  const TreeNode& n = t.nodes[static_cast<std::size_t>(node)];
  if (n.feature < 0) return json{{"value", n.value}};
  return json{{"feature", n.feature},
              {"threshold", n.threshold},
              {"value", n.value},
              {"left", tree_to_json(t, n.left)},
              {"right", tree_to_json(t, n.right)}};
}

inline int tree_from_json(const json& j, Tree& t) {
  const int id = static_cast<int>(t.nodes.size());
  t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, j.at("value").get<double>()});
  if (j.contains("feature")) {
    const int l = tree_from_json(j.at("left"), t);
    const int r = tree_from_json(j.at("right"), t);
    TreeNode& n = t.nodes[static_cast<std::size_t>(id)];
    n.feature = j.at("feature").get<int>();
    n.threshold = j.at("threshold").get<double>();
    n.left = l;
    n.right = r;
  }
  return id;
}

inline Tree tree_from_json(const json& j) {
  Tree t;
  tree_from_json(j, t);
  return t;
}

inline json trees_to_json(const std::vector<Tree>& ts) {
  json a = json::array();
  for (const auto& t : ts) a.push_back(tree_to_json(t));
  return a;
}

inline std::vector<Tree> trees_from_json(const json& a) {
  std::vector<Tree> out;
  for (const auto& j : a) out.push_back(tree_from_json(j));
  return out;
}

inline json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

inline Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) fail(ErrorCode::InvalidArgument, "matrix data size mismatch");
  Matrix m(rows, cols);
  std::copy(data.begin(), data.end(), m.data());
  return m;
}

}  // namespace detail

inline json to_json(const TrainedModel& m) {
  json j;
  j["spec"] = spec_to_json(m.spec);
  j["n_features"] = m.n_features;
  j["iterations"] = m.iterations;
  j["converged"] = m.converged;
  j["fit_ms"] = m.fit_ms;
  json p;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LogisticModel>) {
          p["weights"] = std::vector<double>(v.weights.data(), v.weights.data() + v.weights.size());
          p["bias"] = v.bias;
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          p["train"] = detail::matrix_to_json(v.train);
          p["labels"] = v.labels;
          p["k"] = v.k;
        } else if constexpr (std::is_same_v<T, SvmModel>) {
          p["gamma"] = v.kernel.gamma.value_or(1.0);
          p["support"] = detail::matrix_to_json(v.support);
          p["coef"] = v.coef;
          p["rho"] = v.rho;
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          p["tree"] = detail::tree_to_json(v.tree);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          p["trees"] = detail::trees_to_json(v.trees);
        } else if constexpr (std::is_same_v<T, AdaBoostModel>) {
          p["stumps"] = detail::trees_to_json(v.stumps);
          p["alphas"] = v.alphas;
        } else {
          p["base_score"] = v.base_score;
          p["trees"] = detail::trees_to_json(v.trees);
          p["steps"] = v.steps;
        }
      },
      m.params);
  j["params"] = std::move(p);
  return j;
}

inline TrainedModel model_from_json(const json& j) {
  TrainedModel m;
  try {
    m.spec = spec_from_json(j.at("spec"));
    m.n_features = j.at("n_features").get<std::size_t>();
    m.iterations = j.at("iterations").get<long>();
    m.converged = j.at("converged").get<bool>();
    m.fit_ms = j.at("fit_ms").get<double>();
    const json& p = j.at("params");
    switch (m.spec.kind) {
      case ModelKind::logreg: {
        const auto w = p.at("weights").get<std::vector<double>>();
        LogisticModel lm;
        lm.weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
        lm.bias = p.at("bias").get<double>();
        m.params = std::move(lm);
        break;
      }
      case ModelKind::knn:
        m.params = KnnModel{detail::matrix_from_json(p.at("train")), p.at("labels").get<Labels>(), p.at("k").get<int>()};
        break;
      case ModelKind::svm: {
        SvmModel sm;
        sm.kernel = m.spec.svm.kernel;
        sm.kernel.gamma = p.at("gamma").get<double>();
        sm.support = detail::matrix_from_json(p.at("support"));
        sm.coef = p.at("coef").get<std::vector<double>>();
        sm.rho = p.at("rho").get<double>();
        m.params = std::move(sm);
        break;
      }
      case ModelKind::tree:
        m.params = TreeModel{detail::tree_from_json(p.at("tree"))};
        break;
      case ModelKind::forest:
        m.params = ForestModel{detail::trees_from_json(p.at("trees"))};
        break;
      case ModelKind::adaboost:
        m.params = AdaBoostModel{detail::trees_from_json(p.at("stumps")), p.at("alphas").get<std::vector<double>>()};
        break;
      case ModelKind::gbt:
        m.params = GbtModel{p.at("base_score").get<double>(), detail::trees_from_json(p.at("trees")),
                            p.at("steps").get<std::vector<double>>()};
        break;
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("bad model document: ") + e.what());
  }
  return m;
}

}  // namespace qembed::models
