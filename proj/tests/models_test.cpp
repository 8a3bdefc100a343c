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

#include "qembed/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

namespace qembed::models {
namespace {

template <typename F>
ErrorCode error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

struct Data {
  Matrix x;
  Labels y;
};

// Two noisy classes split by a random hyperplane; both classes guaranteed.
Data random_data(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d, double noise = 0.5) {
  std::normal_distribution<double> g(0.0, 1.0);
  Data out{Matrix(n, d), Labels(static_cast<std::size_t>(n))};
  Vector w(d);
  for (auto& v : w) v = g(rng);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) out.x(r, c) = g(rng);
    out.y[static_cast<std::size_t>(r)] = out.x.row(r).dot(w) + noise * g(rng) > 0.0 ? 1 : 0;
  }
  out.y[0] = 0;
  out.y[1] = 1;
  return out;
}

double accuracy(const std::vector<double>& p, const Labels& y) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += ((p[i] >= 0.5 ? 1 : 0) == y[i]);
  return static_cast<double>(ok) / static_cast<double>(y.size());
}

ModelSpec spec_of(ModelKind k) {
  ModelSpec s;
  s.kind = k;
  s.seed = 7;
  s.forest.n_trees = 15;
  s.adaboost.n_rounds = 20;
  s.gbt.n_rounds = 20;
  return s;
}

const ModelKind kAllKinds[] = {ModelKind::logreg, ModelKind::knn,      ModelKind::svm, ModelKind::tree,
                               ModelKind::forest, ModelKind::adaboost, ModelKind::gbt};

// ---- kernel_eval ----

TEST(Kernel, RbfOfIdenticalPointsIsOne) {
  KernelFn k{.kind = KernelFn::Kind::rbf, .gamma = 1.0};
  const std::vector<double> a{0.3, -1.2, 4.0};
  EXPECT_DOUBLE_EQ(kernel_eval(k, a, a), 1.0);
}

TEST(Kernel, LinearOrthogonalIsZero) {
  KernelFn k{.kind = KernelFn::Kind::linear};
  const std::vector<double> a{1.0, 0.0}, b{0.0, 1.0};
  EXPECT_EQ(kernel_eval(k, a, b), 0.0);
}

TEST(Kernel, PolynomialDegreeTwo) {
  KernelFn k{.kind = KernelFn::Kind::polynomial, .degree = 2, .gamma = 1.0};
  const std::vector<double> a{1.0, 2.0}, b{3.0, 4.0};
  EXPECT_DOUBLE_EQ(kernel_eval(k, a, b), 121.0);
}

TEST(Kernel, SigmoidMatchesTanh) {
  KernelFn k{.kind = KernelFn::Kind::sigmoid, .gamma = 0.5, .coef0 = -0.25};
  const std::vector<double> a{1.0, 2.0}, b{3.0, 4.0};
  EXPECT_DOUBLE_EQ(kernel_eval(k, a, b), std::tanh(0.5 * 11.0 - 0.25));
}

TEST(Kernel, LengthMismatch) {
  KernelFn k;
  const std::vector<double> a{1.0, 2.0}, b{3.0};
  EXPECT_EQ(error_code([&] { kernel_eval(k, a, b); }), ErrorCode::LengthMismatch);
}

TEST(Kernel, RbfGramIsSymmetricPsd) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0), gam(0.05, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix x(20, 4);
    for (auto& v : x.reshaped()) v = u(rng);
    KernelFn k{.kind = KernelFn::Kind::rbf, .gamma = gam(rng)};
    const Matrix g = gram_matrix(k, x);
    ASSERT_EQ((g - g.transpose()).cwiseAbs().maxCoeff(), 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(g), Eigen::EigenvaluesOnly);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-8);
  }
}

// ---- fit / predict_proba examples ----

TEST(Fit, LogregSymmetricPair) {
  Matrix x(2, 1);
  x << -1.0, 1.0;
  const Labels y{0, 1};
  const auto m = fit(spec_of(ModelKind::logreg), x, y);
  EXPECT_EQ(accuracy(predict_proba(m, x), y), 1.0);
  const auto& lm = std::get<LogisticModel>(m.params);
  EXPECT_NEAR(-lm.bias / lm.weights(0), 0.0, 1e-9);  // decision boundary
  Matrix mid(1, 1);
  mid << 0.0;
  EXPECT_NEAR(predict_proba(m, mid)[0], 0.5, 1e-9);
}

TEST(Fit, LogregZeroWeightsGiveHalf) {
  TrainedModel m;
  m.n_features = 3;
  m.params = LogisticModel{Vector::Zero(3), 0.0};
  std::mt19937_64 rng(1);
  const auto d = random_data(rng, 10, 3);
  for (double p : predict_proba(m, d.x)) EXPECT_EQ(p, 0.5);
}

TEST(Fit, Knn1IsPerfectOnTraining) {
  std::mt19937_64 rng(2);
  const auto d = random_data(rng, 60, 3, 3.0);
  auto s = spec_of(ModelKind::knn);
  s.knn.k = 1;
  EXPECT_EQ(accuracy(predict_proba(fit(s, d.x, d.y), d.x), d.y), 1.0);
}

TEST(Fit, Knn3VoteFraction) {
  Matrix x(4, 1);
  x << 0.0, 1.0, 2.0, 10.0;
  const Labels y{1, 1, 0, 0};
  auto s = spec_of(ModelKind::knn);
  s.knn.k = 3;
  Matrix q(1, 1);
  q << 0.9;
  EXPECT_DOUBLE_EQ(predict_proba(fit(s, x, y), q)[0], 2.0 / 3.0);
}

TEST(Fit, KnnDistanceTiesGoToLowerRow) {
  Matrix x(3, 1);
  x << -1.0, 1.0, 5.0;
  const Labels y{0, 1, 1};
  auto s = spec_of(ModelKind::knn);
  s.knn.k = 1;
  Matrix q(1, 1);
  q << 0.0;
  EXPECT_EQ(predict_proba(fit(s, x, y), q)[0], 0.0);
}

TEST(Fit, UnlimitedTreeIsolatesDistinctRows) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    auto d = random_data(rng, 8, 2);
    for (std::size_t i = 2; i < d.y.size(); ++i) d.y[i] = coin(rng);
    auto s = spec_of(ModelKind::tree);
    s.tree.max_depth = 0;
    s.tree.min_leaf = 1;
    EXPECT_EQ(accuracy(predict_proba(fit(s, d.x, d.y), d.x), d.y), 1.0);
  }
}

TEST(Fit, AdaBoostSingleStumpScore) {
  Matrix x(4, 1);
  x << 0.0, 1.0, 2.0, 3.0;
  const Labels y{0, 0, 1, 1};
  auto s = spec_of(ModelKind::adaboost);
  s.adaboost.n_rounds = 1;
  const auto m = fit(s, x, y);
  const auto& ab = std::get<AdaBoostModel>(m.params);
  ASSERT_EQ(ab.stumps.size(), 1u);
  // One stump voting +1 with weight a: (a * 1 / a + 1) / 2 = 1.
  const auto p = predict_proba(m, x);
  EXPECT_EQ(p[3], 1.0);
  EXPECT_EQ(p[0], 0.0);
  EXPECT_GT(p[2], 0.5);
}

TEST(Fit, AdaBoostMarginMatchesHandComputedScore) {
  AdaBoostModel ab;
  Tree pos, neg;
  pos.nodes = {TreeNode{-1, 0.0, -1, -1, 1.0}};
  neg.nodes = {TreeNode{-1, 0.0, -1, -1, 0.0}};
  ab.stumps = {pos, neg};
  ab.alphas = {2.0, 0.5};
  TrainedModel m;
  m.n_features = 1;
  m.params = ab;
  Matrix x(1, 1);
  x << 0.0;
  EXPECT_DOUBLE_EQ(predict_proba(m, x)[0], ((2.0 - 0.5) / 2.5 + 1.0) / 2.0);
}

TEST(Fit, SvmSeparatesSeparableData) {
  std::mt19937_64 rng(4);
  const auto d = random_data(rng, 80, 2, 0.0);
  auto s = spec_of(ModelKind::svm);
  s.svm.kernel.kind = KernelFn::Kind::linear;
  s.svm.c = 100.0;
  const auto m = fit(s, d.x, d.y);
  EXPECT_TRUE(m.converged);
  EXPECT_GE(accuracy(predict_proba(m, d.x), d.y), 0.97);
}

TEST(Fit, EveryKindLearnsEasyData) {
  std::mt19937_64 rng(5);
  const auto d = random_data(rng, 200, 3, 0.1);
  for (auto k : kAllKinds) {
    const auto m = fit(spec_of(k), d.x, d.y);
    EXPECT_GE(accuracy(predict_proba(m, d.x), d.y), 0.85) << to_string(k);
  }
}

TEST(Fit, ProbabilitiesInUnitInterval) {
  std::mt19937_64 rng(6);
  const auto d = random_data(rng, 120, 4, 1.0);
  const auto q = random_data(rng, 50, 4, 1.0);
  for (auto k : kAllKinds) {
    const auto m = fit(spec_of(k), d.x, d.y);
    for (double p : predict_proba(m, q.x)) {
      EXPECT_GE(p, 0.0) << to_string(k);
      EXPECT_LE(p, 1.0) << to_string(k);
      EXPECT_NEAR(p + (1.0 - p), 1.0, 1e-9);
    }
  }
}

// ---- errors ----

TEST(Errors, SingleClass) {
  Matrix x(3, 1);
  x << 1.0, 2.0, 3.0;
  EXPECT_EQ(error_code([&] { fit(spec_of(ModelKind::tree), x, Labels{1, 1, 1}); }), ErrorCode::SingleClass);
}

TEST(Errors, NonFiniteFeature) {
  Matrix x(2, 1);
  x << 1.0, std::nan("");
  EXPECT_EQ(error_code([&] { fit(spec_of(ModelKind::logreg), x, Labels{0, 1}); }), ErrorCode::NonFiniteFeature);
}

TEST(Errors, DimensionMismatch) {
  Matrix x(2, 1);
  x << -1.0, 1.0;
  const auto m = fit(spec_of(ModelKind::knn), x, Labels{0, 1});
  EXPECT_EQ(error_code([&] { predict_proba(m, Matrix::Zero(1, 2)); }), ErrorCode::DimensionMismatch);
}

TEST(Errors, LabelLengthMismatch) {
  EXPECT_EQ(error_code([&] { fit(spec_of(ModelKind::knn), Matrix::Zero(3, 1), Labels{0, 1}); }),
            ErrorCode::LengthMismatch);
}

TEST(Errors, InvalidHyperparameters) {
  auto s = spec_of(ModelKind::knn);
  s.knn.k = 0;
  EXPECT_EQ(error_code([&] { s.validate(); }), ErrorCode::InvalidArgument);
  s = spec_of(ModelKind::svm);
  s.svm.c = 0.0;
  EXPECT_EQ(error_code([&] { s.validate(); }), ErrorCode::InvalidArgument);
  s.svm.c = 1.0;
  s.svm.kernel.gamma = -1.0;
  EXPECT_EQ(error_code([&] { s.validate(); }), ErrorCode::InvalidArgument);
  s.svm.kernel = KernelFn{.kind = KernelFn::Kind::polynomial, .degree = 0};
  EXPECT_EQ(error_code([&] { s.validate(); }), ErrorCode::InvalidArgument);
}

TEST(Errors, SpecJson) {
  EXPECT_EQ(error_code([] { spec_from_json(json{{"kind", "perceptron"}}); }), ErrorCode::ConfigError);
  EXPECT_EQ(error_code([] { spec_from_json(json{{"kind", "knn"}, {"C", 1.0}}); }), ErrorCode::ConfigError);
  EXPECT_EQ(error_code([] { spec_from_json(json{{"kind", "knn"}, {"k", 0}}); }), ErrorCode::ConfigError);
  EXPECT_EQ(error_code([] { spec_from_json(json{{"kind", "knn"}, {"k", "five"}}); }), ErrorCode::ConfigError);
}

// ---- properties ----

TEST(Property, LogregGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  constexpr double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_data(rng, 12, 4, 1.0);
    Vector w(4);
    for (auto& v : w) v = g(rng);
    const double b = g(rng), l2 = 0.01;
    const auto an = logistic_loss_gradient(d.x, d.y, w, b, l2);
    Vector num(5);
    for (int i = 0; i < 4; ++i) {
      Vector wp = w, wm = w;
      wp(i) += h;
      wm(i) -= h;
      num(i) = (logistic_loss_gradient(d.x, d.y, wp, b, l2).loss - logistic_loss_gradient(d.x, d.y, wm, b, l2).loss) /
               (2 * h);
    }
    num(4) = (logistic_loss_gradient(d.x, d.y, w, b + h, l2).loss - logistic_loss_gradient(d.x, d.y, w, b - h, l2).loss) /
             (2 * h);
    Vector ana(5);
    ana << an.grad_w, an.grad_b;
    EXPECT_LT((num - ana).norm() / std::max(1e-12, ana.norm()), 1e-4);
  }
}

TEST(Property, SvmDualFeasibility) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> cdist(0.1, 10.0);
  const KernelFn kernels[] = {{.kind = KernelFn::Kind::linear},
                              {.kind = KernelFn::Kind::rbf},
                              {.kind = KernelFn::Kind::polynomial, .degree = 2, .gamma = 0.5, .coef0 = 1.0},
                              {.kind = KernelFn::Kind::sigmoid, .gamma = 0.1}};
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = random_data(rng, 50, 3, 1.0);
    SvmParams p;
    p.kernel = kernels[trial % 4];
    p.c = cdist(rng);
    const auto f = fit_svm(d.x, d.y, p);
    ASSERT_TRUE(f.converged);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.alpha.size(); ++i) {
      EXPECT_GE(f.alpha[i], 0.0);
      EXPECT_LE(f.alpha[i], p.c);
      sum += f.alpha[i] * (d.y[i] ? 1.0 : -1.0);
    }
    EXPECT_LT(std::abs(sum), 1e-6);
  }
}

TEST(Property, ForestOfOneTreeEqualsTree) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = random_data(rng, 80, 5, 1.0);
    auto ts = spec_of(ModelKind::tree);
    auto fs = spec_of(ModelKind::forest);
    fs.forest.n_trees = 1;
    fs.forest.feature_fraction = 1.0;
    fs.forest.bootstrap = false;
    fs.forest.tree = ts.tree;
    EXPECT_EQ(predict_proba(fit(ts, d.x, d.y), d.x), predict_proba(fit(fs, d.x, d.y), d.x));
  }
}

TEST(Property, AdaBoostWeightsStayNormalized) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = random_data(rng, 100, 3, 2.0);
    const auto f = fit_adaboost(d.x, d.y, AdaBoostParams{50});
    ASSERT_FALSE(f.weight_sums.empty());
    for (double s : f.weight_sums) EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Property, GbtTrainingLossNonincreasing) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> lr(0.05, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = random_data(rng, 80, 3, 3.0);
    GbtParams p;
    p.n_rounds = 30;
    p.learning_rate = lr(rng);
    const auto f = fit_gbt(d.x, d.y, p);
    ASSERT_EQ(f.losses.size(), 31u);
    for (std::size_t i = 1; i < f.losses.size(); ++i) EXPECT_LE(f.losses[i], f.losses[i - 1]);
    EXPECT_LT(f.losses.back(), f.losses.front());
  }
}

TEST(Property, Deterministic) {
  std::mt19937_64 rng(26);
  const auto d = random_data(rng, 100, 4, 1.0);
  for (auto k : kAllKinds) {
    EXPECT_EQ(predict_proba(fit(spec_of(k), d.x, d.y), d.x), predict_proba(fit(spec_of(k), d.x, d.y), d.x))
        << to_string(k);
  }
}

TEST(Property, ForestSeedMatters) {
  std::mt19937_64 rng(27);
  const auto d = random_data(rng, 100, 6, 1.0);
  auto a = spec_of(ModelKind::forest), b = a;
  b.seed = a.seed + 1;
  EXPECT_NE(predict_proba(fit(a, d.x, d.y), d.x), predict_proba(fit(b, d.x, d.y), d.x));
}

TEST(Property, JsonRoundTripPreservesPredictions) {
  std::mt19937_64 rng(28);
  const auto d = random_data(rng, 60, 3, 1.0);
  const auto q = random_data(rng, 30, 3, 1.0);
  for (auto k : kAllKinds) {
    const auto m = fit(spec_of(k), d.x, d.y);
    const auto back = model_from_json(json::parse(to_json(m).dump()));
    EXPECT_EQ(back.spec.kind, k);
    EXPECT_EQ(back.iterations, m.iterations);
    EXPECT_EQ(predict_proba(back, q.x), predict_proba(m, q.x)) << to_string(k);
  }
}

TEST(Property, SpecJsonRoundTrip) {
  for (auto k : kAllKinds) {
    auto s = spec_of(k);
    s.name = "x";
    s.svm.kernel.gamma = 0.25;
    s.forest.feature_fraction = 0.5;
    const auto back = spec_from_json(spec_to_json(s));
    EXPECT_EQ(spec_to_json(back), spec_to_json(s));
  }
}

}  // namespace
}  // namespace qembed::models
