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

#include "qembed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

namespace qembed::metrics {
namespace {

using V = std::vector<int>;
using S = std::vector<double>;

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

// ---- independent oracles ----

std::map<std::pair<int, int>, int> tally(const V& t, const V& p) {
  std::map<std::pair<int, int>, int> m;
  for (std::size_t i = 0; i < t.size(); ++i) m[{t[i], p[i]}]++;
  return m;
}

// Probability that a random positive outranks a random negative, ties half.
double pairwise_auc(const V& y, const S& s) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1.0;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
    }
  }
  return wins / pairs;
}

// Trapezoid rule over the ROC curve traced by every distinct threshold.
double trapezoid_auc(const V& y, const S& s) {
  std::set<double, std::greater<>> thresholds(s.begin(), s.end());
  const double np = static_cast<double>(std::count(y.begin(), y.end(), 1));
  const double nn = static_cast<double>(y.size()) - np;
  double area = 0.0, prev_tpr = 0.0, prev_fpr = 0.0;
  for (double t : thresholds) {
    double tp = 0.0, fp = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (s[i] >= t) (y[i] ? tp : fp) += 1.0;
    }
    const double tpr = tp / np, fpr = fp / nn;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_tpr = tpr;
    prev_fpr = fpr;
  }
  return area;
}

std::optional<double> kappa_oracle(const V& t, const V& p) {
  const double n = static_cast<double>(t.size());
  double agree = 0.0, t1 = 0.0, p1 = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    agree += t[i] == p[i];
    t1 += t[i];
    p1 += p[i];
  }
  const double po = agree / n;
  const double pe = (t1 / n) * (p1 / n) + ((n - t1) / n) * ((n - p1) / n);
  if (pe == 1.0) return std::nullopt;
  return (po - pe) / (1.0 - pe);
}

void expect_opt_near(std::optional<double> a, std::optional<double> b, double tol) {
  ASSERT_EQ(a.has_value(), b.has_value());
  if (a) {
    EXPECT_NEAR(*a, *b, tol);
  }
}

V random_labels(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  V v(n);
  for (auto& x : v) x = coin(rng);
  return v;
}

// ---- confusion ----

TEST(Confusion, Examples) {
  EXPECT_EQ(confusion(V{1, 0}, V{1, 0}), (ConfusionCounts{1, 0, 1, 0}));
  EXPECT_EQ(confusion(V{1, 1}, V{0, 0}).fn, 2u);
}

TEST(Confusion, MatchesTally) {
  std::mt19937_64 rng(1);
  const V t = random_labels(rng, 1000), p = random_labels(rng, 1000);
  const auto c = confusion(t, p);
  auto m = tally(t, p);
  EXPECT_EQ(c.tp, static_cast<std::size_t>(m[{1, 1}]));
  EXPECT_EQ(c.fp, static_cast<std::size_t>(m[{0, 1}]));
  EXPECT_EQ(c.tn, static_cast<std::size_t>(m[{0, 0}]));
  EXPECT_EQ(c.fn, static_cast<std::size_t>(m[{1, 0}]));
  EXPECT_EQ(c.total(), 1000u);
}

TEST(Confusion, Errors) {
  EXPECT_EQ(error_code([] { confusion(V{1}, V{1, 0}); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(error_code([] { confusion(V{}, V{}); }), ErrorCode::EmptyInput);
  EXPECT_EQ(error_code([] { confusion(V{2}, V{1}); }), ErrorCode::NonBinaryInput);
}

// ---- threshold metrics ----

TEST(Scores, PerfectPrediction) {
  const ConfusionCounts c{1, 0, 1, 0};
  EXPECT_EQ(accuracy(c), 1.0);
  EXPECT_EQ(precision(c), 1.0);
  EXPECT_EQ(recall(c), 1.0);
  EXPECT_EQ(f1(c), 1.0);
}

TEST(Scores, NoPositivePredictionsLeavesPrecisionUndefined) {
  const ConfusionCounts c{0, 0, 3, 2};
  EXPECT_FALSE(precision(c).has_value());
  EXPECT_FALSE(f1(c).has_value());
  EXPECT_EQ(recall(c), 0.0);
}

TEST(Scores, HandArithmetic) {
  const ConfusionCounts c{3, 1, 4, 2};
  EXPECT_DOUBLE_EQ(*precision(c), 0.75);
  EXPECT_DOUBLE_EQ(*recall(c), 0.6);
  EXPECT_NEAR(*f1(c), 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(*accuracy(c), 0.7);
}

TEST(Scores, F1BetweenHarmonicBounds) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> cnt(0, 30);
  for (int i = 0; i < 1000; ++i) {
    const ConfusionCounts c{cnt(rng), cnt(rng), cnt(rng), cnt(rng)};
    const auto p = precision(c), r = recall(c), f = f1(c);
    if (!f) continue;
    EXPECT_LE(*f, std::sqrt(*p * *r) + 1e-15);
    EXPECT_LE(std::sqrt(*p * *r), (*p + *r) / 2.0 + 1e-15);
    EXPECT_GE(*f, std::min(*p, *r) - 1e-15);
    EXPECT_LE(*f, std::max(*p, *r) + 1e-15);
  }
}

// ---- kappa ----

TEST(Kappa, Examples) {
  EXPECT_EQ(cohen_kappa(V{1, 0, 1, 1, 0}, V{1, 0, 1, 1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(*cohen_kappa(V{1, 0, 1, 0}, V{0, 1, 0, 1}), -1.0);
  const auto constant = cohen_kappa(V{1, 0, 1, 0}, V{0, 0, 0, 0});
  expect_opt_near(constant, kappa_oracle(V{1, 0, 1, 0}, V{0, 0, 0, 0}), 1e-15);
  ASSERT_TRUE(constant.has_value());
  EXPECT_EQ(*constant, 0.0);
}

TEST(Kappa, UndefinedWhenChanceAgreementIsOne) {
  EXPECT_FALSE(cohen_kappa(V{1, 1, 1}, V{1, 1, 1}).has_value());
}

// ---- roc_auc ----

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(V{0, 0, 1, 1}, S{0.1, 0.2, 0.8, 0.9}), 1.0);
  EXPECT_EQ(roc_auc(V{0, 1, 0, 1}, S{0.3, 0.3, 0.3, 0.3}), 0.5);
}

TEST(RocAuc, Errors) {
  EXPECT_EQ(error_code([] { roc_auc(V{1, 1}, S{0.1, 0.2}); }), ErrorCode::SingleClass);
  EXPECT_EQ(error_code([] { roc_auc(V{1, 0}, S{0.1}); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(error_code([] { roc_auc(V{1, 0}, S{0.1, NAN}); }), ErrorCode::NonFiniteInput);
}

TEST(RocAuc, MatchesTrapezoid) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> level(0, 9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    V y = random_labels(rng, 50);
    y[0] = 0;
    y[1] = 1;
    S s(50);
    // Half the trials use coarse scores so ties are common.
    for (auto& v : s) v = trial % 2 ? level(rng) / 10.0 : g(rng);
    EXPECT_NEAR(roc_auc(y, s), trapezoid_auc(y, s), 1e-12);
  }
}

TEST(RocAuc, InvariantUnderIncreasingTransform) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    V y = random_labels(rng, 40);
    y[0] = 0;
    y[1] = 1;
    S s(40), t(40);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = g(rng);
      t[i] = std::exp(3.0 * s[i]) + 7.0;
    }
    EXPECT_NEAR(roc_auc(y, s), roc_auc(y, t), 1e-12);
  }
}

TEST(RocAuc, NegatedScoresComplement) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    V y = random_labels(rng, 40);
    y[0] = 0;
    y[1] = 1;
    S s(40), neg(40);
    for (std::size_t i = 0; i < s.size(); ++i) neg[i] = -(s[i] = g(rng));
    EXPECT_NEAR(roc_auc(y, s) + roc_auc(y, neg), 1.0, 1e-12);
  }
}

// ---- whole-report properties ----

TEST(Report, OracleEquivalence) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> len(1, 64);
  std::uniform_int_distribution<int> level(0, 20);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = len(rng);
    const V y = random_labels(rng, n);
    S s(n);
    for (auto& v : s) v = level(rng) / 20.0;
    const auto r = evaluate(y, s);
    V p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = s[i] >= 0.5;
    auto m = tally(y, p);
    const double tp = m[{1, 1}], fp = m[{0, 1}], tn = m[{0, 0}], fn = m[{1, 0}];
    expect_opt_near(r.accuracy, (tp + tn) / static_cast<double>(n), 1e-12);
    expect_opt_near(r.precision, tp + fp > 0 ? std::optional<double>(tp / (tp + fp)) : std::nullopt, 1e-12);
    expect_opt_near(r.recall, tp + fn > 0 ? std::optional<double>(tp / (tp + fn)) : std::nullopt, 1e-12);
    std::optional<double> f;
    if (tp + fp > 0 && tp + fn > 0 && tp > 0) f = 2.0 * tp / (2.0 * tp + fp + fn);
    expect_opt_near(r.f1, f, 1e-12);
    expect_opt_near(r.kappa, kappa_oracle(y, p), 1e-12);
    const bool both = std::count(y.begin(), y.end(), 1) > 0 && std::count(y.begin(), y.end(), 0) > 0;
    expect_opt_near(r.roc_auc, both ? std::optional<double>(pairwise_auc(y, s)) : std::nullopt, 1e-12);
    EXPECT_EQ(r.threshold, 0.5);
  }
}

TEST(Report, PermutationInvariant) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    V y = random_labels(rng, 30);
    y[0] = 0;
    y[1] = 1;
    S s(30);
    for (auto& v : s) v = std::round(u(rng) * 10.0) / 10.0;
    std::vector<std::size_t> perm(30);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    V y2(30);
    S s2(30);
    for (std::size_t i = 0; i < 30; ++i) {
      y2[i] = y[perm[i]];
      s2[i] = s[perm[i]];
    }
    const auto a = evaluate(y, s), b = evaluate(y2, s2);
    EXPECT_EQ(a.counts, b.counts);
    expect_opt_near(a.accuracy, b.accuracy, 0.0);
    expect_opt_near(a.f1, b.f1, 0.0);
    expect_opt_near(a.kappa, b.kappa, 0.0);
    expect_opt_near(a.roc_auc, b.roc_auc, 1e-12);
  }
}

TEST(Report, DefinedMetricsInRange) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const V y = random_labels(rng, 1 + trial % 20);
    S s(y.size());
    for (auto& v : s) v = u(rng);
    const auto r = evaluate(y, s);
    for (auto m : {r.accuracy, r.precision, r.recall, r.f1, r.roc_auc}) {
      if (m) {
        EXPECT_GE(*m, 0.0);
        EXPECT_LE(*m, 1.0);
      }
    }
    if (r.kappa) {
      EXPECT_GE(*r.kappa, -1.0 - 1e-12);
      EXPECT_LE(*r.kappa, 1.0 + 1e-12);
    }
  }
}

}  // namespace
}  // namespace qembed::metrics
