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

// Binary classification metrics. Class 1 is the positive class. Metrics with
// a zero denominator are returned as std::nullopt ("undefined") rather than
// coerced to 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "qembed/error.hpp"

namespace qembed::metrics {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

namespace detail {

inline void check_pair(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorCode::LengthMismatch, "label vectors differ in length");
  if (a == 0) fail(ErrorCode::EmptyInput, "no samples");
}

inline void check_binary(std::span<const int> v) {
  for (int x : v) {
    if (x != 0 && x != 1) fail(ErrorCode::NonBinaryInput, "labels must be 0 or 1");
  }
}

inline std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace detail

inline ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  detail::check_pair(y_true.size(), y_pred.size());
  detail::check_binary(y_true);
  detail::check_binary(y_pred);
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i]) {
      (y_pred[i] ? c.tp : c.fn)++;
    } else {
      (y_pred[i] ? c.fp : c.tn)++;
    }
  }
  return c;
}

inline std::optional<double> accuracy(const ConfusionCounts& c) {
  return detail::ratio(static_cast<double>(c.tp + c.tn), static_cast<double>(c.total()));
}

inline std::optional<double> precision(const ConfusionCounts& c) {
  return detail::ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
}

inline std::optional<double> recall(const ConfusionCounts& c) {
  return detail::ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
}

/// Harmonic mean of precision and recall; undefined when either is, or when
/// both are 0.
inline std::optional<double> f1(const ConfusionCounts& c) {
  const auto p = precision(c), r = recall(c);
  if (!p || !r) return std::nullopt;
  return detail::ratio(2.0 * *p * *r, *p + *r);
}

/// Kappa from confusion counts; undefined when chance agreement is 1.
inline std::optional<double> cohen_kappa(const ConfusionCounts& c) {
  const double n = static_cast<double>(c.total());
  if (n == 0.0) return std::nullopt;
  const double po = static_cast<double>(c.tp + c.tn) / n;
  const double true1 = static_cast<double>(c.tp + c.fn) / n, pred1 = static_cast<double>(c.tp + c.fp) / n;
  const double pe = true1 * pred1 + (1.0 - true1) * (1.0 - pred1);
  if (pe >= 1.0) return std::nullopt;
  return (po - pe) / (1.0 - pe);
}

inline std::optional<double> cohen_kappa(std::span<const int> y_true, std::span<const int> y_pred) {
  return cohen_kappa(confusion(y_true, y_pred));
}

/// Mann-Whitney AUC with midranks for tied scores.
inline double roc_auc(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) fail(ErrorCode::LengthMismatch, "labels and scores differ in length");
  detail::check_binary(y_true);
  const std::size_t n = scores.size();
  for (double s : scores) {
    if (!std::isfinite(s)) fail(ErrorCode::NonFiniteInput, "scores must be finite");
  }
  const auto n_pos = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) fail(ErrorCode::SingleClass, "roc_auc needs both classes");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (y_true[order[k]]) rank_sum += midrank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

inline std::vector<int> threshold(std::span<const double> scores, double t) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= t ? 1 : 0;
  return out;
}

struct MetricReport {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> roc_auc;  // undefined when the evaluation set has one class
  std::optional<double> kappa;
  double threshold = 0.5;
  ConfusionCounts counts;

  bool operator==(const MetricReport&) const = default;
};

/// Thresholded metrics use `score >= t` as a positive prediction.
inline MetricReport evaluate(std::span<const int> y_true, std::span<const double> scores, double t = 0.5) {
  if (y_true.size() != scores.size()) fail(ErrorCode::LengthMismatch, "labels and scores differ in length");
  const auto pred = threshold(scores, t);
  MetricReport r;
  r.threshold = t;
  r.counts = confusion(y_true, pred);
  r.accuracy = accuracy(r.counts);
  r.precision = precision(r.counts);
  r.recall = recall(r.counts);
  r.f1 = f1(r.counts);
  r.kappa = cohen_kappa(r.counts);
  if (r.counts.tp + r.counts.fn > 0 && r.counts.tn + r.counts.fp > 0) r.roc_auc = roc_auc(y_true, scores);
  return r;
}

}  // namespace qembed::metrics
