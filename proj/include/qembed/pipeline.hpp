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

// Tabular preprocessing: CSV ingestion, correlation pruning, VIF elimination,
// one-hot encoding, class-balancing undersampling, standardization, PCA with
// elbow selection and a stratified train/test split.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qembed/csv.hpp"
#include "qembed/error.hpp"
#include "qembed/feature_matrix.hpp"
#include "qembed/pca.hpp"

namespace qembed::pipeline {

enum class ColumnKind { categorical, numeric, target, id };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::categorical;
};

struct Schema {
  std::vector<ColumnSpec> columns;
  std::string positive_label = "Yes";
};

/// One typed column. Numeric columns fill `numbers`; all others fill `text`.
struct Column {
  ColumnSpec spec;
  std::vector<std::string> text;
  std::vector<double> numbers;
};

struct Dataset {
  std::vector<Column> columns;
  std::size_t rows = 0;
  std::map<std::string, std::size_t> blank_numeric_cells;  // column -> count parsed as 0
  std::string positive_label = "Yes";

  const Column* find(std::string_view name) const {
    for (const auto& c : columns) {
      if (c.spec.name == name) return &c;
    }
    return nullptr;
  }

  const Column& column(std::string_view name) const {
    const Column* c = find(name);
    if (!c) fail(ErrorCode::UnknownColumn, "no column named '" + std::string(name) + "'");
    return *c;
  }

  const Column& target() const {
    for (const auto& c : columns) {
      if (c.spec.kind == ColumnKind::target) return c;
    }
    fail(ErrorCode::MissingColumn, "dataset has no target column");
  }

  void drop(std::string_view name) {
    std::erase_if(columns, [&](const Column& c) { return c.spec.name == name; });
  }

  Labels labels() const {
    const Column& t = target();
    Labels y(rows);
    for (std::size_t r = 0; r < rows; ++r) y[r] = t.text[r] == positive_label ? 1 : 0;
    return y;
  }
};

// ---------------------------------------------------------------------------
// Loading

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}
}  // namespace detail

/// Builds a Dataset from parsed CSV records (first record is the header).
/// Columns are matched by name; file column order does not matter and extra
/// file columns are ignored. Blank numeric cells are read as 0 and counted.
inline Dataset dataset_from_records(const std::vector<csv::Row>& records, const Schema& schema) {
  if (records.empty()) fail(ErrorCode::EmptyFile, "no header row");
  if (records.size() < 2) fail(ErrorCode::EmptyFile, "no data rows");
  const csv::Row& header = records.front();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(std::string(detail::trim(header[i])), i);

  int targets = 0;
  Dataset ds;
  ds.positive_label = schema.positive_label;
  ds.rows = records.size() - 1;
  for (const auto& spec : schema.columns) {
    if (spec.kind == ColumnKind::target) ++targets;
    const auto it = index.find(spec.name);
    if (it == index.end()) fail(ErrorCode::MissingColumn, "CSV has no column '" + spec.name + "'");
    Column col{spec, {}, {}};
    const std::size_t src = it->second;
    for (std::size_t r = 1; r < records.size(); ++r) {
      if (records[r].size() != header.size()) {
        fail(ErrorCode::UnparsableCell, "row " + std::to_string(r) + " has " +
                                            std::to_string(records[r].size()) + " fields, header has " +
                                            std::to_string(header.size()));
      }
      const std::string_view cell = detail::trim(records[r][src]);
      if (spec.kind == ColumnKind::numeric) {
        if (cell.empty()) {
          ++ds.blank_numeric_cells[spec.name];
          col.numbers.push_back(0.0);
          continue;
        }
        const auto v = detail::parse_double(cell);
        if (!v) {
          fail(ErrorCode::UnparsableCell, "row " + std::to_string(r) + ", column '" + spec.name +
                                              "': '" + std::string(cell) + "'");
        }
        col.numbers.push_back(*v);
      } else {
        col.text.emplace_back(cell);
      }
    }
    ds.columns.push_back(std::move(col));
  }
  if (targets != 1) fail(ErrorCode::InvalidArgument, "schema must declare exactly one target column");
  return ds;
}

inline Dataset load_csv(const std::string& path, const Schema& schema) {
  return dataset_from_records(csv::read_file(path), schema);
}

// ---------------------------------------------------------------------------
// Statistics

/// Sample Pearson correlation.
inline double pearson_corr(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::LengthMismatch, "columns differ in length");
  if (a.size() < 2) fail(ErrorCode::LengthMismatch, "need at least two observations");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) fail(ErrorCode::ZeroVariance, "correlation undefined for a constant column");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

struct VifEntry {
  std::string column;
  double vif = 1.0;
  bool singular = false;  // perfectly explained by the other columns; vif = +inf
};

inline constexpr double kMaxRSquared = 1.0 - 1e-12;

/// VIF_j = 1 / (1 - R^2_j), R^2_j from least squares (with intercept) of
/// column j on all others.
inline std::vector<VifEntry> compute_vif(const Matrix& x, const std::vector<std::string>& names) {
  if (x.cols() < 2) fail(ErrorCode::InvalidArgument, "VIF needs at least two columns");
  if (static_cast<Eigen::Index>(names.size()) != x.cols()) {
    fail(ErrorCode::DimensionMismatch, "column names do not match matrix width");
  }
  if (!x.allFinite()) fail(ErrorCode::NonFiniteFeature, "VIF input has NaN/Inf");
  // Centering every column absorbs the intercept.
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const Eigen::Index d = x.cols();
  std::vector<VifEntry> out;
  out.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    VifEntry e{names[static_cast<std::size_t>(j)], 1.0, false};
    const Eigen::VectorXd y = centered.col(j);
    const double sst = y.squaredNorm();
    if (!(sst > 0.0)) {
      e.singular = true;
      e.vif = std::numeric_limits<double>::infinity();
      out.push_back(e);
      continue;
    }
    Eigen::MatrixXd others(centered.rows(), d - 1);
    others << centered.leftCols(j), centered.rightCols(d - 1 - j);
    const Eigen::VectorXd beta = others.colPivHouseholderQr().solve(y);
    const double sse = (y - others * beta).squaredNorm();
    const double r2 = std::max(0.0, 1.0 - sse / sst);
    if (r2 >= kMaxRSquared) {
      e.singular = true;
      e.vif = std::numeric_limits<double>::infinity();
    } else {
      e.vif = 1.0 / (1.0 - r2);
    }
    out.push_back(e);
  }
  return out;
}

struct DropRecord {
  std::string column;
  std::string rule;  // id | correlation | vif | vif_forced
  double statistic = 0.0;
  std::string detail;
};

struct VifPruneResult {
  Matrix values;
  std::vector<std::string> columns;
  std::vector<DropRecord> dropped;
  std::vector<std::vector<VifEntry>> iterations;  // VIF table before each decision
};

namespace detail {
inline void remove_column(Matrix& m, std::vector<std::string>& names, Eigen::Index j) {
  Matrix next(m.rows(), m.cols() - 1);
  next << m.leftCols(j), m.rightCols(m.cols() - 1 - j);
  m = std::move(next);
  names.erase(names.begin() + j);
}
}  // namespace detail

/// Drops the single highest-VIF column above `threshold`, recomputes, and
/// repeats until every VIF is at or below it. Ties go to the earlier column.
inline VifPruneResult iterative_vif_prune(const Matrix& x, const std::vector<std::string>& names,
                                          double threshold) {
  if (!(threshold > 1.0)) fail(ErrorCode::InvalidArgument, "VIF threshold must exceed 1");
  VifPruneResult res{x, names, {}, {}};
  while (res.values.cols() >= 2) {
    auto table = compute_vif(res.values, res.columns);
    std::size_t worst = 0;
    for (std::size_t j = 1; j < table.size(); ++j) {
      if (table[j].vif > table[worst].vif) worst = j;
    }
    res.iterations.push_back(table);
    if (!(table[worst].vif > threshold)) break;
    res.dropped.push_back({table[worst].column, "vif", table[worst].vif,
                           table[worst].singular ? "perfectly collinear" : "above threshold"});
    detail::remove_column(res.values, res.columns, static_cast<Eigen::Index>(worst));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Encoding

/// Category vocabulary in first-appearance order.
inline std::vector<std::string> vocabulary(const std::vector<std::string>& cells) {
  std::vector<std::string> vocab;
  std::set<std::string> seen;
  for (const auto& c : cells) {
    if (seen.insert(c).second) vocab.push_back(c);
  }
  return vocab;
}

/// Feature columns (not id/target) as numbers: numeric as-is, categorical as
/// their first-appearance category code (0/1 for binary columns).
inline FeatureMatrix numeric_encode(const Dataset& ds) {
  FeatureMatrix out;
  std::vector<const Column*> feats;
  for (const auto& c : ds.columns) {
    if (c.spec.kind == ColumnKind::numeric || c.spec.kind == ColumnKind::categorical) feats.push_back(&c);
  }
  out.values.resize(static_cast<Eigen::Index>(ds.rows), static_cast<Eigen::Index>(feats.size()));
  for (std::size_t j = 0; j < feats.size(); ++j) {
    const Column& c = *feats[j];
    out.columns.push_back(c.spec.name);
    if (c.spec.kind == ColumnKind::numeric) {
      for (std::size_t r = 0; r < ds.rows; ++r) out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = c.numbers[r];
      continue;
    }
    const auto vocab = vocabulary(c.text);
    std::unordered_map<std::string, double> code;
    for (std::size_t k = 0; k < vocab.size(); ++k) code[vocab[k]] = static_cast<double>(k);
    for (std::size_t r = 0; r < ds.rows; ++r) out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = code[c.text[r]];
  }
  out.labels = ds.labels();
  return out;
}

/// One indicator column per (column, category) for each listed column, every
/// category kept; numeric feature columns pass through. Output follows the
/// dataset's column order, categories in first-appearance order.
inline FeatureMatrix one_hot(const Dataset& ds, const std::vector<std::string>& encode) {
  for (const auto& name : encode) {
    const Column* c = ds.find(name);
    if (!c) fail(ErrorCode::UnknownColumn, "cannot one-hot unknown column '" + name + "'");
    if (c->spec.kind != ColumnKind::categorical) {
      fail(ErrorCode::InvalidArgument, "column '" + name + "' is not categorical");
    }
  }
  const std::set<std::string> wanted(encode.begin(), encode.end());

  struct Out {
    const Column* src;
    std::optional<std::string> category;
  };
  std::vector<Out> plan;
  for (const auto& c : ds.columns) {
    if (c.spec.kind == ColumnKind::numeric) {
      plan.push_back({&c, std::nullopt});
    } else if (c.spec.kind == ColumnKind::categorical) {
      if (!wanted.count(c.spec.name)) {
        fail(ErrorCode::InvalidArgument, "categorical column '" + c.spec.name + "' must be one-hot encoded");
      }
      for (auto& cat : vocabulary(c.text)) plan.push_back({&c, cat});
    }
  }
  FeatureMatrix out;
  out.values.resize(static_cast<Eigen::Index>(ds.rows), static_cast<Eigen::Index>(plan.size()));
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const auto& p = plan[j];
    const auto cj = static_cast<Eigen::Index>(j);
    if (!p.category) {
      out.columns.push_back(p.src->spec.name);
      for (std::size_t r = 0; r < ds.rows; ++r) out.values(static_cast<Eigen::Index>(r), cj) = p.src->numbers[r];
    } else {
      out.columns.push_back(p.src->spec.name + "=" + *p.category);
      for (std::size_t r = 0; r < ds.rows; ++r) {
        out.values(static_cast<Eigen::Index>(r), cj) = p.src->text[r] == *p.category ? 1.0 : 0.0;
      }
    }
  }
  out.labels = ds.labels();
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

struct Sampled {
  FeatureMatrix data;
  std::vector<std::size_t> source_rows;  // row of the input each output row came from
};

/// Keeps every minority row and an equal-size seeded sample (without
/// replacement) of the majority class; output order is a seeded shuffle.
inline Sampled undersample(const FeatureMatrix& x, std::uint64_t seed) {
  std::vector<std::size_t> by_class[2];
  for (std::size_t r = 0; r < x.labels.size(); ++r) by_class[x.labels[r] ? 1 : 0].push_back(r);
  if (by_class[0].empty() || by_class[1].empty()) {
    fail(ErrorCode::SingleClass, "undersampling needs both classes present");
  }
  const int minority = by_class[1].size() <= by_class[0].size() ? 1 : 0;
  const int majority = 1 - minority;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> picked = by_class[minority];
  std::vector<std::size_t> major = by_class[majority];
  std::shuffle(major.begin(), major.end(), rng);
  picked.insert(picked.end(), major.begin(),
                major.begin() + static_cast<std::ptrdiff_t>(by_class[minority].size()));
  std::shuffle(picked.begin(), picked.end(), rng);
  return Sampled{x.select_rows(picked), picked};
}

struct Split {
  FeatureMatrix train;
  FeatureMatrix test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

/// Stratified seeded split. Each class contributes floor(ratio * n_c) rows to
/// train (at least one, leaving at least one for test); rows keep input order.
inline Split train_test_split(const FeatureMatrix& x, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) fail(ErrorCode::InvalidArgument, "split ratio must be in (0, 1)");
  std::vector<std::size_t> by_class[2];
  for (std::size_t r = 0; r < x.labels.size(); ++r) by_class[x.labels[r] ? 1 : 0].push_back(r);
  std::mt19937_64 rng(seed);
  Split s;
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[c];
    if (idx.size() < 2) {
      fail(ErrorCode::ClassTooSmall, "class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                                         " rows; stratified split needs at least 2");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(idx.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    s.train_rows.insert(s.train_rows.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test_rows.insert(s.test_rows.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(s.train_rows.begin(), s.train_rows.end());
  std::sort(s.test_rows.begin(), s.test_rows.end());
  s.train = x.select_rows(s.train_rows);
  s.test = x.select_rows(s.test_rows);
  return s;
}

/// Per-column z-score (sample standard deviation); constant columns are only
/// centered.
struct Standardizer {
  Vector mean;
  Vector scale;

  static Standardizer fit(const Matrix& x) {
    if (x.rows() < 2) fail(ErrorCode::InvalidArgument, "standardization needs at least two rows");
    Standardizer s;
    s.mean = x.colwise().mean().transpose();
    s.scale.resize(x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const double var = (x.col(c).array() - s.mean(c)).square().sum() / static_cast<double>(x.rows() - 1);
      s.scale(c) = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    return s;
  }

  Matrix transform(const Matrix& x) const {
    if (x.cols() != mean.size()) fail(ErrorCode::DimensionMismatch, "standardizer width mismatch");
    Matrix out = x.rowwise() - mean.transpose();
    out.array().rowwise() /= scale.transpose().array();
    return out;
  }
};

// ---------------------------------------------------------------------------
// End-to-end preprocessing

struct PreprocessOptions {
  double correlation_threshold = 0.8;
  double vif_threshold = 12.0;
  std::vector<std::string> vif_forced_drops;  // dropped after the threshold loop, in order
  bool standardize = true;
  std::uint64_t undersample_seed = 42;
  std::optional<std::size_t> pca_components;  // nullopt: elbow
};

struct PreprocessReport {
  std::size_t rows_loaded = 0;
  std::map<std::string, std::size_t> blank_numeric_cells;
  std::vector<DropRecord> dropped;
  std::vector<std::vector<VifEntry>> vif_table;
  std::size_t one_hot_columns = 0;
  std::vector<std::string> one_hot_names;
  std::size_t class_counts_before[2] = {0, 0};
  std::size_t class_counts_after[2] = {0, 0};
  std::vector<double> explained_variance_ratio;  // all components of the full fit
  std::size_t elbow_index = 0;
  double cumulative_at_elbow = 0.0;
  std::size_t pca_components = 0;
  std::size_t pca_rank = 0;
  bool pca_rank_deficient = false;
  bool standardized = true;
  std::string order = "undersample -> standardize -> pca -> split";
};

struct Preprocessed {
  FeatureMatrix one_hot;     // full data after one-hot
  FeatureMatrix balanced;    // after undersampling (and standardization)
  FeatureMatrix reduced;     // PCA scores of `balanced`
  std::vector<std::size_t> source_rows;
  PcaModel pca;
  PreprocessReport report;
};

inline Preprocessed preprocess(Dataset ds, const PreprocessOptions& opt) {
  Preprocessed out;
  PreprocessReport& rep = out.report;
  rep.rows_loaded = ds.rows;
  rep.blank_numeric_cells = ds.blank_numeric_cells;
  rep.standardized = opt.standardize;

  std::vector<std::string> ids;
  for (const auto& c : ds.columns) {
    if (c.spec.kind != ColumnKind::id) continue;
    const double distinct = static_cast<double>(vocabulary(c.text).size()) / static_cast<double>(ds.rows);
    rep.dropped.push_back({c.spec.name, "id", distinct, "identifier column (distinct-value fraction)"});
    ids.push_back(c.spec.name);
  }
  for (const auto& name : ids) ds.drop(name);

  // Correlation: for each numeric pair over the threshold, drop the later column.
  std::vector<std::string> numeric;
  for (const auto& c : ds.columns) {
    if (c.spec.kind == ColumnKind::numeric) numeric.push_back(c.spec.name);
  }
  std::set<std::string> corr_dropped;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    if (corr_dropped.count(numeric[i])) continue;
    for (std::size_t j = i + 1; j < numeric.size(); ++j) {
      if (corr_dropped.count(numeric[j])) continue;
      double r = 0.0;
      try {
        r = pearson_corr(ds.column(numeric[i]).numbers, ds.column(numeric[j]).numbers);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ZeroVariance) continue;
        throw;
      }
      if (std::abs(r) > opt.correlation_threshold) {
        corr_dropped.insert(numeric[j]);
        rep.dropped.push_back({numeric[j], "correlation", r, "correlated with " + numeric[i]});
      }
    }
  }
  for (const auto& name : corr_dropped) ds.drop(name);

  // VIF on numerically encoded features, before one-hot.
  {
    const FeatureMatrix enc = numeric_encode(ds);
    if (enc.cols() >= 2) {
      auto pruned = iterative_vif_prune(enc.values, enc.columns, opt.vif_threshold);
      rep.vif_table = pruned.iterations;
      for (const auto& d : pruned.dropped) {
        rep.dropped.push_back(d);
        ds.drop(d.column);
      }
      for (const auto& name : opt.vif_forced_drops) {
        const bool already = std::any_of(rep.dropped.begin(), rep.dropped.end(),
                                         [&](const DropRecord& d) { return d.column == name; });
        if (already) continue;
        const auto it = std::find(pruned.columns.begin(), pruned.columns.end(), name);
        if (it == pruned.columns.end()) fail(ErrorCode::UnknownColumn, "forced VIF drop of unknown column '" + name + "'");
        const auto& table = rep.vif_table.back();
        const auto entry = std::find_if(table.begin(), table.end(), [&](const VifEntry& e) { return e.column == name; });
        rep.dropped.push_back({name, "vif_forced", entry->vif, "dropped after re-evaluating VIF"});
        detail::remove_column(pruned.values, pruned.columns, it - pruned.columns.begin());
        ds.drop(name);
        if (pruned.values.cols() >= 2) rep.vif_table.push_back(compute_vif(pruned.values, pruned.columns));
      }
    }
  }

  std::vector<std::string> categorical;
  for (const auto& c : ds.columns) {
    if (c.spec.kind == ColumnKind::categorical) categorical.push_back(c.spec.name);
  }
  out.one_hot = one_hot(ds, categorical);
  out.one_hot.validate();
  rep.one_hot_columns = static_cast<std::size_t>(out.one_hot.cols());
  rep.one_hot_names = out.one_hot.columns;
  for (int y : out.one_hot.labels) ++rep.class_counts_before[y];

  Sampled bal = undersample(out.one_hot, opt.undersample_seed);
  out.source_rows = std::move(bal.source_rows);
  out.balanced = std::move(bal.data);
  for (int y : out.balanced.labels) ++rep.class_counts_after[y];
  if (opt.standardize) out.balanced.values = Standardizer::fit(out.balanced.values).transform(out.balanced.values);

  const auto n = static_cast<std::size_t>(out.balanced.rows());
  const auto d = static_cast<std::size_t>(out.balanced.cols());
  const std::size_t full_k = std::min(n - 1, d);
  const PcaModel full = pca_fit(out.balanced.values, full_k);
  rep.explained_variance_ratio = full.explained_variance_ratio;
  rep.pca_rank = full.rank;
  if (full_k >= 3) {
    rep.elbow_index = find_elbow(full.explained_variance_ratio);
    rep.cumulative_at_elbow = cumulative(full.explained_variance_ratio)[rep.elbow_index];
  }
  const std::size_t k = opt.pca_components.value_or(std::max<std::size_t>(1, rep.elbow_index));
  out.pca = pca_fit(out.balanced.values, k);
  rep.pca_components = k;
  rep.pca_rank_deficient = out.pca.rank_deficient;
  out.reduced = pca_transform(out.pca, out.balanced);
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const PreprocessReport& r) {
  using nlohmann::json;
  auto finite_or_inf = [](double v) -> json {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
  };
  json dropped = json::array();
  for (const auto& d : r.dropped) {
    dropped.push_back({{"column", d.column}, {"rule", d.rule}, {"statistic", finite_or_inf(d.statistic)}, {"detail", d.detail}});
  }
  json vif = json::array();
  for (const auto& it : r.vif_table) {
    json row = json::array();
    for (const auto& e : it) row.push_back({{"column", e.column}, {"vif", finite_or_inf(e.vif)}, {"singular", e.singular}});
    vif.push_back(row);
  }
  return json{{"rows_loaded", r.rows_loaded},
              {"blank_numeric_cells", r.blank_numeric_cells},
              {"dropped", dropped},
              {"vif_table", vif},
              {"one_hot_columns", r.one_hot_columns},
              {"one_hot_names", r.one_hot_names},
              {"class_counts_before", {r.class_counts_before[0], r.class_counts_before[1]}},
              {"class_counts_after", {r.class_counts_after[0], r.class_counts_after[1]}},
              {"explained_variance_ratio", r.explained_variance_ratio},
              {"cumulative_explained_variance", cumulative(r.explained_variance_ratio)},
              {"elbow_index", r.elbow_index},
              {"cumulative_at_elbow", r.cumulative_at_elbow},
              {"pca_components", r.pca_components},
              {"pca_rank", r.pca_rank},
              {"pca_rank_deficient", r.pca_rank_deficient},
              {"standardized", r.standardized},
              {"order", r.order}};
}

}  // namespace qembed::pipeline
