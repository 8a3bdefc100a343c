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

// Experiment runner: preprocess once, split once, then fit and score every
// {encoding x model} cell on the same partition.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "qembed/csv.hpp"
#include "qembed/encoding.hpp"
#include "qembed/error.hpp"
#include "qembed/metrics.hpp"
#include "qembed/models.hpp"
#include "qembed/pipeline.hpp"

namespace qembed::bench {

using nlohmann::json;
namespace fs = std::filesystem;

inline constexpr const char* kOutDirEnv = "QEMBED_OUT_DIR";
inline constexpr const char* kResultsFile = "results.json";

// ---------------------------------------------------------------------------
// Small utilities

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + p.string());
  out << text;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Shortest text that parses back to the same double.
inline std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

/// Hash of the partition: row indices of train, a separator, then test.
inline std::uint64_t split_checksum(const pipeline::Split& s) {
  std::string bytes;
  for (auto r : s.train_rows) bytes += std::to_string(r) + ',';
  bytes += '|';
  for (auto r : s.test_rows) bytes += std::to_string(r) + ',';
  return fnv1a(bytes);
}

// ---------------------------------------------------------------------------
// Config

/// The column layout of the public Telco customer churn CSV.
inline pipeline::Schema telco_schema() {
  using pipeline::ColumnKind;
  pipeline::Schema s;
  s.columns = {{"customerID", ColumnKind::id},         {"gender", ColumnKind::categorical},
               {"SeniorCitizen", ColumnKind::categorical}, {"Partner", ColumnKind::categorical},
               {"Dependents", ColumnKind::categorical},    {"tenure", ColumnKind::numeric},
               {"PhoneService", ColumnKind::categorical},  {"MultipleLines", ColumnKind::categorical},
               {"InternetService", ColumnKind::categorical}, {"OnlineSecurity", ColumnKind::categorical},
               {"OnlineBackup", ColumnKind::categorical},  {"DeviceProtection", ColumnKind::categorical},
               {"TechSupport", ColumnKind::categorical},   {"StreamingTV", ColumnKind::categorical},
               {"StreamingMovies", ColumnKind::categorical}, {"Contract", ColumnKind::categorical},
               {"PaperlessBilling", ColumnKind::categorical}, {"PaymentMethod", ColumnKind::categorical},
               {"MonthlyCharges", ColumnKind::numeric},    {"TotalCharges", ColumnKind::numeric},
               {"Churn", ColumnKind::target}};
  s.positive_label = "Yes";
  return s;
}

struct BenchEncoding {
  std::string name;
  std::optional<encoding::EncodingScheme> scheme;  // nullopt: classical baseline
};

struct BenchConfig {
  std::string dataset;      // resolved path
  std::string schema_name;  // "telco" for the preset, empty for an inline schema
  pipeline::Schema schema;
  pipeline::PreprocessOptions preprocess;
  double split_ratio = 0.8;
  std::uint64_t seed = 42;  // split seed and default model seed
  std::vector<BenchEncoding> encodings;
  std::vector<models::ModelSpec> models;
  std::string output_dir;  // resolved; empty: unset
  bool save_models = false;
  int repeat = 1;
};

namespace detail {

inline void config_check(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::ConfigError, what);
}

inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      fail(ErrorCode::ConfigError, "unknown key '" + k + "' in " + where);
    }
  }
}

inline std::string resolve(const std::string& p, const fs::path& base) {
  if (p.empty()) return p;
  const fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

inline pipeline::ColumnKind column_kind_from_string(const std::string& s) {
  using pipeline::ColumnKind;
  if (s == "categorical") return ColumnKind::categorical;
  if (s == "numeric") return ColumnKind::numeric;
  if (s == "target") return ColumnKind::target;
  if (s == "id") return ColumnKind::id;
  fail(ErrorCode::ConfigError, "unknown column kind '" + s + "'");
}

inline std::string to_string(pipeline::ColumnKind k) {
  using pipeline::ColumnKind;
  switch (k) {
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::target: return "target";
    case ColumnKind::id: return "id";
  }
  return "?";
}

inline encoding::ReadoutMode readout_from_string(const std::string& s) {
  using encoding::ReadoutMode;
  for (auto m : {ReadoutMode::probability_vector, ReadoutMode::z_expectations, ReadoutMode::amplitude_parts}) {
    if (encoding::to_string(m) == s) return m;
  }
  fail(ErrorCode::ConfigError, "unknown readout '" + s + "'");
}

inline qsim::Axis axis_from_string(const std::string& s) {
  if (s == "X" || s == "x") return qsim::Axis::X;
  if (s == "Y" || s == "y") return qsim::Axis::Y;
  if (s == "Z" || s == "z") return qsim::Axis::Z;
  fail(ErrorCode::ConfigError, "unknown rotation axis '" + s + "'");
}

inline std::string axis_name(qsim::Axis a) { return a == qsim::Axis::X ? "X" : a == qsim::Axis::Y ? "Y" : "Z"; }

inline BenchEncoding encoding_from_json(const json& j) {
  using encoding::EncodingScheme;
  using encoding::ReadoutMode;
  json e = j.is_string() ? json{{"kind", j.get<std::string>()}} : j;
  config_check(e.is_object() && e.contains("kind") && e["kind"].is_string(),
               "encoding entries must be a name or an object with a string 'kind'");
  const auto kind = e["kind"].get<std::string>();
  BenchEncoding out;
  out.name = e.value("name", kind);
  if (kind == "classical") {
    check_keys(e, {"kind", "name"}, "classical encoding");
    return out;
  }
  EncodingScheme s;
  if (kind == "basis") {
    check_keys(e, {"kind", "name", "bits_per_feature", "readout", "max_qubits"}, "basis encoding");
    s = EncodingScheme::basis(e.value("bits_per_feature", 4U), ReadoutMode::z_expectations);
  } else if (kind == "angle") {
    check_keys(e, {"kind", "name", "axis", "map", "readout", "max_qubits"}, "angle encoding");
    const auto map = e.value("map", std::string("linear_pi"));
    config_check(map == "linear_pi" || map == "raw", "angle map must be linear_pi or raw");
    s = EncodingScheme::angle_scheme(axis_from_string(e.value("axis", std::string("Y"))),
                                     map == "raw" ? encoding::AngleMap::raw : encoding::AngleMap::linear_pi);
  } else if (kind == "amplitude") {
    check_keys(e, {"kind", "name", "readout", "max_qubits"}, "amplitude encoding");
    s = EncodingScheme::amplitude();
  } else if (kind == "superposition") {
    fail(ErrorCode::ConfigError, "superposition encoding has no per-row feature map and cannot run in the matrix");
  } else {
    fail(ErrorCode::ConfigError, "unknown encoding kind '" + kind + "'");
  }
  if (e.contains("readout")) s.readout = readout_from_string(e["readout"].get<std::string>());
  if (e.contains("max_qubits")) s.max_qubits = e["max_qubits"].get<unsigned>();
  try {
    s.validate();
  } catch (const Error& err) {
    fail(ErrorCode::ConfigError, err.what());
  }
  out.scheme = s;
  return out;
}

inline json encoding_to_json(const BenchEncoding& e) {
  if (!e.scheme) return json{{"kind", "classical"}, {"name", e.name}};
  const auto& s = *e.scheme;
  json j{{"kind", std::string(encoding::to_string(s.kind))},
         {"name", e.name},
         {"readout", std::string(encoding::to_string(s.readout))},
         {"max_qubits", s.max_qubits}};
  if (s.bits_per_feature) j["bits_per_feature"] = *s.bits_per_feature;
  if (s.angle) {
    j["axis"] = axis_name(s.angle->axis);
    j["map"] = s.angle->map == encoding::AngleMap::raw ? "raw" : "linear_pi";
  }
  return j;
}

}  // namespace detail

/// Builds a config from its JSON form; relative paths resolve against `base`.
inline BenchConfig config_from_json(const json& j, const fs::path& base) {
  using detail::config_check;
  BenchConfig c;
  try {
    config_check(j.is_object(), "config must be a JSON object");
    detail::check_keys(j, {"dataset", "schema", "preprocess", "split", "seed", "encodings", "models", "output_dir",
                           "save_models", "repeat"},
                       "config");
    config_check(j.contains("dataset") && j["dataset"].is_string(), "config needs a 'dataset' path");
    c.dataset = detail::resolve(j["dataset"].get<std::string>(), base);

    const json schema = j.value("schema", json("telco"));
    if (schema.is_string()) {
      config_check(schema.get<std::string>() == "telco", "the only schema preset is 'telco'");
      c.schema_name = "telco";
      c.schema = telco_schema();
    } else {
      detail::check_keys(schema, {"columns", "positive_label"}, "schema");
      for (const auto& col : schema.at("columns")) {
        c.schema.columns.push_back({col.at("name").get<std::string>(),
                                    detail::column_kind_from_string(col.at("kind").get<std::string>())});
      }
      c.schema.positive_label = schema.value("positive_label", std::string("Yes"));
    }

    const json pre = j.value("preprocess", json::object());
    detail::check_keys(pre, {"correlation_threshold", "vif_threshold", "vif_forced_drops", "standardize",
                             "undersample_seed", "pca_components"},
                       "preprocess");
    auto& po = c.preprocess;
    po.correlation_threshold = pre.value("correlation_threshold", po.correlation_threshold);
    po.vif_threshold = pre.value("vif_threshold", po.vif_threshold);
    po.vif_forced_drops = pre.value("vif_forced_drops", po.vif_forced_drops);
    po.standardize = pre.value("standardize", po.standardize);
    po.undersample_seed = pre.value("undersample_seed", po.undersample_seed);
    if (pre.contains("pca_components")) {
      const auto& k = pre["pca_components"];
      if (k.is_string()) {
        config_check(k.get<std::string>() == "elbow", "pca_components must be 'elbow' or a positive integer");
      } else {
        config_check(k.is_number_integer() && k.get<long long>() >= 1, "pca_components must be >= 1");
        po.pca_components = k.get<std::size_t>();
      }
    }
    config_check(po.correlation_threshold > 0.0 && po.correlation_threshold <= 1.0,
                 "correlation_threshold must be in (0, 1]");
    config_check(po.vif_threshold > 1.0, "vif_threshold must be > 1");

    const json split = j.value("split", json::object());
    detail::check_keys(split, {"ratio"}, "split");
    c.split_ratio = split.value("ratio", c.split_ratio);
    config_check(c.split_ratio > 0.0 && c.split_ratio < 1.0, "split ratio must be in (0, 1)");
    c.seed = j.value("seed", c.seed);

    config_check(j.contains("encodings") && j["encodings"].is_array() && !j["encodings"].empty(),
                 "config needs at least one encoding");
    for (const auto& e : j["encodings"]) c.encodings.push_back(detail::encoding_from_json(e));
    config_check(j.contains("models") && j["models"].is_array() && !j["models"].empty(),
                 "config needs at least one model");
    for (const auto& m : j["models"]) {
      auto spec = models::spec_from_json(m);
      if (!m.contains("seed")) spec.seed = c.seed;
      c.models.push_back(spec);
    }
    c.output_dir = detail::resolve(j.value("output_dir", std::string()), base);
    c.save_models = j.value("save_models", false);
    c.repeat = j.value("repeat", 1);
    config_check(c.repeat >= 1, "repeat must be >= 1");
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("bad config: ") + e.what());
  }
  return c;
}

/// `seed` replaces the config's top-level seed before models inherit it.
inline BenchConfig load_config(const std::string& path, std::optional<std::uint64_t> seed = std::nullopt) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error& e) {
    fail(ErrorCode::ConfigError, e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, path + ": " + e.what());
  }
  if (seed && j.is_object()) j["seed"] = *seed;
  return config_from_json(j, fs::absolute(path).parent_path());
}

/// Fully resolved form: explicit defaults, absolute paths, per-model seeds.
inline json config_to_json(const BenchConfig& c) {
  json schema;
  if (c.schema_name == "telco") {
    schema = "telco";
  } else {
    json cols = json::array();
    for (const auto& col : c.schema.columns) cols.push_back({{"name", col.name}, {"kind", detail::to_string(col.kind)}});
    schema = json{{"columns", cols}, {"positive_label", c.schema.positive_label}};
  }
  const auto& po = c.preprocess;
  json pre{{"correlation_threshold", po.correlation_threshold},
           {"vif_threshold", po.vif_threshold},
           {"vif_forced_drops", po.vif_forced_drops},
           {"standardize", po.standardize},
           {"undersample_seed", po.undersample_seed}};
  pre["pca_components"] = po.pca_components ? json(*po.pca_components) : json("elbow");
  json encs = json::array();
  for (const auto& e : c.encodings) encs.push_back(detail::encoding_to_json(e));
  json mods = json::array();
  for (const auto& m : c.models) mods.push_back(models::spec_to_json(m));
  json j{{"dataset", c.dataset}, {"schema", schema},        {"preprocess", pre},
         {"split", {{"ratio", c.split_ratio}}}, {"seed", c.seed}, {"encodings", encs},
         {"models", mods},       {"save_models", c.save_models}, {"repeat", c.repeat}};
  if (!c.output_dir.empty()) j["output_dir"] = c.output_dir;
  return j;
}

/// Hash of the resolved config, excluding where results are written.
inline std::string config_hash(const BenchConfig& c) {
  json j = config_to_json(c);
  j.erase("output_dir");
  return hex64(fnv1a(j.dump()));
}

// ---------------------------------------------------------------------------
// Results

struct RunResult {
  std::string encoding;
  std::string model;
  std::size_t encoding_index = 0;
  std::size_t model_index = 0;
  bool ok = true;
  std::string error_code;  // failure entry; empty when ok
  std::string error;
  metrics::MetricReport metrics;
  double encode_ms = 0.0;
  double fit_ms = 0.0;
  double predict_ms = 0.0;
  std::uint64_t split_seed = 0;
  std::uint64_t undersample_seed = 0;
  std::uint64_t model_seed = 0;
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::string split_checksum;
  long iterations = 0;
  bool converged = true;
  std::string timestamp;
};

struct BenchRun {
  json manifest;
  json preprocess;  // PreprocessReport
  std::vector<RunResult> results;
};

namespace detail {

inline json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace detail

inline json to_json(const metrics::MetricReport& m) {
  return json{{"accuracy", detail::opt_json(m.accuracy)},
              {"precision", detail::opt_json(m.precision)},
              {"recall", detail::opt_json(m.recall)},
              {"f1", detail::opt_json(m.f1)},
              {"roc_auc", detail::opt_json(m.roc_auc)},
              {"kappa", detail::opt_json(m.kappa)},
              {"threshold", m.threshold},
              {"confusion", {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"tn", m.counts.tn}, {"fn", m.counts.fn}}}};
}

inline metrics::MetricReport metric_report_from_json(const json& j) {
  metrics::MetricReport m;
  m.accuracy = detail::opt_from(j.at("accuracy"));
  m.precision = detail::opt_from(j.at("precision"));
  m.recall = detail::opt_from(j.at("recall"));
  m.f1 = detail::opt_from(j.at("f1"));
  m.roc_auc = detail::opt_from(j.at("roc_auc"));
  m.kappa = detail::opt_from(j.at("kappa"));
  m.threshold = j.at("threshold").get<double>();
  const auto& c = j.at("confusion");
  m.counts = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(), c.at("tn").get<std::size_t>(),
              c.at("fn").get<std::size_t>()};
  return m;
}

inline json to_json(const RunResult& r) {
  json j{{"encoding", r.encoding},
         {"model", r.model},
         {"encoding_index", r.encoding_index},
         {"model_index", r.model_index},
         {"ok", r.ok},
         {"timings", {{"encode_ms", r.encode_ms}, {"fit_ms", r.fit_ms}, {"predict_ms", r.predict_ms}}},
         {"seeds", {{"split", r.split_seed}, {"undersample", r.undersample_seed}, {"model", r.model_seed}}},
         {"dim_in", r.dim_in},
         {"dim_out", r.dim_out},
         {"n_train", r.n_train},
         {"n_test", r.n_test},
         {"split_checksum", r.split_checksum},
         {"iterations", r.iterations},
         {"converged", r.converged},
         {"timestamp", r.timestamp}};
  if (r.ok) {
    j["metrics"] = to_json(r.metrics);
  } else {
    j["error"] = {{"code", r.error_code}, {"message", r.error}};
  }
  return j;
}

inline RunResult run_result_from_json(const json& j) {
  RunResult r;
  r.encoding = j.at("encoding").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.encoding_index = j.at("encoding_index").get<std::size_t>();
  r.model_index = j.at("model_index").get<std::size_t>();
  r.ok = j.at("ok").get<bool>();
  if (r.ok) {
    r.metrics = metric_report_from_json(j.at("metrics"));
  } else {
    r.error_code = j.at("error").at("code").get<std::string>();
    r.error = j.at("error").at("message").get<std::string>();
  }
  const auto& t = j.at("timings");
  r.encode_ms = t.at("encode_ms").get<double>();
  r.fit_ms = t.at("fit_ms").get<double>();
  r.predict_ms = t.at("predict_ms").get<double>();
  const auto& s = j.at("seeds");
  r.split_seed = s.at("split").get<std::uint64_t>();
  r.undersample_seed = s.at("undersample").get<std::uint64_t>();
  r.model_seed = s.at("model").get<std::uint64_t>();
  r.dim_in = j.at("dim_in").get<std::size_t>();
  r.dim_out = j.at("dim_out").get<std::size_t>();
  r.n_train = j.at("n_train").get<std::size_t>();
  r.n_test = j.at("n_test").get<std::size_t>();
  r.split_checksum = j.at("split_checksum").get<std::string>();
  r.iterations = j.at("iterations").get<long>();
  r.converged = j.at("converged").get<bool>();
  r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

inline json to_json(const BenchRun& run) {
  json results = json::array();
  for (const auto& r : run.results) results.push_back(to_json(r));
  return json{{"manifest", run.manifest}, {"preprocess", run.preprocess}, {"results", results}};
}

inline BenchRun bench_run_from_json(const json& j) {
  BenchRun run;
  try {
    run.manifest = j.at("manifest");
    run.preprocess = j.value("preprocess", json::object());
    for (const auto& r : j.at("results")) run.results.push_back(run_result_from_json(r));
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("bad results document: ") + e.what());
  }
  return run;
}

inline BenchRun read_results(const std::string& path) {
  try {
    return bench_run_from_json(json::parse(read_text(path)));
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Running

/// Display name of a model cell. The generic boosted-tree model stands in for
/// the vendor GBDT libraries.
inline std::string cell_model_name(const models::ModelSpec& s) {
  if (s.name.empty() && s.kind == models::ModelKind::gbt) return "gbt (stands in for LightGBM/CatBoost)";
  return s.display_name();
}

struct Prepared {
  pipeline::Preprocessed data;
  pipeline::Split split;
  std::string checksum;
};

inline Prepared prepare(const BenchConfig& cfg) {
  Prepared p;
  p.data = pipeline::preprocess(pipeline::load_csv(cfg.dataset, cfg.schema), cfg.preprocess);
  p.split = pipeline::train_test_split(p.data.reduced, cfg.split_ratio, cfg.seed);
  p.checksum = hex64(split_checksum(p.split));
  return p;
}

struct EncodedSplit {
  FeatureMatrix train;
  FeatureMatrix test;
};

/// Encodes both halves. Scalers and quantizers see the training half only.
inline EncodedSplit encode_split(const BenchEncoding& enc, const pipeline::Split& split) {
  if (!enc.scheme) return {split.train, split.test};
  const auto& s = *enc.scheme;
  switch (s.kind) {
    case encoding::Kind::basis: {
      const auto q = encoding::Quantizer::fit(split.train.values, *s.bits_per_feature, s.max_qubits);
      return {encoding::embed_matrix(split.train, s, &q), encoding::embed_matrix(split.test, s, &q)};
    }
    case encoding::Kind::angle: {
      if (s.angle->map == encoding::AngleMap::raw) {
        return {encoding::embed_matrix(split.train, s), encoding::embed_matrix(split.test, s)};
      }
      const auto scaler = encoding::MinMaxScaler::fit(split.train.values);
      FeatureMatrix tr = split.train, te = split.test;
      tr.values = scaler.transform(tr.values);
      te.values = scaler.transform(te.values);
      return {encoding::embed_matrix(tr, s), encoding::embed_matrix(te, s)};
    }
    case encoding::Kind::amplitude:
      return {encoding::embed_matrix(split.train, s), encoding::embed_matrix(split.test, s)};
    case encoding::Kind::superposition:
      break;
  }
  fail(ErrorCode::UnsupportedScheme, "superposition encoding cannot run in the matrix");
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

/// Runs every cell in config order (encoding-major). A failing cell records
/// its error and the matrix continues.
inline BenchRun run_matrix(const BenchConfig& cfg, const Prepared& prep) {
  BenchRun run;
  run.preprocess = pipeline::to_json(prep.data.report);
  const auto& split = prep.split;

  for (std::size_t ei = 0; ei < cfg.encodings.size(); ++ei) {
    const auto& enc = cfg.encodings[ei];
    std::optional<EncodedSplit> encoded;
    std::vector<double> encode_times;
    Error encode_error(ErrorCode::InvalidArgument, "");
    bool encode_failed = false;
    try {
      for (int rep = 0; rep < cfg.repeat; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        auto e = encode_split(enc, split);
        encode_times.push_back(enc.scheme ? elapsed_ms(start) : 0.0);
        if (!encoded) encoded = std::move(e);
      }
    } catch (const Error& e) {
      encode_failed = true;
      encode_error = e;
    }

    for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
      const auto& spec = cfg.models[mi];
      RunResult r;
      r.encoding = enc.name;
      r.model = cell_model_name(spec);
      r.encoding_index = ei;
      r.model_index = mi;
      r.split_seed = cfg.seed;
      r.undersample_seed = cfg.preprocess.undersample_seed;
      r.model_seed = spec.seed;
      r.dim_in = static_cast<std::size_t>(split.train.cols());
      r.n_train = static_cast<std::size_t>(split.train.rows());
      r.n_test = static_cast<std::size_t>(split.test.rows());
      r.split_checksum = prep.checksum;
      r.timestamp = utc_timestamp();
      if (encode_failed) {
        r.ok = false;
        r.error_code = std::string(to_string(encode_error.code()));
        r.error = encode_error.what();
        run.results.push_back(std::move(r));
        continue;
      }
      r.encode_ms = median(encode_times);
      r.dim_out = static_cast<std::size_t>(encoded->train.cols());
      try {
        std::vector<double> fit_times, predict_times;
        for (int rep = 0; rep < cfg.repeat; ++rep) {
          auto start = std::chrono::steady_clock::now();
          const auto model = models::fit(spec, encoded->train);
          fit_times.push_back(elapsed_ms(start));
          start = std::chrono::steady_clock::now();
          const auto scores = models::predict_proba(model, encoded->test);
          predict_times.push_back(elapsed_ms(start));
          if (rep == 0) {
            r.metrics = metrics::evaluate(encoded->test.labels, scores);
            r.iterations = model.iterations;
            r.converged = model.converged;
            if (cfg.save_models && !cfg.output_dir.empty()) {
              write_text(fs::path(cfg.output_dir) / "models" / (enc.name + "__" + spec.display_name() + ".json"),
                         models::to_json(model).dump(2) + "\n");
            }
          }
        }
        r.fit_ms = median(fit_times);
        r.predict_ms = median(predict_times);
      } catch (const Error& e) {
        r.ok = false;
        r.error_code = std::string(to_string(e.code()));
        r.error = e.what();
      }
      run.results.push_back(std::move(r));
    }
  }

  std::string dataset_bytes;
  try {
    dataset_bytes = read_text(cfg.dataset);
  } catch (const Error&) {
  }
  run.manifest = json{{"tool", "qembed"},
                      {"created", utc_timestamp()},
                      {"config_hash", config_hash(cfg)},
                      {"config", config_to_json(cfg)},
                      {"dataset_hash", hex64(fnv1a(dataset_bytes))},
                      {"seeds",
                       {{"split", cfg.seed}, {"undersample", cfg.preprocess.undersample_seed}}},
                      {"split_checksum", prep.checksum},
                      {"cells", run.results.size()}};
  return run;
}

inline BenchRun run_matrix(const BenchConfig& cfg) { return run_matrix(cfg, prepare(cfg)); }

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { csv, markdown };

inline ReportFormat report_format_from_string(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  fail(ErrorCode::ConfigError, "unknown report format '" + std::string(s) + "'");
}

inline const std::vector<std::string>& report_header() {
  static const std::vector<std::string> h{"encoding", "model",    "accuracy",   "precision",
                                          "recall",   "f1",       "roc_auc",    "kappa",
                                          "encode_ms", "fit_ms",  "predict_ms", "status"};
  return h;
}

/// One row per cell, encoding-major in config order. Undefined metrics and
/// every metric of a failed cell render as NA; `status` is "ok" or the
/// failure's error code.
inline std::string emit_report(const std::vector<RunResult>& results, ReportFormat format) {
  if (results.empty()) fail(ErrorCode::EmptyResults, "no results to report");
  std::vector<const RunResult*> rows;
  for (const auto& r : results) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const RunResult* a, const RunResult* b) {
    return std::tie(a->encoding_index, a->model_index) < std::tie(b->encoding_index, b->model_index);
  });

  const bool md = format == ReportFormat::markdown;
  auto metric = [&](const RunResult& r, const std::optional<double>& v) -> std::string {
    if (!r.ok || !v) return "NA";
    if (!md) return shortest(*v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return buf;
  };
  auto ms = [&](double v) -> std::string {
    if (!md) return shortest(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
  };

  std::ostringstream out;
  const auto& header = report_header();
  auto emit_row = [&](const std::vector<std::string>& cells) {
    if (md) {
      out << '|';
      for (const auto& c : cells) out << ' ' << c << " |";
    } else {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv::escape(cells[i]);
    }
    out << '\n';
  };
  emit_row(header);
  if (md) {
    out << '|';
    for (std::size_t i = 0; i < header.size(); ++i) out << (i < 2 || i == header.size() - 1 ? " --- |" : " ---: |");
    out << '\n';
  }
  for (const RunResult* r : rows) {
    const auto& m = r->metrics;
    emit_row({r->encoding, r->model, metric(*r, m.accuracy), metric(*r, m.precision), metric(*r, m.recall),
              metric(*r, m.f1), metric(*r, m.roc_auc), metric(*r, m.kappa), ms(r->encode_ms), ms(r->fit_ms),
              ms(r->predict_ms), r->ok ? "ok" : r->error_code});
  }
  return out.str();
}

inline std::string report_file_name(ReportFormat f) { return f == ReportFormat::csv ? "report.csv" : "report.md"; }

/// Writes results.json plus report.csv and report.md into `dir`.
inline void persist(const BenchRun& run, const fs::path& dir) {
  write_text(dir / kResultsFile, to_json(run).dump(2) + "\n");
  for (auto f : {ReportFormat::csv, ReportFormat::markdown}) write_text(dir / report_file_name(f), emit_report(run.results, f));
}

/// Cells whose MetricReports differ between two runs, as "encoding/model".
inline std::vector<std::string> compare_metrics(const std::vector<RunResult>& a, const std::vector<RunResult>& b) {
  std::vector<std::string> diffs;
  if (a.size() != b.size()) {
    diffs.push_back("cell count " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    return diffs;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool same = a[i].encoding == b[i].encoding && a[i].model == b[i].model && a[i].ok == b[i].ok &&
                      a[i].error_code == b[i].error_code && a[i].metrics == b[i].metrics &&
                      a[i].split_checksum == b[i].split_checksum;
    if (!same) diffs.push_back(a[i].encoding + "/" + a[i].model);
  }
  return diffs;
}

}  // namespace qembed::bench
