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

// qembed command line: encode, preprocess, bench, report.
//
// Exit codes: 0 success, 1 usage or config error, 2 data error.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qembed/bench.hpp"
#include "qembed/encoding.hpp"
#include "qembed/error.hpp"
#include "qembed/pipeline.hpp"
#include "qembed/qsim.hpp"

namespace {

using namespace qembed;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kDataError = 2;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string fmt(std::complex<double> a) {
  if (a.imag() == 0.0) return fmt(a.real());
  if (a.real() == 0.0) return fmt(a.imag()) + "i";
  return fmt(a.real()) + (a.imag() < 0 ? "" : "+") + fmt(a.imag()) + "i";
}

std::string ket(std::size_t index, unsigned n) {
  std::string s(n, '0');
  for (unsigned q = 0; q < n; ++q) {
    if ((index >> q) & 1U) s[n - 1 - q] = '1';
  }
  return "|" + s + ">";
}

void print_state(std::ostream& out, const qsim::StateVector& st) {
  out << "qubits: " << st.n_qubits() << "\n";
  const auto amps = st.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (std::abs(amps[i]) > 1e-15) out << "  " << ket(i, st.n_qubits()) << "  " << fmt(amps[i]) << "\n";
  }
}

void print_readout(std::ostream& out, const std::vector<double>& v, encoding::ReadoutMode mode) {
  out << "readout (" << encoding::to_string(mode) << "):";
  for (double x : v) out << ' ' << fmt(x);
  out << "\n";
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = pipeline::detail::parse_double(item);
    if (!v) fail(ErrorCode::InvalidArgument, "cannot parse '" + item + "' as a number");
    out.push_back(*v);
  }
  if (out.empty()) fail(ErrorCode::EmptyInput, "empty vector");
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.emplace_back(pipeline::detail::trim(item));
  return out;
}

std::string resolve_out_dir(const std::string& flag, const std::string& configured) {
  if (!flag.empty()) return flag;
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv(bench::kOutDirEnv); env && *env) return env;
  return "qembed-out";
}

struct EncodeArgs {
  std::string scheme;
  std::string bits;
  std::string vector;
  std::string text;
  bool degrees = false;
  std::string axis = "Y";
  std::string readout;
};

int run_encode(const EncodeArgs& a) {
  auto& out = std::cout;
  auto mode_or = [&](encoding::ReadoutMode d) {
    return a.readout.empty() ? d : bench::detail::readout_from_string(a.readout);
  };
  if (a.scheme == "basis" || a.scheme == "text") {
    if (!a.text.empty() || a.scheme == "text") {
      const std::string& t = a.text.empty() ? a.bits : a.text;
      out << "scheme: basis (ASCII, 7 bits per character)\n";
      const auto states = encoding::basis_encode_text(t);
      for (std::size_t i = 0; i < states.size(); ++i) {
        out << "'" << t[i] << "' (" << static_cast<int>(static_cast<unsigned char>(t[i])) << ")\n";
        print_state(out, states[i]);
      }
      return kOk;
    }
    if (a.bits.empty()) fail(ErrorCode::ConfigError, "basis encoding needs --bits or --text");
    const auto st = encoding::basis_encode(encoding::parse_bitstring(a.bits));
    out << "scheme: basis\n";
    print_state(out, st);
    print_readout(out, encoding::readout(st, mode_or(encoding::ReadoutMode::probability_vector)),
                  mode_or(encoding::ReadoutMode::probability_vector));
    return kOk;
  }
  if (a.scheme == "superposition") {
    if (a.bits.empty()) fail(ErrorCode::ConfigError, "superposition encoding needs --bits s1,s2,...");
    const auto strings = split_list(a.bits);
    const auto st = encoding::superposition_encode(strings);
    out << "scheme: superposition\n";
    print_state(out, st);
    print_readout(out, encoding::readout(st, mode_or(encoding::ReadoutMode::probability_vector)),
                  mode_or(encoding::ReadoutMode::probability_vector));
    return kOk;
  }
  if (a.scheme == "amplitude") {
    if (a.vector.empty()) fail(ErrorCode::ConfigError, "amplitude encoding needs --vector");
    const auto x = parse_vector(a.vector);
    double sumsq = 0.0;
    for (double v : x) sumsq += v * v;
    const auto st = encoding::amplitude_encode(x);
    out << "scheme: amplitude\n";
    out << "normalization: 1/sqrt(" << fmt(sumsq) << ")\n";
    print_state(out, st);
    print_readout(out, encoding::readout(st, mode_or(encoding::ReadoutMode::probability_vector)),
                  mode_or(encoding::ReadoutMode::probability_vector));
    return kOk;
  }
  if (a.scheme == "angle") {
    if (a.vector.empty()) fail(ErrorCode::ConfigError, "angle encoding needs --vector");
    auto x = parse_vector(a.vector);
    // Degrees are explicit rotation angles; otherwise features in [0, 1] map to [0, pi].
    if (a.degrees) {
      for (auto& v : x) v = qsim::degrees_to_radians(v);
    }
    const auto mode = mode_or(encoding::ReadoutMode::z_expectations);
    const auto scheme = encoding::EncodingScheme::angle_scheme(
        bench::detail::axis_from_string(a.axis), a.degrees ? encoding::AngleMap::raw : encoding::AngleMap::linear_pi,
        mode);
    const auto st = encoding::angle_encode(x, scheme);
    out << "scheme: angle (R" << a.axis << (a.degrees ? ", degrees" : ", theta = pi * x") << ")\n";
    print_state(out, st);
    print_readout(out, encoding::readout(st, mode), mode);
    return kOk;
  }
  fail(ErrorCode::ConfigError, "unknown scheme '" + a.scheme + "'");
}

int run_preprocess(const std::string& config, const std::string& out_flag, std::optional<std::uint64_t> seed) {
  const auto cfg = bench::load_config(config, seed);
  const auto data = pipeline::preprocess(pipeline::load_csv(cfg.dataset, cfg.schema), cfg.preprocess);
  const auto& r = data.report;
  const fs::path dir = resolve_out_dir(out_flag, cfg.output_dir);
  const auto report = pipeline::to_json(r);
  bench::write_text(dir / "preprocess_report.json", report.dump(2) + "\n");
  std::string curve = "component,explained_variance_ratio,cumulative\n";
  const auto cum = pipeline::cumulative(r.explained_variance_ratio);
  for (std::size_t i = 0; i < cum.size(); ++i) {
    curve += std::to_string(i) + "," + bench::shortest(r.explained_variance_ratio[i]) + "," + bench::shortest(cum[i]) + "\n";
  }
  bench::write_text(dir / "explained_variance.csv", curve);

  auto& out = std::cout;
  out << "rows loaded: " << r.rows_loaded << "\n";
  for (const auto& d : r.dropped) out << "dropped " << d.column << " (" << d.rule << ", " << fmt(d.statistic) << ")\n";
  out << "one-hot columns: " << r.one_hot_columns << "\n";
  out << "class counts: " << r.class_counts_before[0] << "/" << r.class_counts_before[1] << " -> "
      << r.class_counts_after[0] << "/" << r.class_counts_after[1] << "\n";
  out << "elbow index: " << r.elbow_index << " (cumulative " << fmt(r.cumulative_at_elbow) << ")\n";
  out << "pca components: " << r.pca_components << "\n";
  out << "wrote " << (dir / "preprocess_report.json").string() << "\n";
  return kOk;
}

int run_bench(const std::string& config, const std::string& manifest, const std::string& out_flag,
              std::optional<std::uint64_t> seed, const std::string& format, int repeat) {
  const auto fmt_kind = bench::report_format_from_string(format);
  if (!manifest.empty()) {
    const auto previous = bench::read_results(manifest);
    if (!previous.manifest.contains("config")) fail(ErrorCode::ConfigError, manifest + " has no manifest config");
    auto cfg = bench::config_from_json(previous.manifest["config"], fs::absolute(manifest).parent_path());
    cfg.output_dir = out_flag;
    const auto run = bench::run_matrix(cfg);
    if (!out_flag.empty()) bench::persist(run, out_flag);
    const auto diffs = bench::compare_metrics(previous.results, run.results);
    if (run.manifest["config_hash"] != previous.manifest.value("config_hash", "")) {
      std::cout << "warning: config hash differs from the manifest\n";
    }
    if (!diffs.empty()) {
      std::cout << "metric mismatch in " << diffs.size() << " cell(s):\n";
      for (const auto& d : diffs) std::cout << "  " << d << "\n";
      return kDataError;
    }
    std::cout << "reproduced " << run.results.size() << " cells exactly\n";
    return kOk;
  }
  if (config.empty()) fail(ErrorCode::ConfigError, "bench needs --config or --manifest");
  auto cfg = bench::load_config(config, seed);
  if (repeat > 0) cfg.repeat = repeat;
  cfg.output_dir = resolve_out_dir(out_flag, cfg.output_dir);
  const auto run = bench::run_matrix(cfg);
  bench::persist(run, cfg.output_dir);
  std::cout << bench::emit_report(run.results, fmt_kind);
  std::size_t failed = 0;
  for (const auto& r : run.results) failed += !r.ok;
  std::cerr << run.results.size() << " cells, " << failed << " failed; results in "
            << (fs::path(cfg.output_dir) / bench::kResultsFile).string() << "\n";
  return kOk;
}

int run_report(const std::string& results, const std::string& format, const std::string& out_file) {
  fs::path path = results;
  if (fs::is_directory(path)) path /= bench::kResultsFile;
  const auto run = bench::read_results(path.string());
  const auto text = bench::emit_report(run.results, bench::report_format_from_string(format));
  if (out_file.empty()) {
    std::cout << text;
  } else {
    bench::write_text(out_file, text);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qembed: quantum data embedding benchmark"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Encode one vector, bitstring or text and print the state");
  encode->add_option("--scheme", enc.scheme, "basis | text | superposition | angle | amplitude")->required();
  encode->add_option("--bits", enc.bits, "Bitstring (basis) or comma-separated bitstrings (superposition)");
  encode->add_option("--vector", enc.vector, "Comma-separated values (angle, amplitude)");
  encode->add_option("--text", enc.text, "ASCII text, one 7-qubit basis state per character");
  encode->add_flag("--degrees", enc.degrees, "Angle inputs are rotation angles in degrees");
  encode->add_option("--axis", enc.axis, "Rotation axis for angle encoding: X, Y or Z");
  encode->add_option("--readout", enc.readout, "probability_vector | z_expectations | amplitude_parts");

  std::string config, out_dir, format = "csv", manifest, results;
  std::optional<std::uint64_t> seed;
  int repeat = 0;
  auto* pre = app.add_subcommand("preprocess", "Run the preprocessing pipeline and write its report");
  pre->add_option("--config", config, "Bench config (JSON)")->required();
  pre->add_option("--out", out_dir, std::string("Output directory (default: config, then $") + bench::kOutDirEnv + ")");
  pre->add_option("--seed", seed, "Override the config seed");

  auto* bch = app.add_subcommand("bench", "Run the encoding x model matrix");
  auto* cfg_opt = bch->add_option("--config", config, "Bench config (JSON)");
  bch->add_option("--manifest", manifest, "Re-run a previous results.json and compare metrics")->excludes(cfg_opt);
  bch->add_option("--out", out_dir, std::string("Output directory (default: config, then $") + bench::kOutDirEnv + ")");
  bch->add_option("--seed", seed, "Override the config seed");
  bch->add_option("--format", format, "Report printed to stdout: csv | markdown");
  bch->add_option("--repeat", repeat, "Time each cell n times and report the median")->check(CLI::PositiveNumber);

  auto* rep = app.add_subcommand("report", "Re-render persisted results");
  rep->add_option("--results", results, "results.json or the directory holding it")->required();
  rep->add_option("--format", format, "csv | markdown");
  rep->add_option("--out", out_dir, "Write the report to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() != 0) std::cerr << app.help();
    return e.get_exit_code() == 0 ? kOk : kConfigError;
  }

  try {
    if (*encode) return run_encode(enc);
    if (*pre) return run_preprocess(config, out_dir, seed);
    if (*bch) return run_bench(config, manifest, out_dir, seed, format, repeat);
    if (*rep) return run_report(results, format, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? kConfigError : kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}
