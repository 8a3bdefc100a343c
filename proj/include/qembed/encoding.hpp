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

// Classical-to-quantum encodings (basis, superposition, angle, amplitude) and
// the readouts that turn an encoded state back into classical features.
//
// Written kets |b_{n-1} ... b_0> map their leftmost character to the highest
// qubit index, so printed states read the same as the input bitstring.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qembed/error.hpp"
#include "qembed/feature_matrix.hpp"
#include "qembed/qsim.hpp"

namespace qembed::encoding {

using qsim::Amplitude;
using qsim::StateVector;

enum class Kind { basis, superposition, angle, amplitude };

/// linear_pi: theta = pi * x for x in [0, 1]. raw: theta = x radians.
enum class AngleMap { linear_pi, raw };

enum class ReadoutMode { probability_vector, z_expectations, amplitude_parts };

struct AngleParams {
  qsim::Axis axis = qsim::Axis::Y;
  AngleMap map = AngleMap::linear_pi;
};

struct EncodingScheme {
  Kind kind = Kind::amplitude;
  std::optional<AngleParams> angle;          // kind == angle only
  std::optional<unsigned> bits_per_feature;  // kind == basis only
  ReadoutMode readout = ReadoutMode::probability_vector;
  unsigned max_qubits = qsim::kDefaultMaxQubits;

  static EncodingScheme basis(unsigned bits_per_feature = 4,
                              ReadoutMode readout = ReadoutMode::probability_vector) {
    EncodingScheme s;
    s.kind = Kind::basis;
    s.bits_per_feature = bits_per_feature;
    s.readout = readout;
    return s;
  }
  static EncodingScheme superposition(ReadoutMode readout = ReadoutMode::probability_vector) {
    EncodingScheme s;
    s.kind = Kind::superposition;
    s.readout = readout;
    return s;
  }
  static EncodingScheme angle_scheme(qsim::Axis axis = qsim::Axis::Y,
                                     AngleMap map = AngleMap::linear_pi,
                                     ReadoutMode readout = ReadoutMode::z_expectations) {
    EncodingScheme s;
    s.kind = Kind::angle;
    s.angle = AngleParams{axis, map};
    s.readout = readout;
    return s;
  }
  static EncodingScheme amplitude(ReadoutMode readout = ReadoutMode::probability_vector) {
    EncodingScheme s;
    s.kind = Kind::amplitude;
    s.readout = readout;
    return s;
  }

  void validate() const {
    if (angle.has_value() != (kind == Kind::angle)) {
      fail(ErrorCode::InvalidArgument, "angle parameters are required for, and only for, angle encoding");
    }
    if (bits_per_feature.has_value() != (kind == Kind::basis)) {
      fail(ErrorCode::InvalidArgument, "bits_per_feature is required for, and only for, basis encoding");
    }
    if (bits_per_feature && *bits_per_feature < 1) {
      fail(ErrorCode::InvalidArgument, "bits_per_feature must be >= 1");
    }
    if (max_qubits < 1) fail(ErrorCode::InvalidArgument, "max_qubits must be >= 1");
  }
};

constexpr std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::basis: return "basis";
    case Kind::superposition: return "superposition";
    case Kind::angle: return "angle";
    case Kind::amplitude: return "amplitude";
  }
  return "?";
}

constexpr std::string_view to_string(ReadoutMode m) {
  switch (m) {
    case ReadoutMode::probability_vector: return "probability_vector";
    case ReadoutMode::z_expectations: return "z_expectations";
    case ReadoutMode::amplitude_parts: return "amplitude_parts";
  }
  return "?";
}

inline std::size_t readout_length(ReadoutMode mode, unsigned n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  switch (mode) {
    case ReadoutMode::probability_vector: return dim;
    case ReadoutMode::z_expectations: return n_qubits;
    case ReadoutMode::amplitude_parts: return 2 * dim;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Encoders

/// Bits in written order: bits[0] is the leftmost (most significant) character.
inline StateVector basis_encode(std::span<const int> bits,
                                unsigned max_qubits = qsim::kDefaultMaxQubits) {
  if (bits.empty()) fail(ErrorCode::EmptyInput, "basis encoding needs at least one bit");
  if (bits.size() > max_qubits) {
    fail(ErrorCode::QubitCapExceeded, std::to_string(bits.size()) + " bits exceed the " +
                                          std::to_string(max_qubits) + "-qubit cap");
  }
  const std::size_t n = bits.size();
  std::vector<qsim::Factor> factors(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const int b = bits[pos];
    if (b != 0 && b != 1) {
      fail(ErrorCode::NonBinaryInput, "entry " + std::to_string(pos) + " is " + std::to_string(b));
    }
    factors[n - 1 - pos] = b ? qsim::Factor{Amplitude(0.0), Amplitude(1.0)}
                             : qsim::Factor{Amplitude(1.0), Amplitude(0.0)};
  }
  return StateVector::from_factors(std::move(factors), max_qubits);
}

inline std::vector<int> parse_bitstring(std::string_view text) {
  if (text.empty()) fail(ErrorCode::EmptyInput, "empty bitstring");
  std::vector<int> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      fail(ErrorCode::NonBinaryInput, "bitstring contains '" + std::string(1, c) + "'");
    }
    bits.push_back(c - '0');
  }
  return bits;
}

/// 7-bit ASCII code of c, most significant bit first.
inline std::vector<int> ascii_bits(char c) {
  const auto code = static_cast<unsigned char>(c);
  if (code >= 128) fail(ErrorCode::NonAsciiCharacter, "byte " + std::to_string(code) + " is not ASCII");
  std::vector<int> bits(7);
  for (int k = 0; k < 7; ++k) bits[static_cast<std::size_t>(k)] = (code >> (6 - k)) & 1;
  return bits;
}

/// One 7-qubit basis state per character.
inline std::vector<StateVector> basis_encode_text(std::string_view text) {
  if (text.empty()) fail(ErrorCode::EmptyInput, "text is empty");
  std::vector<StateVector> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(basis_encode(ascii_bits(c)));
  return out;
}

/// Uniform superposition over an explicit set of equal-length bitstrings.
inline StateVector superposition_encode(std::span<const std::string> strings,
                                        unsigned max_qubits = qsim::kDefaultMaxQubits) {
  if (strings.empty()) fail(ErrorCode::EmptyInput, "superposition needs at least one bitstring");
  const std::size_t n = strings.front().size();
  if (n == 0) fail(ErrorCode::EmptyInput, "empty bitstring");
  std::set<std::string> seen;
  for (const auto& s : strings) {
    if (s.size() != n) {
      fail(ErrorCode::LengthMismatch, "bitstring '" + s + "' has length " + std::to_string(s.size()) +
                                          ", expected " + std::to_string(n));
    }
    parse_bitstring(s);
    if (!seen.insert(s).second) fail(ErrorCode::DuplicateString, "duplicate bitstring '" + s + "'");
  }
  if (n > max_qubits) {
    fail(ErrorCode::QubitCapExceeded, std::to_string(n) + " qubits exceed the cap");
  }
  if (strings.size() == 1) return basis_encode(parse_bitstring(strings.front()), max_qubits);

  std::vector<Amplitude> amps(std::size_t{1} << n, Amplitude(0.0));
  const double a = 1.0 / std::sqrt(static_cast<double>(strings.size()));
  for (const auto& s : strings) amps[std::stoull(s, nullptr, 2)] = Amplitude(a);
  return StateVector::from_amplitudes(std::move(amps), max_qubits);
}

/// Feature i drives qubit i through R_axis(theta_i)|0>.
inline StateVector angle_encode(std::span<const double> x, const EncodingScheme& scheme) {
  if (scheme.kind != Kind::angle || !scheme.angle) {
    fail(ErrorCode::InvalidArgument, "angle_encode needs an angle scheme");
  }
  if (x.empty()) fail(ErrorCode::EmptyInput, "angle encoding needs at least one feature");
  if (x.size() > scheme.max_qubits) {
    fail(ErrorCode::QubitCapExceeded, std::to_string(x.size()) + " features exceed the " +
                                          std::to_string(scheme.max_qubits) + "-qubit cap");
  }
  std::vector<qsim::Factor> factors;
  factors.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) fail(ErrorCode::NonFiniteInput, "feature " + std::to_string(i));
    double theta = x[i];
    if (scheme.angle->map == AngleMap::linear_pi) {
      if (x[i] < 0.0 || x[i] > 1.0) {
        fail(ErrorCode::OutOfRangeFeature,
             "feature " + std::to_string(i) + " = " + std::to_string(x[i]) + " outside [0, 1]");
      }
      theta = std::numbers::pi * x[i];
    }
    const qsim::Gate1Q g = qsim::rotation_gate(scheme.angle->axis, theta);
    // R|0> is the first column of R.
    factors.push_back(qsim::Factor{g(0, 0), g(1, 0)});
  }
  return StateVector::from_factors(std::move(factors), scheme.max_qubits);
}

/// x / ||x||_2, zero-padded to the next power of two (at least one qubit).
inline StateVector amplitude_encode(std::span<const double> x,
                                    unsigned max_qubits = qsim::kDefaultMaxQubits) {
  if (x.empty()) fail(ErrorCode::EmptyInput, "amplitude encoding needs at least one value");
  double sumsq = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteInput, "amplitude input must be finite");
    sumsq += v * v;
  }
  if (sumsq == 0.0) fail(ErrorCode::ZeroVector, "cannot normalize the zero vector");
  unsigned n = 1;
  while ((std::size_t{1} << n) < x.size()) {
    ++n;
    if (n > max_qubits) break;
  }
  if (n > max_qubits) {
    fail(ErrorCode::QubitCapExceeded, std::to_string(x.size()) + " values need more than " +
                                          std::to_string(max_qubits) + " qubits");
  }
  // Scale by the max-abs first so huge or tiny inputs do not overflow.
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  double norm = 0.0;
  for (double v : x) norm += (v / scale) * (v / scale);
  norm = std::sqrt(norm);
  std::vector<Amplitude> amps(std::size_t{1} << n, Amplitude(0.0));
  for (std::size_t i = 0; i < x.size(); ++i) amps[i] = Amplitude((x[i] / scale) / norm);
  return StateVector::from_amplitudes(std::move(amps), max_qubits);
}

// ---------------------------------------------------------------------------
// Scaling and quantization, fitted on a training split.

/// Per-column min-max scaling to [0, 1]. Values outside the fitted range are
/// clamped; constant columns map to 0.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;

  static MinMaxScaler fit(const Matrix& train) {
    if (train.rows() == 0) fail(ErrorCode::EmptyInput, "cannot fit a scaler on zero rows");
    MinMaxScaler s;
    s.min_ = train.colwise().minCoeff().transpose();
    s.max_ = train.colwise().maxCoeff().transpose();
    return s;
  }

  Eigen::Index width() const { return min_.size(); }
  const Vector& min() const { return min_; }
  const Vector& max() const { return max_; }

  double scale_value(Eigen::Index col, double v) const {
    const double span = max_(col) - min_(col);
    if (!(span > 0.0)) return 0.0;
    return std::clamp((v - min_(col)) / span, 0.0, 1.0);
  }

  std::vector<double> transform_row(std::span<const double> row) const {
    if (static_cast<Eigen::Index>(row.size()) != width()) {
      fail(ErrorCode::DimensionMismatch, "row width " + std::to_string(row.size()) +
                                             " does not match scaler width " + std::to_string(width()));
    }
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) out[c] = scale_value(static_cast<Eigen::Index>(c), row[c]);
    return out;
  }

  Matrix transform(const Matrix& m) const {
    if (m.cols() != width()) fail(ErrorCode::DimensionMismatch, "matrix width does not match scaler");
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = scale_value(c, m(r, c));
    }
    return out;
  }

 private:
  Vector min_;
  Vector max_;
};

/// Turns continuous features into a bitstring for basis encoding: min-max scale
/// each feature, then emit a fixed-point code of `bits` bits (MSB first).
/// Features and bits are trimmed so the total stays within max_qubits.
class Quantizer {
 public:
  Quantizer() = default;

  static Quantizer fit(const Matrix& train, unsigned bits_per_feature = 4,
                       unsigned max_qubits = qsim::kDefaultMaxQubits) {
    if (bits_per_feature < 1) fail(ErrorCode::InvalidArgument, "bits_per_feature must be >= 1");
    if (train.cols() < 1) fail(ErrorCode::EmptyInput, "cannot fit a quantizer on zero columns");
    Quantizer q;
    q.scaler_ = MinMaxScaler::fit(train);
    const auto d = static_cast<unsigned>(train.cols());
    q.features_used_ = std::min(d, max_qubits);
    q.bits_ = std::clamp(bits_per_feature, 1U, max_qubits / q.features_used_);
    return q;
  }

  unsigned bits_per_feature() const { return bits_; }
  unsigned features_used() const { return features_used_; }
  unsigned total_bits() const { return bits_ * features_used_; }
  const MinMaxScaler& scaler() const { return scaler_; }

  /// Fixed-point level of a [0, 1] value.
  unsigned level(double unit) const {
    const unsigned top = (1U << bits_) - 1U;
    return static_cast<unsigned>(std::lround(std::clamp(unit, 0.0, 1.0) * top));
  }

  std::vector<int> bits(std::span<const double> row) const {
    const auto scaled = scaler_.transform_row(row);
    std::vector<int> out;
    out.reserve(total_bits());
    for (unsigned f = 0; f < features_used_; ++f) {
      const unsigned code = level(scaled[f]);
      for (unsigned k = 0; k < bits_; ++k) out.push_back(static_cast<int>((code >> (bits_ - 1 - k)) & 1U));
    }
    return out;
  }

 private:
  MinMaxScaler scaler_;
  unsigned features_used_ = 0;
  unsigned bits_ = 1;
};

// ---------------------------------------------------------------------------
// Readout

inline std::vector<double> readout(const StateVector& state, ReadoutMode mode) {
  switch (mode) {
    case ReadoutMode::probability_vector:
      return qsim::probabilities(state);
    case ReadoutMode::z_expectations: {
      std::vector<double> z(state.n_qubits());
      for (unsigned q = 0; q < state.n_qubits(); ++q) z[q] = qsim::expectation_z(state, q);
      return z;
    }
    case ReadoutMode::amplitude_parts: {
      const auto amps = state.amplitudes();
      std::vector<double> out(2 * amps.size());
      for (std::size_t i = 0; i < amps.size(); ++i) {
        out[i] = amps[i].real();
        out[amps.size() + i] = amps[i].imag();
      }
      return out;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown readout mode");
}

struct EmbeddedSample {
  StateVector state;
  std::vector<double> features;
  EncodingScheme scheme;
};

/// Encodes one sample and applies the scheme's readout. Basis encoding of
/// non-binary inputs needs a fitted quantizer; angle inputs under linear_pi
/// must already be scaled to [0, 1].
inline EmbeddedSample embed_sample(std::span<const double> x, const EncodingScheme& scheme,
                                   const Quantizer* quantizer = nullptr) {
  scheme.validate();
  auto encode = [&]() -> StateVector {
    switch (scheme.kind) {
      case Kind::basis: {
        if (quantizer) return basis_encode(quantizer->bits(x), scheme.max_qubits);
        std::vector<int> bits;
        bits.reserve(x.size());
        for (double v : x) {
          if (v != 0.0 && v != 1.0) {
            fail(ErrorCode::MissingQuantizer, "continuous input to basis encoding needs a quantizer");
          }
          bits.push_back(v == 1.0 ? 1 : 0);
        }
        return basis_encode(bits, scheme.max_qubits);
      }
      case Kind::angle:
        return angle_encode(x, scheme);
      case Kind::amplitude:
        return amplitude_encode(x, scheme.max_qubits);
      case Kind::superposition:
        fail(ErrorCode::UnsupportedScheme,
             "superposition embedding takes an explicit bitstring set; use superposition_encode");
    }
    fail(ErrorCode::InvalidArgument, "unknown encoding kind");
  };
  StateVector state = encode();
  auto features = readout(state, scheme.readout);
  return EmbeddedSample{std::move(state), std::move(features), scheme};
}

/// Row-wise embed_sample. Labels carry over; the first failing row aborts with
/// its index in the message.
inline FeatureMatrix embed_matrix(const FeatureMatrix& x, const EncodingScheme& scheme,
                                  const Quantizer* quantizer = nullptr) {
  FeatureMatrix out;
  out.labels = x.labels;
  std::vector<double> row(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) row[static_cast<std::size_t>(c)] = x.values(r, c);
    std::vector<double> features;
    try {
      features = embed_sample(row, scheme, quantizer).features;
    } catch (const Error& e) {
      throw Error(e.code(), "row " + std::to_string(r) + ": " + e.what());
    }
    if (r == 0) {
      out.values.resize(x.rows(), static_cast<Eigen::Index>(features.size()));
    } else if (static_cast<Eigen::Index>(features.size()) != out.values.cols()) {
      fail(ErrorCode::DimensionMismatch, "row " + std::to_string(r) + " produced a different width");
    }
    for (std::size_t c = 0; c < features.size(); ++c) out.values(r, static_cast<Eigen::Index>(c)) = features[c];
  }
  const char* prefix = scheme.readout == ReadoutMode::z_expectations ? "z" : scheme.readout == ReadoutMode::probability_vector ? "p" : "a";
  for (Eigen::Index c = 0; c < out.values.cols(); ++c) out.columns.push_back(prefix + std::to_string(c));
  return out;
}

}  // namespace qembed::encoding
