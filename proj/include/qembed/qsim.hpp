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

// Statevector simulator. Qubit indices are 0-based little-endian: qubit q is
// bit q of the basis-state index.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "qembed/error.hpp"

namespace qembed::qsim {

using Amplitude = std::complex<double>;

inline constexpr unsigned kDefaultMaxQubits = 24;
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kGateTolerance = 1e-12;

enum class Axis { X, Y, Z };

/// 2x2 single-qubit gate, row-major.
struct Gate1Q {
  std::array<Amplitude, 4> m{};

  const Amplitude& operator()(int row, int col) const { return m[2 * row + col]; }
  Amplitude& operator()(int row, int col) { return m[2 * row + col]; }

  Gate1Q adjoint() const {
    return Gate1Q{{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
  }

  friend Gate1Q operator*(const Gate1Q& a, const Gate1Q& b) {
    Gate1Q out;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
      }
    }
    return out;
  }

  /// Largest elementwise deviation of G*G^dagger from the identity.
  double unitarity_error() const {
    const Gate1Q p = *this * adjoint();
    double worst = 0.0;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        worst = std::max(worst, std::abs(p(r, c) - Amplitude(r == c ? 1.0 : 0.0)));
      }
    }
    return worst;
  }

  bool is_unitary(double tol = kGateTolerance) const { return unitarity_error() <= tol; }
};

namespace detail {
inline void require_finite_angle(double theta) {
  if (!std::isfinite(theta)) fail(ErrorCode::NonFiniteAngle, "rotation angle must be finite");
}
}  // namespace detail

inline Gate1Q rx_gate(double theta) {
  detail::require_finite_angle(theta);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return Gate1Q{{Amplitude(c, 0.0), Amplitude(0.0, -s), Amplitude(0.0, -s), Amplitude(c, 0.0)}};
}

inline Gate1Q ry_gate(double theta) {
  detail::require_finite_angle(theta);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return Gate1Q{{Amplitude(c, 0.0), Amplitude(-s, 0.0), Amplitude(s, 0.0), Amplitude(c, 0.0)}};
}

inline Gate1Q rz_gate(double theta) {
  detail::require_finite_angle(theta);
  return Gate1Q{{std::polar(1.0, -theta / 2.0), Amplitude(0.0), Amplitude(0.0),
                 std::polar(1.0, theta / 2.0)}};
}

inline Gate1Q rotation_gate(Axis axis, double theta) {
  switch (axis) {
    case Axis::X: return rx_gate(theta);
    case Axis::Y: return ry_gate(theta);
    case Axis::Z: return rz_gate(theta);
  }
  fail(ErrorCode::InvalidArgument, "unknown rotation axis");
}

inline Gate1Q hadamard() {
  const double h = 1.0 / std::numbers::sqrt2;
  return Gate1Q{{Amplitude(h), Amplitude(h), Amplitude(h), Amplitude(-h)}};
}

inline Gate1Q pauli_x() { return Gate1Q{{Amplitude(0.0), Amplitude(1.0), Amplitude(1.0), Amplitude(0.0)}}; }

inline Gate1Q s_gate() {
  return Gate1Q{{Amplitude(1.0), Amplitude(0.0), Amplitude(0.0), Amplitude(0.0, 1.0)}};
}

inline Gate1Q identity_gate() {
  return Gate1Q{{Amplitude(1.0), Amplitude(0.0), Amplitude(0.0), Amplitude(1.0)}};
}

struct SingleQubitOp {
  Gate1Q gate;
  unsigned target = 0;
};
struct CnotOp {
  unsigned control = 0;
  unsigned target = 0;
};
struct SwapOp {
  unsigned a = 0;
  unsigned b = 0;
};
struct ToffoliOp {
  unsigned control1 = 0;
  unsigned control2 = 0;
  unsigned target = 0;
};

using CircuitOp = std::variant<SingleQubitOp, CnotOp, SwapOp, ToffoliOp>;

enum class Layout { dense, product };

using Factor = std::array<Amplitude, 2>;

class StateVector;
StateVector apply(StateVector state, const CircuitOp& op);

/// Pure n-qubit state. Product layout keeps one normalized 2-amplitude factor
/// per qubit; dense layout keeps all 2^n amplitudes.
class StateVector {
 public:
  /// |0...0>, product layout.
  static StateVector zero(unsigned n_qubits, unsigned max_qubits = kDefaultMaxQubits) {
    check_qubit_count(n_qubits, max_qubits);
    StateVector s;
    s.n_qubits_ = n_qubits;
    s.layout_ = Layout::product;
    s.factors_.assign(n_qubits, Factor{Amplitude(1.0), Amplitude(0.0)});
    return s;
  }

  /// Dense state from 2^n amplitudes; the vector must already be normalized.
  static StateVector from_amplitudes(std::vector<Amplitude> amps,
                                     unsigned max_qubits = kDefaultMaxQubits) {
    if (amps.size() < 2 || (amps.size() & (amps.size() - 1)) != 0) {
      fail(ErrorCode::InvalidArgument,
           "amplitude count must be a power of two >= 2, got " + std::to_string(amps.size()));
    }
    const auto n = static_cast<unsigned>(std::countr_zero(amps.size()));
    check_qubit_count(n, max_qubits);
    double norm = 0.0;
    for (const auto& a : amps) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        fail(ErrorCode::NonFiniteInput, "amplitudes must be finite");
      }
      norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > kNormTolerance) {
      fail(ErrorCode::NotNormalized, "squared norm is " + std::to_string(norm));
    }
    StateVector s;
    s.n_qubits_ = n;
    s.layout_ = Layout::dense;
    s.dense_ = std::move(amps);
    return s;
  }

  /// Product state; factors[q] is the state of qubit q.
  static StateVector from_factors(std::vector<Factor> factors,
                                  unsigned max_qubits = kDefaultMaxQubits) {
    check_qubit_count(static_cast<unsigned>(factors.size()), max_qubits);
    for (const auto& f : factors) {
      const double norm = std::norm(f[0]) + std::norm(f[1]);
      if (!std::isfinite(norm)) fail(ErrorCode::NonFiniteInput, "factor amplitudes must be finite");
      if (std::abs(norm - 1.0) > kNormTolerance) {
        fail(ErrorCode::NotNormalized, "qubit factor squared norm is " + std::to_string(norm));
      }
    }
    StateVector s;
    s.n_qubits_ = static_cast<unsigned>(factors.size());
    s.layout_ = Layout::product;
    s.factors_ = std::move(factors);
    return s;
  }

  unsigned n_qubits() const noexcept { return n_qubits_; }
  Layout layout() const noexcept { return layout_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << n_qubits_; }

  Amplitude amplitude(std::size_t index) const {
    if (index >= dimension()) {
      fail(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(index) + " out of range");
    }
    if (layout_ == Layout::dense) return dense_[index];
    Amplitude a(1.0);
    for (unsigned q = 0; q < n_qubits_; ++q) a *= factors_[q][(index >> q) & 1U];
    return a;
  }

  /// All 2^n amplitudes; expands product layout.
  std::vector<Amplitude> amplitudes() const {
    if (layout_ == Layout::dense) return dense_;
    std::vector<Amplitude> out;
    out.reserve(dimension());
    out.push_back(Amplitude(1.0));
    for (unsigned q = 0; q < n_qubits_; ++q) {
      const std::size_t half = out.size();
      out.resize(2 * half);
      for (std::size_t i = 0; i < half; ++i) {
        out[half + i] = out[i] * factors_[q][1];
        out[i] *= factors_[q][0];
      }
    }
    return out;
  }

  /// Per-qubit factors. Only meaningful in product layout.
  std::span<const Factor> factors() const {
    if (layout_ != Layout::product) {
      fail(ErrorCode::InvalidArgument, "factors() requires product layout");
    }
    return factors_;
  }

  StateVector to_dense() const {
    if (layout_ == Layout::dense) return *this;
    StateVector s;
    s.n_qubits_ = n_qubits_;
    s.layout_ = Layout::dense;
    s.dense_ = amplitudes();
    return s;
  }

  double norm_squared() const {
    if (layout_ == Layout::product) {
      double n = 1.0;
      for (const auto& f : factors_) n *= std::norm(f[0]) + std::norm(f[1]);
      return n;
    }
    double n = 0.0;
    for (const auto& a : dense_) n += std::norm(a);
    return n;
  }

 private:
  StateVector() = default;

  static void check_qubit_count(unsigned n_qubits, unsigned max_qubits) {
    if (n_qubits < 1 || n_qubits > max_qubits) {
      fail(ErrorCode::QubitCapExceeded, "qubit count " + std::to_string(n_qubits) +
                                            " outside [1, " + std::to_string(max_qubits) + "]");
    }
  }

  void densify() {
    if (layout_ == Layout::dense) return;
    dense_ = amplitudes();
    factors_.clear();
    layout_ = Layout::dense;
  }

  void check_index(unsigned q) const {
    if (q >= n_qubits_) {
      fail(ErrorCode::IndexOutOfRange, "qubit " + std::to_string(q) + " out of range for " +
                                           std::to_string(n_qubits_) + "-qubit state");
    }
  }

  void apply_single(const Gate1Q& g, unsigned target) {
    check_index(target);
    if (layout_ == Layout::product) {
      Factor& f = factors_[target];
      const Amplitude a0 = f[0];
      const Amplitude a1 = f[1];
      f[0] = g(0, 0) * a0 + g(0, 1) * a1;
      f[1] = g(1, 0) * a0 + g(1, 1) * a1;
      return;
    }
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t dim = dense_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t k = 0; k < stride; ++k) {
        const std::size_t i = base + k;
        const std::size_t j = i | stride;
        const Amplitude a0 = dense_[i];
        const Amplitude a1 = dense_[j];
        dense_[i] = g(0, 0) * a0 + g(0, 1) * a1;
        dense_[j] = g(1, 0) * a0 + g(1, 1) * a1;
      }
    }
  }

  // Swaps amplitude pairs (i, i ^ flip) for every i where (i & mask) == want.
  void permute_pairs(std::size_t mask, std::size_t want, std::size_t flip) {
    densify();
    for (std::size_t i = 0; i < dense_.size(); ++i) {
      if ((i & mask) == want) std::swap(dense_[i], dense_[i ^ flip]);
    }
  }

  void apply_op(const CircuitOp& op) {
    std::visit(
        [this](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, SingleQubitOp>) {
            apply_single(o.gate, o.target);
          } else if constexpr (std::is_same_v<T, CnotOp>) {
            check_index(o.control);
            check_index(o.target);
            if (o.control == o.target) fail(ErrorCode::DuplicateQubitIndex, "cnot control == target");
            const std::size_t c = std::size_t{1} << o.control;
            const std::size_t t = std::size_t{1} << o.target;
            permute_pairs(c | t, c, t);
          } else if constexpr (std::is_same_v<T, SwapOp>) {
            check_index(o.a);
            check_index(o.b);
            if (o.a == o.b) fail(ErrorCode::DuplicateQubitIndex, "swap of a qubit with itself");
            const std::size_t a = std::size_t{1} << o.a;
            const std::size_t b = std::size_t{1} << o.b;
            permute_pairs(a | b, a, a | b);
          } else {
            check_index(o.control1);
            check_index(o.control2);
            check_index(o.target);
            if (o.control1 == o.control2 || o.control1 == o.target || o.control2 == o.target) {
              fail(ErrorCode::DuplicateQubitIndex, "toffoli qubits must be distinct");
            }
            const std::size_t c = (std::size_t{1} << o.control1) | (std::size_t{1} << o.control2);
            const std::size_t t = std::size_t{1} << o.target;
            permute_pairs(c | t, c, t);
          }
        },
        op);
  }

  friend StateVector apply(StateVector state, const CircuitOp& op);
  friend StateVector tensor_product(const StateVector& a, const StateVector& b, unsigned max_qubits);

  unsigned n_qubits_ = 0;
  Layout layout_ = Layout::product;
  std::vector<Amplitude> dense_;
  std::vector<Factor> factors_;
};

/// Applies one circuit operation. Single-qubit gates keep product layout;
/// cnot/swap/toffoli expand to dense first.
inline StateVector apply(StateVector state, const CircuitOp& op) {
  state.apply_op(op);
  return state;
}

template <typename Ops>
StateVector apply_all(StateVector state, const Ops& ops) {
  for (const CircuitOp& op : ops) state = qsim::apply(std::move(state), op);
  return state;
}

inline std::vector<double> probabilities(const StateVector& state) {
  std::vector<double> p;
  p.reserve(state.dimension());
  if (state.layout() == Layout::dense) {
    for (const auto& a : state.amplitudes()) p.push_back(std::norm(a));
    return p;
  }
  p.push_back(1.0);
  for (const Factor& f : state.factors()) {
    const double p0 = std::norm(f[0]);
    const double p1 = std::norm(f[1]);
    const std::size_t half = p.size();
    p.resize(2 * half);
    for (std::size_t i = 0; i < half; ++i) {
      p[half + i] = p[i] * p1;
      p[i] *= p0;
    }
  }
  return p;
}

/// <Z_qubit>. O(1) for product layout.
inline double expectation_z(const StateVector& state, unsigned qubit) {
  if (qubit >= state.n_qubits()) {
    fail(ErrorCode::IndexOutOfRange, "qubit " + std::to_string(qubit) + " out of range");
  }
  if (state.layout() == Layout::product) {
    const Factor& f = state.factors()[qubit];
    const double p0 = std::norm(f[0]);
    const double p1 = std::norm(f[1]);
    return (p0 - p1) / (p0 + p1);
  }
  const auto amps = state.amplitudes();
  double e = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    e += ((i >> qubit) & 1U) ? -p : p;
  }
  return e;
}

/// a (x) b with a on the high qubits: amps[(i << n_b) | j] = a[i] * b[j].
inline StateVector tensor_product(const StateVector& a, const StateVector& b,
                                  unsigned max_qubits = kDefaultMaxQubits) {
  const unsigned n = a.n_qubits() + b.n_qubits();
  StateVector::check_qubit_count(n, max_qubits);
  StateVector out;
  out.n_qubits_ = n;
  if (a.layout() == Layout::product && b.layout() == Layout::product) {
    out.layout_ = Layout::product;
    out.factors_ = b.factors_;
    out.factors_.insert(out.factors_.end(), a.factors_.begin(), a.factors_.end());
    return out;
  }
  const auto av = a.amplitudes();
  const auto bv = b.amplitudes();
  out.layout_ = Layout::dense;
  out.dense_.resize(av.size() * bv.size());
  for (std::size_t i = 0; i < av.size(); ++i) {
    for (std::size_t j = 0; j < bv.size(); ++j) out.dense_[(i << b.n_qubits()) | j] = av[i] * bv[j];
  }
  return out;
}

/// <a|b>.
inline Amplitude inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) fail(ErrorCode::LengthMismatch, "qubit counts differ");
  if (a.layout() == Layout::product && b.layout() == Layout::product) {
    Amplitude acc(1.0);
    for (unsigned q = 0; q < a.n_qubits(); ++q) {
      const Factor& fa = a.factors()[q];
      const Factor& fb = b.factors()[q];
      acc *= std::conj(fa[0]) * fb[0] + std::conj(fa[1]) * fb[1];
    }
    return acc;
  }
  const auto av = a.amplitudes();
  const auto bv = b.amplitudes();
  Amplitude acc(0.0);
  for (std::size_t i = 0; i < av.size(); ++i) acc += std::conj(av[i]) * bv[i];
  return acc;
}

/// |<a|b>|^2; equals 1 iff the states agree up to global phase.
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

inline double degrees_to_radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace qembed::qsim
