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

#include "qembed/qsim.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace qembed::qsim {
namespace {

using testing::max_abs_diff;

constexpr double kPi = std::numbers::pi;

void expect_gate_near(const Gate1Q& g, const Gate1Q& want, double tol) {
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      EXPECT_NEAR(g(r, c).real(), want(r, c).real(), tol) << "(" << r << "," << c << ")";
      EXPECT_NEAR(g(r, c).imag(), want(r, c).imag(), tol) << "(" << r << "," << c << ")";
    }
  }
}

StateVector basis_state(unsigned n, std::size_t index) {
  std::vector<Amplitude> amps(std::size_t{1} << n, Amplitude(0.0));
  amps[index] = 1.0;
  return StateVector::from_amplitudes(std::move(amps));
}

TEST(ZeroState, SingleQubit) {
  const auto s = StateVector::zero(1);
  EXPECT_EQ(s.layout(), Layout::product);
  const auto amps = s.amplitudes();
  ASSERT_EQ(amps.size(), 2u);
  EXPECT_EQ(amps[0], Amplitude(1.0));
  EXPECT_EQ(amps[1], Amplitude(0.0));
}

TEST(ZeroState, ThreeQubits) {
  const auto amps = StateVector::zero(3).amplitudes();
  ASSERT_EQ(amps.size(), 8u);
  EXPECT_EQ(amps[0], Amplitude(1.0));
  for (std::size_t i = 1; i < 8; ++i) EXPECT_EQ(amps[i], Amplitude(0.0));
}

TEST(ZeroState, CapBoundary) {
  EXPECT_NO_THROW(StateVector::zero(24));
  try {
    StateVector::zero(25);
    FAIL() << "expected QubitCapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::QubitCapExceeded);
  }
  EXPECT_THROW(StateVector::zero(0), Error);
  EXPECT_NO_THROW(StateVector::zero(30, 30));
}

TEST(Gates, RxZeroIsIdentity) { expect_gate_near(rx_gate(0.0), identity_gate(), 0.0); }

TEST(Gates, RxPi) {
  expect_gate_near(rx_gate(kPi), Gate1Q{{0.0, Amplitude(0, -1), Amplitude(0, -1), 0.0}}, 1e-12);
}

TEST(Gates, Rx78Degrees) {
  // cos(39 deg), sin(39 deg) from a scalar calculator.
  const auto g = rx_gate(degrees_to_radians(78.0));
  EXPECT_NEAR(g(0, 0).real(), 0.7771459614569709, 1e-12);
  EXPECT_NEAR(g(1, 1).real(), 0.7771459614569709, 1e-12);
  EXPECT_NEAR(g(0, 1).imag(), -0.6293203910498374, 1e-12);
  EXPECT_NEAR(g(1, 0).imag(), -0.6293203910498374, 1e-12);
  EXPECT_DOUBLE_EQ(g(0, 1).real(), 0.0);
}

TEST(Gates, RyPiFlipsZero) {
  auto s = qsim::apply(StateVector::zero(1), SingleQubitOp{ry_gate(kPi), 0});
  EXPECT_NEAR(std::abs(s.amplitude(0)), 0.0, 1e-12);
  EXPECT_NEAR(s.amplitude(1).real(), 1.0, 1e-12);
}

TEST(Gates, RzOnlyAddsPhase) {
  const double theta = 0.9;
  auto s = qsim::apply(StateVector::zero(1), SingleQubitOp{rz_gate(theta), 0});
  EXPECT_NEAR(std::abs(s.amplitude(0) - std::polar(1.0, -theta / 2)), 0.0, 1e-12);
  const auto p = probabilities(s);
  EXPECT_NEAR(p[0], 1.0, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
  expect_gate_near(rz_gate(0.0), identity_gate(), 0.0);
}

TEST(Gates, RejectNonFiniteAngle) {
  for (auto make : {rx_gate, ry_gate, rz_gate}) {
    try {
      make(std::nan(""));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NonFiniteAngle);
    }
    EXPECT_THROW(make(INFINITY), Error);
  }
}

TEST(Gates, FixedGatesOnZero) {
  const auto h = qsim::apply(StateVector::zero(1), SingleQubitOp{hadamard(), 0});
  EXPECT_NEAR(h.amplitude(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(h.amplitude(1).real(), 1.0 / std::sqrt(2.0), 1e-15);
  const auto x = qsim::apply(StateVector::zero(1), SingleQubitOp{pauli_x(), 0});
  EXPECT_EQ(x.amplitude(1), Amplitude(1.0));
  expect_gate_near(s_gate() * s_gate(), Gate1Q{{1.0, 0.0, 0.0, -1.0}}, 1e-15);
}

TEST(Gates, AllConstructorsUnitary) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-20.0, 20.0);
  for (int t = 0; t < 200; ++t) {
    const double a = angle(rng);
    EXPECT_LE(rx_gate(a).unitarity_error(), 1e-12);
    EXPECT_LE(ry_gate(a).unitarity_error(), 1e-12);
    EXPECT_LE(rz_gate(a).unitarity_error(), 1e-12);
  }
  EXPECT_LE(hadamard().unitarity_error(), 1e-12);
  EXPECT_LE(pauli_x().unitarity_error(), 1e-12);
  EXPECT_LE(s_gate().unitarity_error(), 1e-12);
}

TEST(Gates, HadamardTwiceOnRandomQubit) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const auto s = testing::random_dense_state(rng, 1);
    const auto twice = qsim::apply(apply(s, SingleQubitOp{hadamard(), 0}), SingleQubitOp{hadamard(), 0});
    EXPECT_LE(max_abs_diff(twice.amplitudes(), s.amplitudes()), 1e-12);
  }
}

TEST(Apply, CnotBasisAction) {
  // |10> is index 2: control qubit 1 set.
  const auto s = qsim::apply(basis_state(2, 2), CnotOp{1, 0});
  EXPECT_EQ(s.amplitude(3), Amplitude(1.0));
  EXPECT_EQ(s.layout(), Layout::dense);
  const auto untouched = qsim::apply(basis_state(2, 1), CnotOp{1, 0});
  EXPECT_EQ(untouched.amplitude(1), Amplitude(1.0));
}

TEST(Apply, SwapBasisAction) {
  const auto s = qsim::apply(basis_state(2, 0b01), SwapOp{0, 1});
  EXPECT_EQ(s.amplitude(0b10), Amplitude(1.0));
}

TEST(Apply, ToffoliBasisAction) {
  EXPECT_EQ(qsim::apply(basis_state(3, 0b110), ToffoliOp{2, 1, 0}).amplitude(0b111), Amplitude(1.0));
  EXPECT_EQ(qsim::apply(basis_state(3, 0b100), ToffoliOp{2, 1, 0}).amplitude(0b100), Amplitude(1.0));
}

TEST(Apply, CnotBuildsBellState) {
  auto s = qsim::apply(StateVector::zero(2), SingleQubitOp{hadamard(), 0});
  EXPECT_EQ(s.layout(), Layout::product);
  s = qsim::apply(std::move(s), CnotOp{0, 1});
  const auto p = probabilities(s);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[3], 0.5, 1e-15);
  EXPECT_NEAR(expectation_z(s, 0), 0.0, 1e-15);
}

TEST(Apply, IndexErrors) {
  const auto s = StateVector::zero(2);
  auto code_of = [&](const CircuitOp& op) {
    try {
      qsim::apply(s, op);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code_of(SingleQubitOp{hadamard(), 2}), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of(CnotOp{0, 5}), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of(CnotOp{1, 1}), ErrorCode::DuplicateQubitIndex);
  EXPECT_EQ(code_of(SwapOp{0, 0}), ErrorCode::DuplicateQubitIndex);
  EXPECT_EQ(code_of(ToffoliOp{0, 1, 1}), ErrorCode::DuplicateQubitIndex);
}

TEST(Probabilities, Examples) {
  auto p = probabilities(StateVector::zero(1));
  EXPECT_EQ(p, (std::vector<double>{1.0, 0.0}));
  p = probabilities(qsim::apply(StateVector::zero(1), SingleQubitOp{hadamard(), 0}));
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.5, 1e-12);
}

TEST(ExpectationZ, Examples) {
  EXPECT_DOUBLE_EQ(expectation_z(StateVector::zero(1), 0), 1.0);
  EXPECT_NEAR(expectation_z(qsim::apply(StateVector::zero(1), SingleQubitOp{hadamard(), 0}), 0), 0.0, 1e-12);
  const auto ry = qsim::apply(StateVector::zero(1), SingleQubitOp{ry_gate(1.0), 0});
  EXPECT_NEAR(expectation_z(ry, 0), 0.5403023058681398, 1e-12);
  EXPECT_NEAR(expectation_z(ry.to_dense(), 0), 0.5403023058681398, 1e-12);
  EXPECT_THROW(expectation_z(ry, 1), Error);
}

TEST(TensorProduct, Ket101) {
  const auto one = qsim::apply(StateVector::zero(1), SingleQubitOp{pauli_x(), 0});
  const auto zero = StateVector::zero(1);
  const auto s = tensor_product(tensor_product(one, zero), one);
  ASSERT_EQ(s.n_qubits(), 3u);
  EXPECT_EQ(s.amplitude(5), Amplitude(1.0));
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
}

TEST(TensorProduct, ZeroZeroAndUniform) {
  EXPECT_EQ(tensor_product(StateVector::zero(1), StateVector::zero(1)).amplitude(0), Amplitude(1.0));
  const auto h = qsim::apply(StateVector::zero(1), SingleQubitOp{hadamard(), 0});
  const auto hh = tensor_product(h, h);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(hh.amplitude(i).real(), 0.5, 1e-15);
  EXPECT_THROW(tensor_product(StateVector::zero(20), StateVector::zero(5)), Error);
}

TEST(TensorProduct, DenseMatchesDefinition) {
  std::mt19937_64 rng(3);
  const auto a = testing::random_dense_state(rng, 2);
  const auto b = testing::random_product_state(rng, 1);
  const auto ab = tensor_product(a, b);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_LE(std::abs(ab.amplitude((i << 1) | j) - a.amplitude(i) * b.amplitude(j)), 1e-15);
    }
  }
}

TEST(StateVector, FromAmplitudesValidates) {
  EXPECT_THROW(StateVector::from_amplitudes({1.0, 0.0, 0.0}), Error);
  try {
    StateVector::from_amplitudes({1.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormalized);
  }
}

// ---------------------------------------------------------------------------
// Properties over random inputs.

TEST(Properties, NormPreservedOverLongCircuit) {
  std::mt19937_64 rng(2024);
  auto s = testing::random_dense_state(rng, 5);
  for (int t = 0; t < 10000; ++t) s = qsim::apply(std::move(s), testing::random_op(rng, 5));
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-9);
}

TEST(Properties, Involutions) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    const auto s = testing::random_dense_state(rng, 3);
    auto q = testing::distinct_qubits(rng, 3, 3);
    for (const CircuitOp& op : std::vector<CircuitOp>{SingleQubitOp{pauli_x(), q[0]},
                                                      SingleQubitOp{hadamard(), q[1]}, CnotOp{q[0], q[1]},
                                                      SwapOp{q[1], q[2]}, ToffoliOp{q[0], q[1], q[2]}}) {
      const auto twice = qsim::apply(apply(s, op), op);
      EXPECT_LE(max_abs_diff(twice.amplitudes(), s.amplitudes()), 1e-12);
    }
  }
}

TEST(Properties, RotationComposition) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-6.0, 6.0);
  for (int t = 0; t < 200; ++t) {
    const auto s = testing::random_dense_state(rng, 2);
    const double a = angle(rng);
    const double b = angle(rng);
    const auto seq = qsim::apply(apply(s, SingleQubitOp{rx_gate(a), 1}), SingleQubitOp{rx_gate(b), 1});
    const auto once = qsim::apply(s, SingleQubitOp{rx_gate(a + b), 1});
    EXPECT_LE(max_abs_diff(seq.amplitudes(), once.amplitudes()), 1e-12);
  }
}

TEST(Properties, ProductAndDenseAgree) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    auto product = testing::random_product_state(rng, 4);
    auto dense = product.to_dense();
    for (int k = 0; k < 20; ++k) {
      const SingleQubitOp op{testing::random_gate(rng), static_cast<unsigned>(rng() % 4)};
      product = qsim::apply(std::move(product), op);
      dense = qsim::apply(std::move(dense), op);
    }
    EXPECT_EQ(product.layout(), Layout::product);
    EXPECT_LE(max_abs_diff(product.amplitudes(), dense.amplitudes()), 1e-12);
    for (unsigned q = 0; q < 4; ++q) EXPECT_NEAR(expectation_z(product, q), expectation_z(dense, q), 1e-12);
  }
}

TEST(Properties, ProbabilitiesNonnegativeAndSumToOne) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const auto s = (t % 2) ? testing::random_dense_state(rng, 4) : testing::random_product_state(rng, 4);
    const auto p = probabilities(s);
    double sum = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Properties, FidelityIgnoresGlobalPhase) {
  std::mt19937_64 rng(29);
  const auto s = testing::random_dense_state(rng, 2);
  auto amps = s.amplitudes();
  for (auto& a : amps) a *= std::polar(1.0, 0.7);
  EXPECT_NEAR(fidelity(s, StateVector::from_amplitudes(amps)), 1.0, 1e-12);
}

}  // namespace
}  // namespace qembed::qsim
