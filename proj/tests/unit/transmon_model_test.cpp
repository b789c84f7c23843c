// Copyright 2026 The qilqr Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qilqr/errors.hpp"
#include "qilqr/transmon_model.hpp"
#include "support/oracles.hpp"

namespace qilqr {
namespace {

using cd = std::complex<double>;
const cd I(0.0, 1.0);
constexpr double kTwoPi = 2.0 * std::numbers::pi;

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool exactly_hermitian(const ComplexMatrix& h) { return h == h.adjoint(); }

TEST(Transmon, AngularParameters) {
  const TransmonSystem sys(SystemKind::k2q3l);
  EXPECT_DOUBLE_EQ(sys.delta1(), kTwoPi * -0.3120);
  EXPECT_DOUBLE_EQ(sys.r1(), kTwoPi * 0.0921);
  EXPECT_DOUBLE_EQ(sys.r2(), kTwoPi * 0.0974);
  EXPECT_DOUBLE_EQ(sys.j12(), kTwoPi * 0.0020);
  EXPECT_NEAR(sys.detuning(), kTwoPi * (4.8151 - 4.7219), 1e-12);
  EXPECT_EQ(sys.dim(), 9);
  EXPECT_EQ(sys.num_controls(), 4);
  EXPECT_EQ(TransmonSystem(SystemKind::k1q3l).dim(), 3);
  EXPECT_EQ(TransmonSystem(SystemKind::k2q2l).dim(), 4);
}

TEST(Transmon, SystemNamesRoundTrip) {
  for (SystemKind k : {SystemKind::k1q2l, SystemKind::k1q3l, SystemKind::k2q2l, SystemKind::k2q3l})
    EXPECT_EQ(parse_system_kind(to_string(k)), k);
  EXPECT_THROW(parse_system_kind("3q2l"), Error);
}

TEST(Transmon, LadderOperator) {
  const ComplexMatrix b = annihilation(3);
  EXPECT_DOUBLE_EQ(b(0, 1).real(), 1.0);
  EXPECT_DOUBLE_EQ(b(1, 2).real(), std::sqrt(2.0));
  const ComplexMatrix comm = b * b.adjoint() - b.adjoint() * b;
  EXPECT_LE((comm.topLeftCorner(2, 2) - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Transmon, DriftOneTransmon) {
  EXPECT_EQ(drift_hamiltonian(TransmonSystem(SystemKind::k1q2l)), ComplexMatrix::Zero(2, 2));
  const TransmonSystem sys(SystemKind::k1q3l);
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  expected(2, 2) = kTwoPi * -0.3120;
  EXPECT_LE((drift_hamiltonian(sys) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Transmon, DriftTwoTransmonsAgainstKronecker) {
  for (SystemKind kind : {SystemKind::k2q2l, SystemKind::k2q3l}) {
    const TransmonSystem sys(kind);
    const int l = sys.levels();
    const ComplexMatrix b = annihilation(l);
    const ComplexMatrix id = ComplexMatrix::Identity(l, l);
    const ComplexMatrix b1 = kron(b, id), b2 = kron(id, b);
    const ComplexMatrix n1 = b1.adjoint() * b1, n2 = b2.adjoint() * b2;
    const ComplexMatrix idd = ComplexMatrix::Identity(sys.dim(), sys.dim());
    const ComplexMatrix expected = sys.detuning() * n2 + 0.5 * sys.delta1() * n1 * (n1 - idd) +
                                   0.5 * sys.delta2() * n2 * (n2 - idd) +
                                   sys.j12() * (b1.adjoint() * b2 + b1 * b2.adjoint());
    const ComplexMatrix h = drift_hamiltonian(sys);
    EXPECT_TRUE(exactly_hermitian(h));
    EXPECT_LE((h - expected).cwiseAbs().maxCoeff(), 1e-13);
  }
  const ComplexMatrix h = drift_hamiltonian(TransmonSystem(SystemKind::k2q2l));
  const double d21 = kTwoPi * (4.8151 - 4.7219), j = kTwoPi * 0.002;
  EXPECT_NEAR(h(1, 1).real(), d21, 1e-12);  // |01>
  EXPECT_NEAR(h(3, 3).real(), d21, 1e-12);  // |11>
  EXPECT_NEAR(h(1, 2).real(), j, 1e-15);    // |01> <-> |10>
  EXPECT_NEAR(h(2, 1).real(), j, 1e-15);
}

TEST(Transmon, ControlsOneTransmon) {
  const TransmonSystem sys(SystemKind::k1q2l);
  const auto c = control_hamiltonians(sys);
  ASSERT_EQ(c.size(), 2u);
  ComplexMatrix sx(2, 2), iy(2, 2);
  sx << 0, 1, 1, 0;
  // i (b^dagger - b) with b = |0><1|
  iy << 0, -I, I, 0;
  EXPECT_LE((c[0] - 0.5 * sys.r1() * sx).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((c[1] - 0.5 * sys.r1() * iy).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Transmon, ControlsTwoTransmons) {
  const TransmonSystem sys(SystemKind::k2q3l);
  const auto c = control_hamiltonians(sys);
  ASSERT_EQ(c.size(), 4u);
  const ComplexMatrix b = annihilation(3), id = ComplexMatrix::Identity(3, 3);
  const ComplexMatrix b2 = kron(id, b);
  for (const ComplexMatrix& h : c) {
    EXPECT_TRUE(exactly_hermitian(h));
    EXPECT_LE((h.array().abs() > 0.0).count(), 12);
  }
  // Printed model: r1 on every drive line.
  EXPECT_LE((c[2] - 0.5 * sys.r1() * (b2.adjoint() + b2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((c[3] - 0.5 * sys.r1() * I * (b2.adjoint() - b2)).cwiseAbs().maxCoeff(), 1e-15);

  TransmonParameters p;
  p.use_r2_on_second_drive = true;
  const auto c2 = control_hamiltonians(TransmonSystem(SystemKind::k2q3l, p));
  EXPECT_LE((c2[2] - 0.5 * kTwoPi * 0.0974 * (b2.adjoint() + b2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Transmon, HamiltonianIsAffine) {
  const TransmonSystem sys(SystemKind::k1q3l);
  const ControlGenerator gen = make_generator(sys);
  RealVector e0(2);
  e0 << 1.0, 0.0;
  const ComplexMatrix expected = -I * (drift_hamiltonian(sys) + control_hamiltonians(sys)[0]);
  EXPECT_LE((gen.at(e0).real() - oracle::iso(expected)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Transmon, Labels) {
  const TransmonSystem sys(SystemKind::k2q3l);
  const auto labels = sys.basis_labels();
  EXPECT_EQ(labels[0], "00");
  EXPECT_EQ(labels[5], "12");
  EXPECT_TRUE(sys.is_leakage_state(2));
  EXPECT_FALSE(sys.is_leakage_state(4));
  EXPECT_EQ(TransmonSystem(SystemKind::k1q2l).channel_names(), (std::vector<std::string>{"ux", "uy"}));
}

TEST(Transmon, GoalX2) {
  const GoalGate g = goal_gate(GateName::X2, TransmonSystem(SystemKind::k1q2l));
  ComplexMatrix expected(2, 2);
  expected << 0, I, I, 0;
  EXPECT_EQ(g.unitary, expected);
  EXPECT_EQ(g.vectorized, oracle::vec(expected));
}

TEST(Transmon, GoalX3) {
  const GoalGate g = goal_gate(GateName::X3, TransmonSystem(SystemKind::k1q3l));
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  expected(0, 1) = expected(1, 0) = I;
  expected(2, 2) = 1.0;
  EXPECT_EQ(g.unitary, expected);
}

TEST(Transmon, GoalCR4IsSeries) {
  const GoalGate g = goal_gate(GateName::CR4, TransmonSystem(SystemKind::k2q2l));
  ComplexMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  const ComplexMatrix xz = kron(x, z);
  // (XZ)^2 = I so exp(-i pi/4 XZ) = cos(pi/4) I - i sin(pi/4) XZ
  const ComplexMatrix expected =
      (ComplexMatrix::Identity(4, 4) - I * xz) / std::sqrt(2.0);
  EXPECT_LE((g.unitary - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((g.unitary - oracle::expm_hermitian(xz, std::numbers::pi / 4)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Transmon, GoalCR9) {
  const GoalGate g9 = goal_gate(GateName::CR9, TransmonSystem(SystemKind::k2q3l));
  const GoalGate g4 = goal_gate(GateName::CR4, TransmonSystem(SystemKind::k2q2l));
  const std::array<Index, 4> q{0, 1, 3, 4};
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) EXPECT_EQ(g9.unitary(q[i], q[j]), g4.unitary(Index(i), Index(j)));
  const ComplexMatrix u = g9.unitary;
  EXPECT_LE((u.adjoint() * u - ComplexMatrix::Identity(9, 9)).cwiseAbs().maxCoeff(), 1e-15);
  for (Index k : {2, 5, 6, 7, 8}) {
    ComplexVector e = ComplexVector::Zero(9);
    e(k) = 1.0;
    EXPECT_EQ(u * e, e);
  }
  EXPECT_NEAR(u(3, 0).imag(), -1.0 / std::sqrt(2.0), 1e-16);
  EXPECT_NEAR(u(4, 1).imag(), 1.0 / std::sqrt(2.0), 1e-16);
}

TEST(Transmon, GoalDimensionChecked) {
  EXPECT_THROW(goal_gate(GateName::CR9, TransmonSystem(SystemKind::k2q2l)), DimensionMismatch);
  EXPECT_THROW(goal_gate(GateName::X2, TransmonSystem(SystemKind::k1q3l)), DimensionMismatch);
  EXPECT_EQ(parse_gate_name("CR9"), GateName::CR9);
}

}  // namespace
}  // namespace qilqr
