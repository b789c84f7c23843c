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

#include "qilqr/transmon_model.hpp"

#include <cmath>
#include <numbers>

#include "qilqr/errors.hpp"

namespace qilqr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const std::complex<double> kI{0.0, 1.0};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Copies the upper triangle onto the lower one so the result is Hermitian
// bit-for-bit.
ComplexMatrix mirror_upper(ComplexMatrix h) {
  for (Index i = 0; i < h.rows(); ++i) {
    h(i, i) = h(i, i).real();
    for (Index j = i + 1; j < h.cols(); ++j) h(j, i) = std::conj(h(i, j));
  }
  return h;
}

// Annihilation operator of transmon `which` (0 or 1) embedded in the full space.
ComplexMatrix embedded_annihilation(const TransmonSystem& sys, int which) {
  const ComplexMatrix b = annihilation(sys.levels());
  if (sys.num_transmons() == 1) return b;
  const ComplexMatrix id = ComplexMatrix::Identity(sys.levels(), sys.levels());
  return which == 0 ? kron(b, id) : kron(id, b);
}

ComplexMatrix duffing_term(const ComplexMatrix& b, double delta) {
  const ComplexMatrix n = b.adjoint() * b;
  const ComplexMatrix id = ComplexMatrix::Identity(b.rows(), b.cols());
  return (delta / 2.0) * n * (n - id);
}

}  // namespace

SystemKind parse_system_kind(std::string_view name) {
  if (name == "1q2l") return SystemKind::k1q2l;
  if (name == "1q3l") return SystemKind::k1q3l;
  if (name == "2q2l") return SystemKind::k2q2l;
  if (name == "2q3l") return SystemKind::k2q3l;
  throw ConfigError("system", "unknown system '" + std::string(name) +
                                  "' (expected 1q2l, 1q3l, 2q2l or 2q3l)");
}

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::k1q2l: return "1q2l";
    case SystemKind::k1q3l: return "1q3l";
    case SystemKind::k2q2l: return "2q2l";
    case SystemKind::k2q3l: return "2q3l";
  }
  return "?";
}

TransmonSystem::TransmonSystem(SystemKind kind, const TransmonParameters& params)
    : kind_(kind),
      params_(params),
      levels_(kind == SystemKind::k1q3l || kind == SystemKind::k2q3l ? 3 : 2),
      num_transmons_(kind == SystemKind::k2q2l || kind == SystemKind::k2q3l ? 2 : 1),
      dim_(num_transmons_ == 1 ? levels_ : levels_ * levels_),
      omega1_(kTwoPi * params.omega1_ghz),
      omega2_(kTwoPi * params.omega2_ghz),
      delta1_(kTwoPi * params.delta1_ghz),
      delta2_(kTwoPi * params.delta2_ghz),
      j12_(kTwoPi * params.j12_ghz),
      r1_(kTwoPi * params.r1_ghz),
      r2_(kTwoPi * params.r2_ghz),
      dt_(params.dt_ns),
      use_r2_(params.use_r2_on_second_drive) {
  if (!(dt_ > 0.0)) throw ConfigError("parameters.dt-ns", "must be positive");
}

std::vector<std::string> TransmonSystem::channel_names() const {
  if (num_transmons_ == 1) return {"ux", "uy"};
  return {"ux1", "uy1", "ux2", "uy2"};
}

std::vector<int> TransmonSystem::occupations(Index index) const {
  if (num_transmons_ == 1) return {static_cast<int>(index)};
  return {static_cast<int>(index / levels_), static_cast<int>(index % levels_)};
}

std::vector<std::string> TransmonSystem::basis_labels() const {
  std::vector<std::string> labels;
  for (Index i = 0; i < dim_; ++i) {
    std::string label;
    for (int n : occupations(i)) label += std::to_string(n);
    labels.push_back(label);
  }
  return labels;
}

bool TransmonSystem::is_leakage_state(Index index) const {
  for (int n : occupations(index)) {
    if (n > 1) return true;
  }
  return false;
}

ComplexMatrix annihilation(int levels) {
  ComplexMatrix b = ComplexMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

ComplexMatrix drift_hamiltonian(const TransmonSystem& sys) {
  if (sys.num_transmons() == 1) {
    return mirror_upper(duffing_term(embedded_annihilation(sys, 0), sys.delta1()));
  }
  const ComplexMatrix b1 = embedded_annihilation(sys, 0);
  const ComplexMatrix b2 = embedded_annihilation(sys, 1);
  ComplexMatrix h = sys.detuning() * (b2.adjoint() * b2);
  h += duffing_term(b1, sys.delta1());
  h += duffing_term(b2, sys.delta2());
  h += sys.j12() * (b1.adjoint() * b2 + b1 * b2.adjoint());
  return mirror_upper(std::move(h));
}

std::vector<ComplexMatrix> control_hamiltonians(const TransmonSystem& sys) {
  std::vector<ComplexMatrix> hs;
  for (int t = 0; t < sys.num_transmons(); ++t) {
    const ComplexMatrix b = embedded_annihilation(sys, t);
    const double rabi = (t == 1 && sys.use_r2_on_second_drive()) ? sys.r2() : sys.r1();
    hs.push_back(mirror_upper((rabi / 2.0) * (b.adjoint() + b)));
    hs.push_back(mirror_upper((rabi / 2.0) * kI * (b.adjoint() - b)));
  }
  return hs;
}

ControlGenerator make_generator(const TransmonSystem& sys) {
  return ControlGenerator(drift_hamiltonian(sys), control_hamiltonians(sys));
}

GateName parse_gate_name(std::string_view name) {
  if (name == "X2") return GateName::X2;
  if (name == "X3") return GateName::X3;
  if (name == "CR4") return GateName::CR4;
  if (name == "CR9") return GateName::CR9;
  throw ConfigError("goal", "unknown gate '" + std::string(name) +
                                "' (expected X2, X3, CR4 or CR9)");
}

std::string to_string(GateName name) {
  switch (name) {
    case GateName::X2: return "X2";
    case GateName::X3: return "X3";
    case GateName::CR4: return "CR4";
    case GateName::CR9: return "CR9";
  }
  return "?";
}

GoalGate goal_gate(GateName name, const TransmonSystem& sys) {
  const double h = 1.0 / std::sqrt(2.0);
  Index dim = 0;
  switch (name) {
    case GateName::X2: dim = 2; break;
    case GateName::X3: dim = 3; break;
    case GateName::CR4: dim = 4; break;
    case GateName::CR9: dim = 9; break;
  }
  if (dim != sys.dim()) {
    throw DimensionMismatch("goal " + to_string(name) + " needs dimension " +
                            std::to_string(dim) + ", system " + to_string(sys.kind()) + " has " +
                            std::to_string(sys.dim()));
  }
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  switch (name) {
    case GateName::X2:
      u(0, 1) = kI;
      u(1, 0) = kI;
      break;
    case GateName::X3:
      u(0, 1) = kI;
      u(1, 0) = kI;
      u(2, 2) = 1.0;
      break;
    case GateName::CR4:
      // exp(-i pi/4 X (x) Z) = (I - i X (x) Z) / sqrt(2); (X (x) Z)^2 = I.
      for (Index j = 0; j < 4; ++j) u(j, j) = h;
      u(2, 0) = u(0, 2) = -kI * h;
      u(3, 1) = u(1, 3) = kI * h;
      break;
    case GateName::CR9:
      for (Index j : {0, 1, 3, 4}) u(j, j) = h;
      for (Index j : {2, 5, 6, 7, 8}) u(j, j) = 1.0;
      u(3, 0) = u(0, 3) = -kI * h;
      u(4, 1) = u(1, 4) = kI * h;
      break;
  }
  return GoalGate{name, u, vectorize_unitary(u)};
}

}  // namespace qilqr
