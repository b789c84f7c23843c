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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qilqr/iso_linalg.hpp"
#include "qilqr/propagator.hpp"

namespace qilqr {

/// Hardware parameters in GHz (ordinary frequency) and ns. Defaults describe a
/// fixed-frequency transmon pair.
struct TransmonParameters {
  double omega1_ghz = 4.7219;
  double omega2_ghz = 4.8151;
  double delta1_ghz = -0.3120;
  double delta2_ghz = -0.3097;
  double j12_ghz = 0.0020;
  double r1_ghz = 0.0921;
  double r2_ghz = 0.0974;
  double dt_ns = 0.5;
  /// Drive transmon 2 with r2 instead of r1. The rotating-frame model as
  /// usually written scales all four drive terms by r1.
  bool use_r2_on_second_drive = false;
};

enum class SystemKind { k1q2l, k1q3l, k2q2l, k2q3l };

SystemKind parse_system_kind(std::string_view name);
std::string to_string(SystemKind kind);

/// Rotating-frame transmon model. All frequencies are angular (rad/ns).
class TransmonSystem {
 public:
  TransmonSystem(SystemKind kind, const TransmonParameters& params = {});

  SystemKind kind() const noexcept { return kind_; }
  int levels() const noexcept { return levels_; }
  int num_transmons() const noexcept { return num_transmons_; }
  /// Total Hilbert-space dimension levels^num_transmons.
  Index dim() const noexcept { return dim_; }
  /// 2 per transmon, ordered (X1, Y1[, X2, Y2]).
  Index num_controls() const noexcept { return 2 * num_transmons_; }

  double omega1() const noexcept { return omega1_; }
  double omega2() const noexcept { return omega2_; }
  double delta1() const noexcept { return delta1_; }
  double delta2() const noexcept { return delta2_; }
  double j12() const noexcept { return j12_; }
  double r1() const noexcept { return r1_; }
  double r2() const noexcept { return r2_; }
  /// omega2 - omega1.
  double detuning() const noexcept { return omega2_ - omega1_; }
  double dt() const noexcept { return dt_; }
  bool use_r2_on_second_drive() const noexcept { return use_r2_; }
  const TransmonParameters& parameters() const noexcept { return params_; }

  /// "ux", "uy" for one transmon; "ux1", "uy1", "ux2", "uy2" for two.
  std::vector<std::string> channel_names() const;
  /// Occupation-number labels of the basis states, transmon 1 first ("0", "1", ... or "00", "01", ...).
  std::vector<std::string> basis_labels() const;
  /// Occupation number of each transmon in basis state `index`.
  std::vector<int> occupations(Index index) const;
  /// True if any transmon is excited beyond level 1 in basis state `index`.
  bool is_leakage_state(Index index) const;

 private:
  SystemKind kind_;
  TransmonParameters params_;
  int levels_;
  int num_transmons_;
  Index dim_;
  double omega1_, omega2_, delta1_, delta2_, j12_, r1_, r2_, dt_;
  bool use_r2_;
};

/// Truncated annihilation operator b|n> = sqrt(n)|n-1>.
ComplexMatrix annihilation(int levels);

ComplexMatrix drift_hamiltonian(const TransmonSystem& sys);

/// dH/du_j for every channel: (r/2)(b + b^dag) for X, (r/2) i(b^dag - b) for Y.
std::vector<ComplexMatrix> control_hamiltonians(const TransmonSystem& sys);

ControlGenerator make_generator(const TransmonSystem& sys);

enum class GateName { X2, X3, CR4, CR9 };

GateName parse_gate_name(std::string_view name);
std::string to_string(GateName name);

struct GoalGate {
  GateName name;
  ComplexMatrix unitary;
  RealVector vectorized;
};

/// Target unitaries. Two-transmon basis index is levels*n1 + n2.
/// Throws DimensionMismatch when the gate does not fit `sys`.
GoalGate goal_gate(GateName name, const TransmonSystem& sys);

}  // namespace qilqr
