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

#include <memory>

#include "qilqr/dynamics.hpp"
#include "qilqr/problem.hpp"
#include "qilqr/transmon_model.hpp"

namespace qilqr {

/// Diagonals of the quadratic cost matrices.
///   stage (smoothed):  v' R_d v + u' R_c u
///   stage (direct):    v' R_c v
///   final:             (x - x_g)' Q_f (x - x_g) + u' R_f u   (R_f term smoothed only)
struct CostMatrices {
  RealVector q_f;  // 2d^2, >= 0
  RealVector r_d;  // m, > 0
  RealVector r_c;  // m, >= 0
  RealVector r_f;  // m, >= 0

  static CostMatrices uniform(Index unitary_state_dim, Index num_controls, double q_f, double r_d,
                              double r_c, double r_f);

  /// Throws DimensionMismatch / Error when sizes or signs are off.
  void validate(Index unitary_state_dim, Index num_controls) const;
};

struct FidelityReport {
  /// (x_N - x_g)' Q_f (x_N - x_g); sensitive to global phase.
  double frobenius_cost = 0.0;
  /// 1 - |Tr(U_g^dag U_N)|^2 / d^2; invariant under global phase.
  double trace_infidelity = 0.0;
};

CostDerivatives stage_cost(const RealVector& z, const RealVector& v, const CostMatrices& costs,
                           ControlMode mode);

CostDerivatives final_cost(const RealVector& z, const GoalGate& goal, const CostMatrices& costs,
                           ControlMode mode);

/// Throws NonUnitaryInput if either matrix is off the unitary group by more than 1e-6.
FidelityReport fidelity(const ComplexMatrix& u, const GoalGate& goal, const RealVector& q_f);
FidelityReport fidelity(const ComplexMatrix& u, const GoalGate& goal);

/// Gate synthesis as an OptimalControlProblem over `num_stages` piecewise-constant steps.
class GateProblem final : public OptimalControlProblem {
 public:
  GateProblem(UnitaryDynamics dynamics, GoalGate goal, CostMatrices costs, Index num_stages);

  Index state_dim() const override { return dynamics_.state_dim(); }
  Index control_dim() const override { return dynamics_.num_controls(); }
  Index num_stages() const override { return num_stages_; }

  RealVector initial_state() const override { return dynamics_.initial_state(); }
  RealVector step(const RealVector& z, const RealVector& v) const override {
    return dynamics_.step(z, v);
  }
  std::unique_ptr<LinearizedStep> linearize(const RealVector& z,
                                            const RealVector& v) const override {
    return dynamics_.linearize(z, v);
  }
  CostDerivatives stage_cost(const RealVector& z, const RealVector& v) const override;
  CostDerivatives final_cost(const RealVector& z) const override;
  double stage_cost_value(const RealVector& z, const RealVector& v) const override;
  double final_cost_value(const RealVector& z) const override;

  const UnitaryDynamics& dynamics() const noexcept { return dynamics_; }
  const GoalGate& goal() const noexcept { return goal_; }
  const CostMatrices& costs() const noexcept { return costs_; }

 private:
  UnitaryDynamics dynamics_;
  GoalGate goal_;
  CostMatrices costs_;
  Index num_stages_;
};

}  // namespace qilqr
