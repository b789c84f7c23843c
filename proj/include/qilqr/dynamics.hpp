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
#include <string>
#include <string_view>
#include <vector>

#include "qilqr/iso_linalg.hpp"
#include "qilqr/problem.hpp"
#include "qilqr/propagator.hpp"
#include "qilqr/transmon_model.hpp"

namespace qilqr {

/// Direct: the optimized controls are the envelopes themselves.
/// Smoothed: the optimized controls are envelope rates; the envelopes are
/// appended to the state and integrated with an Euler step.
enum class ControlMode { kDirect, kSmoothed };

ControlMode parse_control_mode(std::string_view name);
std::string to_string(ControlMode mode);

/// Structured linearization of the unitary step. The unitary block of f_x is
/// the left-multiplication map of the step propagator; `sensitivity` holds the
/// columns dP_j x.
class UnitaryLinearizedStep final : public LinearizedStep {
 public:
  UnitaryLinearizedStep(ControlMode mode, double dt, IsoMatrix propagator, RealMatrix sensitivity);

  StageJacobians jacobians() const override;
  PulledBackValue pull_back(const RealVector& vx, const RealMatrix& vxx) const override;

  const IsoMatrix& propagator() const noexcept { return propagator_; }
  const RealMatrix& sensitivity() const noexcept { return sensitivity_; }

 private:
  ControlMode mode_;
  double dt_;
  IsoMatrix propagator_;
  IsoMatrix propagator_t_;
  RealMatrix sensitivity_;
};

struct UnitaryRollout {
  Trajectory trajectory;
  /// Largest ||U'U - I||_inf over all states.
  double max_unitarity_drift = 0.0;
  bool unitarity_warning = false;
};

/// Piecewise-constant Schroedinger dynamics on the vectorized unitary.
class UnitaryDynamics {
 public:
  static constexpr double kUnitarityWarningThreshold = 1e-6;

  UnitaryDynamics(ControlGenerator generator, double dt, ControlMode mode,
                  PropagatorOptions options = {});
  UnitaryDynamics(const TransmonSystem& sys, ControlMode mode, PropagatorOptions options = {});

  ControlMode mode() const noexcept { return mode_; }
  double dt() const noexcept { return dt_; }
  Index dim() const noexcept { return generator_.dim(); }
  Index num_controls() const noexcept { return generator_.num_controls(); }
  /// 2d^2.
  Index unitary_state_dim() const noexcept { return 2 * dim() * dim(); }
  /// 2d^2, plus m in smoothed mode.
  Index state_dim() const noexcept;
  const ControlGenerator& generator() const noexcept { return generator_; }
  const PropagatorOptions& propagator_options() const noexcept { return options_; }

  /// vectorize(I), with zero envelopes in smoothed mode.
  RealVector initial_state() const;

  RealVector step(const RealVector& z, const RealVector& v) const;
  StageJacobians stage_jacobians(const RealVector& z, const RealVector& v) const;
  std::unique_ptr<UnitaryLinearizedStep> linearize(const RealVector& z, const RealVector& v) const;

  /// Throws DimensionMismatch if z_1 or any control has the wrong size.
  UnitaryRollout rollout(const RealVector& z1, const std::vector<RealVector>& controls) const;
  UnitaryRollout rollout(const std::vector<RealVector>& controls) const {
    return rollout(initial_state(), controls);
  }

  ComplexMatrix unitary_of(const RealVector& z) const;
  /// Envelope part of a smoothed-mode state (empty in direct mode).
  RealVector envelope_of(const RealVector& z) const;
  /// Envelope held during stage k: the control itself (direct) or the
  /// envelope stored in z_k (smoothed).
  RealVector applied_envelope(const RealVector& z, const RealVector& v) const;

 private:
  void check_sizes(const RealVector& z, const RealVector& v) const;

  ControlGenerator generator_;
  double dt_;
  ControlMode mode_;
  PropagatorOptions options_;
};

/// ||U'U - I||_inf of the matrix encoded in the unitary block of z.
double unitarity_drift(const ComplexMatrix& u);

}  // namespace qilqr
