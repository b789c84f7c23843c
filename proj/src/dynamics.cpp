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

#include "qilqr/dynamics.hpp"

#include <string>

#include "qilqr/errors.hpp"

namespace qilqr {

ControlMode parse_control_mode(std::string_view name) {
  if (name == "direct") return ControlMode::kDirect;
  if (name == "smoothed") return ControlMode::kSmoothed;
  throw ConfigError("mode", "unknown mode '" + std::string(name) +
                                "' (expected direct or smoothed)");
}

std::string to_string(ControlMode mode) {
  return mode == ControlMode::kDirect ? "direct" : "smoothed";
}

UnitaryLinearizedStep::UnitaryLinearizedStep(ControlMode mode, double dt, IsoMatrix propagator,
                                             RealMatrix sensitivity)
    : mode_(mode),
      dt_(dt),
      propagator_(std::move(propagator)),
      propagator_t_(propagator_.transpose()),
      sensitivity_(std::move(sensitivity)) {}

StageJacobians UnitaryLinearizedStep::jacobians() const {
  const RealMatrix l = left_multiplication_matrix(propagator_);
  if (mode_ == ControlMode::kDirect) return {l, sensitivity_};

  const Index nx = l.rows();
  const Index m = sensitivity_.cols();
  StageJacobians j;
  j.fx = RealMatrix::Zero(nx + m, nx + m);
  j.fx.topLeftCorner(nx, nx) = l;
  j.fx.topRightCorner(nx, m) = sensitivity_;
  j.fx.bottomRightCorner(m, m).setIdentity();
  j.fu = RealMatrix::Zero(nx + m, m);
  j.fu.bottomRows(m).diagonal().setConstant(dt_);
  return j;
}

PulledBackValue UnitaryLinearizedStep::pull_back(const RealVector& vx, const RealMatrix& vxx) const {
  const RealMatrix& d = sensitivity_;
  const Index nx = d.rows();
  const Index m = d.cols();
  PulledBackValue out;

  if (mode_ == ControlMode::kDirect) {
    const RealMatrix lt_vxx = left_multiply_columns(propagator_t_, vxx);
    out.fx_vx = left_multiply_columns(propagator_t_, vx).col(0);
    out.fu_vx = d.transpose() * vx;
    out.fx_vxx_fx = left_multiply_columns(propagator_t_, lt_vxx.transpose());
    out.fu_vxx_fx = (lt_vxx * d).transpose();
    out.fu_vxx_fu = d.transpose() * vxx * d;
    return out;
  }

  const auto vxx_xx = vxx.topLeftCorner(nx, nx);
  const auto vxx_xu = vxx.topRightCorner(nx, m);
  const auto vxx_ux = vxx.bottomLeftCorner(m, nx);
  const auto vxx_uu = vxx.bottomRightCorner(m, m);
  const auto vx_x = vx.head(nx);
  const auto vx_u = vx.tail(m);

  out.fx_vx.resize(nx + m);
  out.fx_vx.head(nx) = left_multiply_columns(propagator_t_, vx_x).col(0);
  out.fx_vx.tail(m) = d.transpose() * vx_x + vx_u;
  out.fu_vx = dt_ * vx_u;

  const RealMatrix lt_vxx = left_multiply_columns(propagator_t_, vxx_xx);
  const RealMatrix w = vxx_xx * d + vxx_xu;
  const RealMatrix lt_w = left_multiply_columns(propagator_t_, w);
  const RealMatrix lt_vxu = left_multiply_columns(propagator_t_, vxx_xu);
  const RealMatrix corner = d.transpose() * w + vxx_ux * d + vxx_uu;

  out.fx_vxx_fx.resize(nx + m, nx + m);
  out.fx_vxx_fx.topLeftCorner(nx, nx) = left_multiply_columns(propagator_t_, lt_vxx.transpose());
  out.fx_vxx_fx.topRightCorner(nx, m) = lt_w;
  out.fx_vxx_fx.bottomLeftCorner(m, nx) = lt_w.transpose();
  out.fx_vxx_fx.bottomRightCorner(m, m) = corner;

  out.fu_vxx_fx.resize(m, nx + m);
  out.fu_vxx_fx.leftCols(nx) = dt_ * lt_vxu.transpose();
  out.fu_vxx_fx.rightCols(m) = dt_ * (vxx_ux * d + vxx_uu);

  out.fu_vxx_fu = dt_ * dt_ * vxx_uu;
  return out;
}

UnitaryDynamics::UnitaryDynamics(ControlGenerator generator, double dt, ControlMode mode,
                                 PropagatorOptions options)
    : generator_(std::move(generator)), dt_(dt), mode_(mode), options_(options) {
  if (!(dt_ > 0.0)) throw Error("UnitaryDynamics: dt must be positive");
}

UnitaryDynamics::UnitaryDynamics(const TransmonSystem& sys, ControlMode mode,
                                 PropagatorOptions options)
    : UnitaryDynamics(make_generator(sys), sys.dt(), mode, options) {}

Index UnitaryDynamics::state_dim() const noexcept {
  return unitary_state_dim() + (mode_ == ControlMode::kSmoothed ? num_controls() : 0);
}

RealVector UnitaryDynamics::initial_state() const {
  RealVector z = RealVector::Zero(state_dim());
  z.head(unitary_state_dim()) = vectorize_unitary(ComplexMatrix::Identity(dim(), dim()));
  return z;
}

void UnitaryDynamics::check_sizes(const RealVector& z, const RealVector& v) const {
  if (z.size() != state_dim()) {
    throw DimensionMismatch("state has length " + std::to_string(z.size()) + ", expected " +
                            std::to_string(state_dim()));
  }
  if (v.size() != num_controls()) {
    throw DimensionMismatch("control has length " + std::to_string(v.size()) + ", expected " +
                            std::to_string(num_controls()));
  }
}

RealVector UnitaryDynamics::applied_envelope(const RealVector& z, const RealVector& v) const {
  return mode_ == ControlMode::kDirect ? v : RealVector(z.tail(num_controls()));
}

RealVector UnitaryDynamics::step(const RealVector& z, const RealVector& v) const {
  check_sizes(z, v);
  const Index nx = unitary_state_dim();
  const IsoMatrix p = step_propagator_only(generator_, applied_envelope(z, v), dt_, options_);
  RealVector next(z.size());
  next.head(nx) = apply_propagator_to_state(p, z.head(nx));
  if (mode_ == ControlMode::kSmoothed) next.tail(num_controls()) = z.tail(num_controls()) + dt_ * v;
  return next;
}

std::unique_ptr<UnitaryLinearizedStep> UnitaryDynamics::linearize(const RealVector& z,
                                                                  const RealVector& v) const {
  check_sizes(z, v);
  const Index nx = unitary_state_dim();
  PropagatorWithDerivatives pd =
      step_propagator(generator_, applied_envelope(z, v), dt_, options_);
  const RealVector x = z.head(nx);
  RealMatrix sensitivity(nx, num_controls());
  for (Index j = 0; j < num_controls(); ++j) {
    sensitivity.col(j) = apply_propagator_to_state(pd.derivatives[static_cast<size_t>(j)], x);
  }
  return std::make_unique<UnitaryLinearizedStep>(mode_, dt_, std::move(pd.propagator),
                                                 std::move(sensitivity));
}

StageJacobians UnitaryDynamics::stage_jacobians(const RealVector& z, const RealVector& v) const {
  return linearize(z, v)->jacobians();
}

ComplexMatrix UnitaryDynamics::unitary_of(const RealVector& z) const {
  return devectorize_unitary(z.head(unitary_state_dim()), dim());
}

RealVector UnitaryDynamics::envelope_of(const RealVector& z) const {
  if (mode_ == ControlMode::kDirect) return {};
  return z.tail(num_controls());
}

double unitarity_drift(const ComplexMatrix& u) {
  const ComplexMatrix e = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return e.cwiseAbs().maxCoeff();
}

UnitaryRollout UnitaryDynamics::rollout(const RealVector& z1,
                                        const std::vector<RealVector>& controls) const {
  if (z1.size() != state_dim()) {
    throw DimensionMismatch("rollout: initial state has length " + std::to_string(z1.size()) +
                            ", expected " + std::to_string(state_dim()));
  }
  UnitaryRollout out;
  out.trajectory.controls = controls;
  out.trajectory.states.reserve(controls.size() + 1);
  out.trajectory.states.push_back(z1);
  out.max_unitarity_drift = unitarity_drift(unitary_of(z1));
  for (const RealVector& v : controls) {
    out.trajectory.states.push_back(step(out.trajectory.states.back(), v));
    out.max_unitarity_drift =
        std::max(out.max_unitarity_drift, unitarity_drift(unitary_of(out.trajectory.states.back())));
  }
  out.unitarity_warning = !(out.max_unitarity_drift <= kUnitarityWarningThreshold);
  return out;
}

}  // namespace qilqr
