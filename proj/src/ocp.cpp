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

#include "qilqr/ocp.hpp"

#include <cmath>
#include <string>

#include "qilqr/errors.hpp"

namespace qilqr {

namespace {

void check_diagonal(const RealVector& diag, Index expected, const char* name, bool strictly_positive) {
  if (diag.size() != expected) {
    throw DimensionMismatch(std::string(name) + " has " + std::to_string(diag.size()) +
                            " entries, expected " + std::to_string(expected));
  }
  for (Index i = 0; i < diag.size(); ++i) {
    const bool ok = strictly_positive ? diag(i) > 0.0 : diag(i) >= 0.0;
    if (!ok || !std::isfinite(diag(i))) {
      throw Error(std::string(name) + (strictly_positive ? " must be positive" : " must be non-negative"));
    }
  }
}

}  // namespace

CostMatrices CostMatrices::uniform(Index unitary_state_dim, Index num_controls, double q_f,
                                   double r_d, double r_c, double r_f) {
  return {RealVector::Constant(unitary_state_dim, q_f), RealVector::Constant(num_controls, r_d),
          RealVector::Constant(num_controls, r_c), RealVector::Constant(num_controls, r_f)};
}

void CostMatrices::validate(Index unitary_state_dim, Index num_controls) const {
  check_diagonal(q_f, unitary_state_dim, "q_f", false);
  check_diagonal(r_d, num_controls, "r_d", true);
  check_diagonal(r_c, num_controls, "r_c", false);
  check_diagonal(r_f, num_controls, "r_f", false);
}

CostDerivatives stage_cost(const RealVector& z, const RealVector& v, const CostMatrices& costs,
                           ControlMode mode) {
  const Index m = v.size();
  if (costs.r_d.size() != m || costs.r_c.size() != m) {
    throw DimensionMismatch("stage_cost: control size does not match cost matrices");
  }
  CostDerivatives c;
  c.lx = RealVector::Zero(z.size());
  c.lxx = RealMatrix::Zero(z.size(), z.size());
  c.lux = RealMatrix::Zero(m, z.size());
  if (mode == ControlMode::kDirect) {
    c.l = v.dot(costs.r_c.cwiseProduct(v));
    c.lu = 2.0 * costs.r_c.cwiseProduct(v);
    c.luu = (2.0 * costs.r_c).asDiagonal();
    return c;
  }
  if (z.size() < m) throw DimensionMismatch("stage_cost: state too short for envelope block");
  const RealVector u = z.tail(m);
  c.l = v.dot(costs.r_d.cwiseProduct(v)) + u.dot(costs.r_c.cwiseProduct(u));
  c.lx.tail(m) = 2.0 * costs.r_c.cwiseProduct(u);
  c.lxx.bottomRightCorner(m, m).diagonal() = 2.0 * costs.r_c;
  c.lu = 2.0 * costs.r_d.cwiseProduct(v);
  c.luu = (2.0 * costs.r_d).asDiagonal();
  return c;
}

CostDerivatives final_cost(const RealVector& z, const GoalGate& goal, const CostMatrices& costs,
                           ControlMode mode) {
  const Index nx = goal.vectorized.size();
  const Index extra = mode == ControlMode::kSmoothed ? costs.r_f.size() : 0;
  if (z.size() != nx + extra || costs.q_f.size() != nx) {
    throw DimensionMismatch("final_cost: state has length " + std::to_string(z.size()) +
                            ", expected " + std::to_string(nx + extra));
  }
  CostDerivatives c;
  const RealVector e = z.head(nx) - goal.vectorized;
  c.l = e.dot(costs.q_f.cwiseProduct(e));
  c.lx = RealVector::Zero(z.size());
  c.lxx = RealMatrix::Zero(z.size(), z.size());
  c.lx.head(nx) = 2.0 * costs.q_f.cwiseProduct(e);
  c.lxx.topLeftCorner(nx, nx).diagonal() = 2.0 * costs.q_f;
  if (extra > 0) {
    const RealVector u = z.tail(extra);
    c.l += u.dot(costs.r_f.cwiseProduct(u));
    c.lx.tail(extra) = 2.0 * costs.r_f.cwiseProduct(u);
    c.lxx.bottomRightCorner(extra, extra).diagonal() = 2.0 * costs.r_f;
  }
  return c;
}

FidelityReport fidelity(const ComplexMatrix& u, const GoalGate& goal, const RealVector& q_f) {
  const Index d = goal.unitary.rows();
  if (u.rows() != d || u.cols() != d) {
    throw DimensionMismatch("fidelity: unitary is " + std::to_string(u.rows()) + "x" +
                            std::to_string(u.cols()) + ", goal is " + std::to_string(d) + "x" +
                            std::to_string(d));
  }
  if (unitarity_drift(u) > 1e-6) throw NonUnitaryInput("fidelity: U_N is not unitary");
  if (unitarity_drift(goal.unitary) > 1e-6) throw NonUnitaryInput("fidelity: goal is not unitary");
  if (q_f.size() != 2 * d * d) throw DimensionMismatch("fidelity: q_f has the wrong length");

  FidelityReport r;
  const RealVector e = vectorize_unitary(u) - goal.vectorized;
  r.frobenius_cost = e.dot(q_f.cwiseProduct(e));
  const double overlap = std::abs((goal.unitary.adjoint() * u).trace());
  r.trace_infidelity = std::max(0.0, 1.0 - overlap * overlap / static_cast<double>(d * d));
  return r;
}

FidelityReport fidelity(const ComplexMatrix& u, const GoalGate& goal) {
  const Index d = goal.unitary.rows();
  return fidelity(u, goal, RealVector::Ones(2 * d * d));
}

GateProblem::GateProblem(UnitaryDynamics dynamics, GoalGate goal, CostMatrices costs,
                         Index num_stages)
    : dynamics_(std::move(dynamics)),
      goal_(std::move(goal)),
      costs_(std::move(costs)),
      num_stages_(num_stages) {
  if (goal_.unitary.rows() != dynamics_.dim()) {
    throw DimensionMismatch("GateProblem: goal dimension does not match the dynamics");
  }
  costs_.validate(dynamics_.unitary_state_dim(), dynamics_.num_controls());
  if (num_stages_ < 1) throw Error("GateProblem: need at least one stage");
}

CostDerivatives GateProblem::stage_cost(const RealVector& z, const RealVector& v) const {
  return qilqr::stage_cost(z, v, costs_, dynamics_.mode());
}

CostDerivatives GateProblem::final_cost(const RealVector& z) const {
  return qilqr::final_cost(z, goal_, costs_, dynamics_.mode());
}

double GateProblem::stage_cost_value(const RealVector& z, const RealVector& v) const {
  if (dynamics_.mode() == ControlMode::kDirect) return v.dot(costs_.r_c.cwiseProduct(v));
  const auto u = z.tail(v.size());
  return v.dot(costs_.r_d.cwiseProduct(v)) + u.dot(costs_.r_c.cwiseProduct(u));
}

double GateProblem::final_cost_value(const RealVector& z) const {
  const Index nx = goal_.vectorized.size();
  const RealVector e = z.head(nx) - goal_.vectorized;
  double l = e.dot(costs_.q_f.cwiseProduct(e));
  if (dynamics_.mode() == ControlMode::kSmoothed) {
    const auto u = z.tail(costs_.r_f.size());
    l += u.dot(costs_.r_f.cwiseProduct(u));
  }
  return l;
}

}  // namespace qilqr
