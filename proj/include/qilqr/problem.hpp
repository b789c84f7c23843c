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

// Interfaces between the iLQR solver and the models it optimizes.

#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace qilqr {

/// Linearization of z' = f(z, v) at one stage.
struct StageJacobians {
  Eigen::MatrixXd fx;  // n_z x n_z
  Eigen::MatrixXd fu;  // n_z x m
};

/// Quadratic expansion of a stage or final cost. For the final cost `lu`,
/// `luu` and `lux` are empty.
struct CostDerivatives {
  double l = 0.0;
  Eigen::VectorXd lx;
  Eigen::VectorXd lu;
  Eigen::MatrixXd lxx;
  Eigen::MatrixXd luu;
  Eigen::MatrixXd lux;
};

/// Value-function terms pulled back through one linearized step:
/// f_x' V_x, f_u' V_x, f_x' V_xx f_x, f_u' V_xx f_x, f_u' V_xx f_u.
struct PulledBackValue {
  Eigen::VectorXd fx_vx;
  Eigen::VectorXd fu_vx;
  Eigen::MatrixXd fx_vxx_fx;
  Eigen::MatrixXd fu_vxx_fx;
  Eigen::MatrixXd fu_vxx_fu;
};

/// One linearized step. Models with structured Jacobians override
/// `pull_back` to avoid dense n_z^3 products.
class LinearizedStep {
 public:
  virtual ~LinearizedStep() = default;

  virtual StageJacobians jacobians() const = 0;

  /// `vxx` must be symmetric.
  virtual PulledBackValue pull_back(const Eigen::VectorXd& vx, const Eigen::MatrixXd& vxx) const;
};

/// Linearization stored as dense matrices.
class DenseLinearizedStep final : public LinearizedStep {
 public:
  explicit DenseLinearizedStep(StageJacobians j) : j_(std::move(j)) {}
  StageJacobians jacobians() const override { return j_; }
  PulledBackValue pull_back(const Eigen::VectorXd& vx, const Eigen::MatrixXd& vxx) const override;

 private:
  StageJacobians j_;
};

/// Discrete-time optimal control problem with a fixed initial state:
///   min  l_f(z_N) + sum_{k<N} l(z_k, v_k)   s.t.  z_{k+1} = f(z_k, v_k).
class OptimalControlProblem {
 public:
  virtual ~OptimalControlProblem() = default;

  virtual Eigen::Index state_dim() const = 0;
  virtual Eigen::Index control_dim() const = 0;
  /// Number of stage controls; the trajectory has one more state.
  virtual Eigen::Index num_stages() const = 0;

  virtual Eigen::VectorXd initial_state() const = 0;
  virtual Eigen::VectorXd step(const Eigen::VectorXd& z, const Eigen::VectorXd& v) const = 0;
  virtual std::unique_ptr<LinearizedStep> linearize(const Eigen::VectorXd& z,
                                                    const Eigen::VectorXd& v) const = 0;

  virtual CostDerivatives stage_cost(const Eigen::VectorXd& z, const Eigen::VectorXd& v) const = 0;
  virtual CostDerivatives final_cost(const Eigen::VectorXd& z) const = 0;
  virtual double stage_cost_value(const Eigen::VectorXd& z, const Eigen::VectorXd& v) const {
    return stage_cost(z, v).l;
  }
  virtual double final_cost_value(const Eigen::VectorXd& z) const { return final_cost(z).l; }
};

/// States z_0..z_N and controls v_0..v_{N-1} with z_{k+1} = f(z_k, v_k).
struct Trajectory {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> controls;
};

}  // namespace qilqr
