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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qilqr/problem.hpp"

namespace qilqr {

struct SolverSettings {
  int max_iterations = 2000;
  /// Stop when an accepted step lowers J by less than this.
  double cost_tolerance = 1e-12;
  /// Stop when max_k ||Q_u,k||_inf falls below this.
  double gradient_tolerance = 1e-9;
  double mu_init = 1e-6;
  double mu_min = 1e-9;
  double mu_max = 1e10;
  double mu_scale = 10.0;
  /// Step lengths tried in order: 1, 1/2, ..., 2^-(line_search_steps-1).
  int line_search_steps = 11;
  /// Accept when actual decrease >= gamma * predicted decrease.
  double goldstein_gamma = 0.1;
  std::uint64_t seed = 0;

  std::vector<double> alpha_schedule() const;
  /// Throws Error when a setting is out of range.
  void validate() const;
};

struct BackwardPassResult {
  std::vector<Eigen::VectorXd> feedforward;  // kappa_k, m
  std::vector<Eigen::MatrixXd> feedback;     // K_k, m x n_z
  /// sum_k kappa_k' Q_u,k
  double delta1 = 0.0;
  /// sum_k kappa_k' Q_uu,k kappa_k
  double delta2 = 0.0;
  /// max_k ||Q_u,k||_inf
  double gradient_norm = 0.0;

  /// Predicted cost change alpha*delta1 + alpha^2/2*delta2 (negative for descent).
  double expected_change(double alpha) const { return alpha * delta1 + 0.5 * alpha * alpha * delta2; }
};

/// Linearizations and cost expansions evaluated along one trajectory.
struct TrajectoryLinearization {
  std::vector<std::unique_ptr<LinearizedStep>> steps;
};

TrajectoryLinearization linearize_trajectory(const OptimalControlProblem& problem,
                                             const Trajectory& traj);

double trajectory_cost(const OptimalControlProblem& problem, const Trajectory& traj);

/// Open-loop rollout from the problem's initial state.
Trajectory rollout(const OptimalControlProblem& problem, const std::vector<Eigen::VectorXd>& controls);

/// Gauss-Newton value recursion. Throws FactorizationFailure when
/// Q_uu + mu I is not positive definite at some stage.
BackwardPassResult backward_pass(const OptimalControlProblem& problem, const Trajectory& traj,
                                 const TrajectoryLinearization& lin, double mu);

struct ForwardPassResult {
  Trajectory trajectory;
  double cost = 0.0;
};

/// Closed-loop rollout u_new = u + alpha*kappa + K (x_new - x).
/// Throws NonFiniteCost when the rollout diverges.
ForwardPassResult forward_pass(const OptimalControlProblem& problem, const Trajectory& traj,
                               const BackwardPassResult& gains, double alpha);

enum class Termination { kCostTolerance, kGradientTolerance, kMaxIterations, kNoProgress };

std::string to_string(Termination t);

struct IterationRecord {
  int iteration = 0;
  /// Total cost after this iteration (unchanged when the step was rejected).
  double cost = 0.0;
  double gradient_norm = 0.0;
  double mu = 0.0;
  /// Accepted step length, 0 when every step length was rejected.
  double alpha = 0.0;
  bool accepted = false;
  double wall_ms = 0.0;
};

struct SolveReport {
  Trajectory trajectory;
  double cost = 0.0;
  std::vector<IterationRecord> log;
  Termination termination = Termination::kMaxIterations;
  int iterations = 0;
  double wall_ms = 0.0;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

/// Alternates backward and forward passes with Levenberg-Marquardt
/// regularization on Q_uu and a backtracking Goldstein line search.
SolveReport solve(const OptimalControlProblem& problem,
                  const std::vector<Eigen::VectorXd>& initial_controls,
                  const SolverSettings& settings = {}, const IterationCallback& callback = {});

}  // namespace qilqr
