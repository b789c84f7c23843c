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

#include "qilqr/ilqr_solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "qilqr/errors.hpp"

namespace qilqr {

using Eigen::MatrixXd;
using Eigen::VectorXd;

PulledBackValue LinearizedStep::pull_back(const VectorXd& vx, const MatrixXd& vxx) const {
  const StageJacobians j = jacobians();
  const MatrixXd vxx_fx = vxx * j.fx;
  PulledBackValue out;
  out.fx_vx = j.fx.transpose() * vx;
  out.fu_vx = j.fu.transpose() * vx;
  out.fx_vxx_fx = j.fx.transpose() * vxx_fx;
  out.fu_vxx_fx = j.fu.transpose() * vxx_fx;
  out.fu_vxx_fu = j.fu.transpose() * vxx * j.fu;
  return out;
}

PulledBackValue DenseLinearizedStep::pull_back(const VectorXd& vx, const MatrixXd& vxx) const {
  return LinearizedStep::pull_back(vx, vxx);
}

std::vector<double> SolverSettings::alpha_schedule() const {
  std::vector<double> alphas;
  alphas.reserve(static_cast<size_t>(line_search_steps));
  for (int i = 0; i < line_search_steps; ++i) alphas.push_back(std::ldexp(1.0, -i));
  return alphas;
}

void SolverSettings::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error("solver settings: " + what);
  };
  require(max_iterations > 0, "max-iterations must be positive");
  require(cost_tolerance > 0.0, "cost-tolerance must be positive");
  require(gradient_tolerance > 0.0, "gradient-tolerance must be positive");
  require(mu_min > 0.0, "mu-min must be positive");
  require(mu_init >= mu_min, "mu-init must be >= mu-min");
  require(mu_max > mu_init, "mu-max must exceed mu-init");
  require(mu_scale > 1.0, "mu-scale must exceed 1");
  require(line_search_steps > 0, "line-search-steps must be positive");
  require(goldstein_gamma > 0.0 && goldstein_gamma < 1.0, "goldstein-gamma must lie in (0, 1)");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kCostTolerance: return "cost_tolerance";
    case Termination::kGradientTolerance: return "gradient_tolerance";
    case Termination::kMaxIterations: return "max_iterations";
    case Termination::kNoProgress: return "no_progress";
  }
  return "?";
}

Trajectory rollout(const OptimalControlProblem& problem, const std::vector<VectorXd>& controls) {
  Trajectory traj;
  traj.controls = controls;
  traj.states.reserve(controls.size() + 1);
  traj.states.push_back(problem.initial_state());
  for (const VectorXd& v : controls) traj.states.push_back(problem.step(traj.states.back(), v));
  return traj;
}

double trajectory_cost(const OptimalControlProblem& problem, const Trajectory& traj) {
  double j = 0.0;
  for (size_t k = 0; k < traj.controls.size(); ++k) {
    j += problem.stage_cost_value(traj.states[k], traj.controls[k]);
  }
  return j + problem.final_cost_value(traj.states.back());
}

TrajectoryLinearization linearize_trajectory(const OptimalControlProblem& problem,
                                             const Trajectory& traj) {
  TrajectoryLinearization lin;
  lin.steps.reserve(traj.controls.size());
  for (size_t k = 0; k < traj.controls.size(); ++k) {
    lin.steps.push_back(problem.linearize(traj.states[k], traj.controls[k]));
  }
  return lin;
}

BackwardPassResult backward_pass(const OptimalControlProblem& problem, const Trajectory& traj,
                                 const TrajectoryLinearization& lin, double mu) {
  const size_t n_stages = traj.controls.size();
  if (lin.steps.size() != n_stages || traj.states.size() != n_stages + 1) {
    throw DimensionMismatch("backward_pass: trajectory and linearization disagree in length");
  }
  BackwardPassResult res;
  res.feedforward.resize(n_stages);
  res.feedback.resize(n_stages);

  const CostDerivatives terminal = problem.final_cost(traj.states.back());
  VectorXd vx = terminal.lx;
  MatrixXd vxx = terminal.lxx;

  for (size_t k = n_stages; k-- > 0;) {
    const CostDerivatives c = problem.stage_cost(traj.states[k], traj.controls[k]);
    const PulledBackValue pb = lin.steps[k]->pull_back(vx, vxx);

    const VectorXd qx = c.lx + pb.fx_vx;
    const VectorXd qu = c.lu + pb.fu_vx;
    const MatrixXd qxx = c.lxx + pb.fx_vxx_fx;
    MatrixXd quu = c.luu + pb.fu_vxx_fu;
    quu = 0.5 * (quu + quu.transpose()).eval();
    const MatrixXd qux = c.lux + pb.fu_vxx_fx;

    MatrixXd quu_reg = quu;
    quu_reg.diagonal().array() += mu;
    const Eigen::LLT<MatrixXd> llt(quu_reg);
    if (llt.info() != Eigen::Success || !quu_reg.allFinite()) {
      throw FactorizationFailure(k, "backward_pass: Q_uu + mu I not positive definite at stage " +
                                        std::to_string(k));
    }
    VectorXd kappa = -llt.solve(qu);
    MatrixXd gain = -llt.solve(qux);

    vx = qx + qux.transpose() * kappa;
    vxx = qxx + qux.transpose() * gain;
    vxx = 0.5 * (vxx + vxx.transpose()).eval();

    res.delta1 += kappa.dot(qu);
    res.delta2 += kappa.dot(quu * kappa);
    res.gradient_norm = std::max(res.gradient_norm, qu.cwiseAbs().maxCoeff());
    res.feedforward[k] = std::move(kappa);
    res.feedback[k] = std::move(gain);
  }
  return res;
}

ForwardPassResult forward_pass(const OptimalControlProblem& problem, const Trajectory& traj,
                               const BackwardPassResult& gains, double alpha) {
  const size_t n_stages = traj.controls.size();
  ForwardPassResult out;
  out.trajectory.states.reserve(n_stages + 1);
  out.trajectory.controls.reserve(n_stages);
  out.trajectory.states.push_back(traj.states.front());
  double cost = 0.0;
  for (size_t k = 0; k < n_stages; ++k) {
    const VectorXd& z = out.trajectory.states.back();
    VectorXd v = traj.controls[k] + alpha * gains.feedforward[k] +
                 gains.feedback[k] * (z - traj.states[k]);
    cost += problem.stage_cost_value(z, v);
    if (!v.allFinite() || !std::isfinite(cost)) {
      throw NonFiniteCost("forward_pass: diverged at stage " + std::to_string(k));
    }
    VectorXd next = problem.step(z, v);
    out.trajectory.controls.push_back(std::move(v));
    out.trajectory.states.push_back(std::move(next));
  }
  cost += problem.final_cost_value(out.trajectory.states.back());
  if (!std::isfinite(cost)) throw NonFiniteCost("forward_pass: non-finite total cost");
  out.cost = cost;
  return out;
}

SolveReport solve(const OptimalControlProblem& problem, const std::vector<VectorXd>& initial_controls,
                  const SolverSettings& settings, const IterationCallback& callback) {
  using Clock = std::chrono::steady_clock;
  settings.validate();
  if (static_cast<Eigen::Index>(initial_controls.size()) != problem.num_stages()) {
    throw DimensionMismatch("solve: expected " + std::to_string(problem.num_stages()) +
                            " initial controls, got " + std::to_string(initial_controls.size()));
  }
  for (const VectorXd& v : initial_controls) {
    if (v.size() != problem.control_dim()) {
      throw DimensionMismatch("solve: initial control has the wrong length");
    }
  }

  const auto start = Clock::now();
  auto elapsed_ms = [](Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
  };

  SolveReport report;
  report.trajectory = rollout(problem, initial_controls);
  report.cost = trajectory_cost(problem, report.trajectory);
  if (!std::isfinite(report.cost)) throw NonFiniteCost("solve: initial rollout is not finite");

  const std::vector<double> alphas = settings.alpha_schedule();
  double mu = settings.mu_init;
  TrajectoryLinearization lin = linearize_trajectory(problem, report.trajectory);
  bool done = false;

  for (int iter = 1; iter <= settings.max_iterations && !done; ++iter) {
    const auto iter_start = Clock::now();
    IterationRecord rec;
    rec.iteration = iter;
    report.iterations = iter;

    std::optional<BackwardPassResult> bp;
    while (!bp) {
      try {
        bp = backward_pass(problem, report.trajectory, lin, mu);
      } catch (const FactorizationFailure&) {
        mu *= settings.mu_scale;
        if (mu > settings.mu_max) break;
      }
    }
    if (!bp) {
      rec.cost = report.cost;
      rec.mu = mu;
      rec.wall_ms = elapsed_ms(iter_start);
      report.log.push_back(rec);
      if (callback) callback(rec);
      report.termination = Termination::kNoProgress;
      break;
    }

    rec.gradient_norm = bp->gradient_norm;
    rec.mu = mu;
    if (bp->gradient_norm <= settings.gradient_tolerance ||
        -bp->expected_change(1.0) < settings.cost_tolerance) {
      rec.cost = report.cost;
      rec.wall_ms = elapsed_ms(iter_start);
      report.log.push_back(rec);
      if (callback) callback(rec);
      report.termination = bp->gradient_norm <= settings.gradient_tolerance
                               ? Termination::kGradientTolerance
                               : Termination::kCostTolerance;
      break;
    }

    std::optional<ForwardPassResult> accepted;
    for (double alpha : alphas) {
      const double predicted = -bp->expected_change(alpha);
      if (!(predicted > 0.0)) continue;
      try {
        ForwardPassResult fp = forward_pass(problem, report.trajectory, *bp, alpha);
        if (report.cost - fp.cost >= settings.goldstein_gamma * predicted) {
          rec.alpha = alpha;
          accepted = std::move(fp);
          break;
        }
      } catch (const NonFiniteCost&) {
        // rejected step length
      }
    }

    if (accepted) {
      const double decrease = report.cost - accepted->cost;
      report.trajectory = std::move(accepted->trajectory);
      report.cost = accepted->cost;
      rec.accepted = true;
      mu = std::max(mu / settings.mu_scale, settings.mu_min);
      if (decrease < settings.cost_tolerance) {
        report.termination = Termination::kCostTolerance;
        done = true;
      } else {
        lin = linearize_trajectory(problem, report.trajectory);
      }
    } else {
      mu *= settings.mu_scale;
      if (mu > settings.mu_max) {
        report.termination = Termination::kNoProgress;
        done = true;
      }
    }
    rec.cost = report.cost;
    rec.wall_ms = elapsed_ms(iter_start);
    report.log.push_back(rec);
    if (callback) callback(rec);
    if (!done && iter == settings.max_iterations) report.termination = Termination::kMaxIterations;
  }

  report.wall_ms = elapsed_ms(start);
  return report;
}

}  // namespace qilqr
