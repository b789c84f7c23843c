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

// Experiment driver behind the qilqr command-line tool.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qilqr/config.hpp"
#include "qilqr/ilqr_solver.hpp"
#include "qilqr/ocp.hpp"

namespace qilqr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNoProgress = 2;

using CostMultipliers = std::array<double, 4>;
inline constexpr CostMultipliers kUnitMultipliers{1.0, 1.0, 1.0, 1.0};

GateProblem make_problem(const RunConfig& config, const CostMultipliers& multipliers = kUnitMultipliers);

/// Controls drawn uniformly from [-init_amplitude, init_amplitude].
std::vector<RealVector> random_initial_controls(const RunConfig& config, std::uint64_t seed);

struct RunOutcome {
  SolveReport report;
  FidelityReport fidelity;
  double max_unitarity_drift = 0.0;
};

RunOutcome run_optimization(const RunConfig& config, const CostMultipliers& multipliers,
                            std::uint64_t seed, const IterationCallback& callback = {});

/// Fidelity of the final state of `traj`.
FidelityReport trajectory_fidelity(const GateProblem& problem, const Trajectory& traj);

/// summary.json contents. `report` is null for replays.
nlohmann::json make_summary(const RunConfig& config, const GateProblem& problem,
                            const Trajectory& traj, const FidelityReport& fid,
                            const SolveReport* report);

/// Writes controls.csv, populations.csv, summary.json and (when `report` is
/// given) convergence.jsonl into `dir`.
void write_run_artifacts(const std::filesystem::path& dir, const RunConfig& config,
                         const GateProblem& problem, const Trajectory& traj,
                         const FidelityReport& fid, const SolveReport* report,
                         const nlohmann::json& extra = nlohmann::json::object());

struct GridCellResult {
  std::size_t cell = 0;
  CostMultipliers multipliers{};
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double trace_infidelity = 0.0;
  double frobenius_cost = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
  double smoothness = 0.0;
  Termination termination = Termination::kMaxIterations;
  std::vector<RealVector> controls;
  std::vector<IterationRecord> log;
};

/// Solves every cell of config.grid (using config.grid.jobs threads) and
/// returns the results ranked by trace infidelity; failed cells come last.
/// Cell c, restart r uses seed config.seed + c * restarts + r.
std::vector<GridCellResult> run_grid(const RunConfig& config, std::ostream* progress = nullptr);

/// Runs only the listed cells of the grid. Seeds and multipliers are those
/// each cell has in the full sweep, so results are identical to the matching
/// rows of run_grid.
std::vector<GridCellResult> run_grid_cells(const RunConfig& config,
                                           const std::vector<std::size_t>& cells,
                                           std::ostream* progress = nullptr);

void write_grid_results_csv(const std::filesystem::path& path, const std::vector<GridCellResult>& ranked);

struct DragReport {
  /// Pearson correlation of u^Y with du^X/dt over the interior; empty when
  /// either series is constant there.
  std::optional<double> correlation;
  /// Least-squares c in u^Y ~ c du^X/dt.
  std::optional<double> factor;
  double minus_inverse_delta1 = 0.0;
  double minus_delta1 = 0.0;
  std::size_t interior_begin = 0;
  std::size_t interior_end = 0;
  std::string status;
};

/// Compares the quadrature envelope with the central-difference derivative of
/// the in-phase envelope, ignoring the first and last `trim_fraction` of steps.
DragReport drag_check(const std::vector<double>& ux, const std::vector<double>& uy, double dt,
                      double delta1, double trim_fraction = 0.1);

nlohmann::json to_json(const DragReport& report);

int cmd_optimize(const RunConfig& config, std::ostream& out);
int cmd_gridsearch(const RunConfig& config, std::ostream& out);
int cmd_rollout(const RunConfig& config, const std::filesystem::path& controls, std::ostream& out);
int cmd_drag_check(const RunConfig& config, const std::filesystem::path& controls, std::ostream& out);

}  // namespace qilqr
