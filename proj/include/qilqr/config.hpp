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

// Run configuration. The on-disk format is JSON with kebab-case keys; unknown
// keys are rejected so that a misspelled cost weight cannot silently fall
// back to its default.
//
//   {
//     "system": "1q3l",
//     "mode": "smoothed",
//     "goal": "X3",
//     "n": 80,
//     "dt": 0.5,
//     "costs": {"q-f": 100, "r-d": 1, "r-c": 0.1, "r-f": 1},
//     "solver": {"max-iterations": 2000},
//     "grid": {"preset": "coarse", "jobs": 8}
//   }

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qilqr/dynamics.hpp"
#include "qilqr/ilqr_solver.hpp"
#include "qilqr/ocp.hpp"
#include "qilqr/propagator.hpp"
#include "qilqr/transmon_model.hpp"

namespace qilqr {

/// Cost diagonals as written in the config: one entry means a uniform diagonal.
struct CostDiagonals {
  std::vector<double> q_f{100.0};
  std::vector<double> r_d{1.0};
  std::vector<double> r_c{0.1};
  std::vector<double> r_f{1.0};

  /// Scales each matrix by the matching multiplier (order q-f, r-d, r-c, r-f).
  CostMatrices materialize(Index unitary_state_dim, Index num_controls,
                           const std::array<double, 4>& multipliers = {1.0, 1.0, 1.0, 1.0}) const;
};

inline constexpr std::array<const char*, 4> kCostKeys{"q-f", "r-d", "r-c", "r-f"};

struct GridSpec {
  static std::vector<double> coarse_multipliers() { return {0.1, 0.5, 1.0, 5.0, 10.0}; }
  static std::vector<double> fine_multipliers() {
    return {0.1, 0.25, 0.5, 0.75, 1.0, 2.5, 5.0, 7.5, 10.0};
  }

  /// Multiplier lists in the order q-f, r-d, r-c, r-f.
  std::array<std::vector<double>, 4> multipliers{coarse_multipliers(), coarse_multipliers(),
                                                 coarse_multipliers(), coarse_multipliers()};
  int jobs = 1;
  int restarts = 1;
  int keep_top = 10;

  std::size_t num_cells() const;
  /// Multipliers of cell `index` (row-major, q-f varies slowest).
  std::array<double, 4> cell(std::size_t index) const;
};

struct RunConfig {
  SystemKind system = SystemKind::k1q2l;
  TransmonParameters parameters;
  ControlMode mode = ControlMode::kSmoothed;
  GateName goal = GateName::X2;
  /// Number of piecewise-constant time steps (stage controls).
  int n = 80;
  CostDiagonals costs;
  SolverSettings solver;
  PropagatorOptions propagator;
  std::uint64_t seed = 1;
  double init_amplitude = 0.01;
  /// Basis labels of the input states traced in populations.csv. Empty means
  /// every computational (non-leakage) basis state.
  std::vector<std::string> population_inputs;
  std::filesystem::path output_dir = "out";
  GridSpec grid;

  double dt() const noexcept { return parameters.dt_ns; }
  TransmonSystem system_model() const { return TransmonSystem(system, parameters); }
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace qilqr
