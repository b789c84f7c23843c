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

// Plot-ready output files. Numbers are written with 17 significant digits so
// that controls read back from controls.csv replay bit-identically.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qilqr/dynamics.hpp"
#include "qilqr/ilqr_solver.hpp"
#include "qilqr/ocp.hpp"
#include "qilqr/transmon_model.hpp"

namespace qilqr {

/// Shortest decimal form that round-trips (%.17g).
std::string format_double(double x);

/// controls.csv: k, t_ns, then one column per channel. In smoothed mode the
/// optimized rate columns are prefixed with "d" and followed by the envelope
/// held during each step.
void write_controls_csv(const std::filesystem::path& path, const TransmonSystem& sys,
                        const UnitaryDynamics& dynamics, const Trajectory& traj);

/// Reads the optimized controls back (rate columns in smoothed mode). Throws
/// Error on missing columns, a row count other than `expected_rows`, or
/// non-finite values.
std::vector<RealVector> read_controls_csv(const std::filesystem::path& path,
                                          const TransmonSystem& sys, ControlMode mode,
                                          Index expected_rows);

/// Envelope columns of a controls.csv (the controls themselves in direct mode).
std::vector<RealVector> read_envelopes_csv(const std::filesystem::path& path,
                                           const TransmonSystem& sys);

/// |<j|U_k|input>|^2 for k = 0..N (rows) and every basis state j (columns).
RealMatrix population_trace(const UnitaryDynamics& dynamics, const Trajectory& traj, Index input);

struct LeakageStats {
  /// Time-averaged and peak total population outside the computational subspace.
  double mean = 0.0;
  double max = 0.0;
};

LeakageStats leakage_stats(const TransmonSystem& sys, const RealMatrix& populations);

/// Input indices for the configured labels (all computational states if empty).
std::vector<Index> population_input_indices(const TransmonSystem& sys,
                                            const std::vector<std::string>& labels);

/// populations.csv: input, k, t_ns, p_<label> for every basis state.
void write_populations_csv(const std::filesystem::path& path, const TransmonSystem& sys,
                           const UnitaryDynamics& dynamics, const Trajectory& traj,
                           const std::vector<Index>& inputs);

/// convergence.jsonl: one JSON object per iteration.
void write_convergence_jsonl(const std::filesystem::path& path,
                             const std::vector<IterationRecord>& log);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Sum over steps of the applied envelope times dt, per channel.
RealVector pulse_area(const UnitaryDynamics& dynamics, const Trajectory& traj);

/// sum_k ||du_k/dt||^2 (the rate controls in smoothed mode, forward
/// differences of the envelope in direct mode).
double smoothness(const UnitaryDynamics& dynamics, const Trajectory& traj);

}  // namespace qilqr
