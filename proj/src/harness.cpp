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

#include "qilqr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "qilqr/artifacts.hpp"
#include "qilqr/errors.hpp"

namespace qilqr {

using nlohmann::json;

GateProblem make_problem(const RunConfig& config, const CostMultipliers& multipliers) {
  const TransmonSystem sys = config.system_model();
  UnitaryDynamics dynamics(sys, config.mode, config.propagator);
  CostMatrices costs = config.costs.materialize(dynamics.unitary_state_dim(),
                                                dynamics.num_controls(), multipliers);
  return GateProblem(std::move(dynamics), goal_gate(config.goal, sys), std::move(costs), config.n);
}

std::vector<RealVector> random_initial_controls(const RunConfig& config, std::uint64_t seed) {
  const TransmonSystem sys = config.system_model();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-config.init_amplitude, config.init_amplitude);
  std::vector<RealVector> controls(static_cast<size_t>(config.n));
  for (RealVector& v : controls) {
    v.resize(sys.num_controls());
    for (Index j = 0; j < v.size(); ++j) v(j) = config.init_amplitude > 0.0 ? dist(rng) : 0.0;
  }
  return controls;
}

FidelityReport trajectory_fidelity(const GateProblem& problem, const Trajectory& traj) {
  const ComplexMatrix u = problem.dynamics().unitary_of(traj.states.back());
  return fidelity(u, problem.goal(), problem.costs().q_f);
}

namespace {

double max_drift(const GateProblem& problem, const Trajectory& traj) {
  double drift = 0.0;
  for (const RealVector& z : traj.states) {
    drift = std::max(drift, unitarity_drift(problem.dynamics().unitary_of(z)));
  }
  return drift;
}

json vector_to_json(const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json multipliers_to_json(const CostMultipliers& m) {
  return {{"q-f", m[0]}, {"r-d", m[1]}, {"r-c", m[2]}, {"r-f", m[3]}};
}

}  // namespace

RunOutcome run_optimization(const RunConfig& config, const CostMultipliers& multipliers,
                            std::uint64_t seed, const IterationCallback& callback) {
  const GateProblem problem = make_problem(config, multipliers);
  RunOutcome out;
  out.report = solve(problem, random_initial_controls(config, seed), config.solver, callback);
  out.fidelity = trajectory_fidelity(problem, out.report.trajectory);
  out.max_unitarity_drift = max_drift(problem, out.report.trajectory);
  return out;
}

json make_summary(const RunConfig& config, const GateProblem& problem, const Trajectory& traj,
                  const FidelityReport& fid, const SolveReport* report) {
  const UnitaryDynamics& dyn = problem.dynamics();
  const TransmonSystem sys = config.system_model();
  const std::vector<std::string> names = sys.channel_names();

  json summary;
  summary["trace_infidelity"] = fid.trace_infidelity;
  summary["frobenius_cost"] = fid.frobenius_cost;
  summary["total_cost"] = trajectory_cost(problem, traj);

  const RealVector area = pulse_area(dyn, traj);
  json area_json;
  for (size_t j = 0; j < names.size(); ++j) area_json[names[j]] = area(static_cast<Index>(j));
  summary["pulse_area_ns"] = area_json;
  summary["analytic_x_area_ns"] = -std::numbers::pi / sys.r1();
  summary["smoothness"] = smoothness(dyn, traj);
  if (dyn.mode() == ControlMode::kSmoothed) {
    summary["initial_envelope"] = vector_to_json(dyn.envelope_of(traj.states.front()));
    summary["final_envelope"] = vector_to_json(dyn.envelope_of(traj.states.back()));
  }

  json leakage = json::object();
  const std::vector<std::string> labels = sys.basis_labels();
  for (Index input : population_input_indices(sys, config.population_inputs)) {
    const LeakageStats s = leakage_stats(sys, population_trace(dyn, traj, input));
    leakage[labels[static_cast<size_t>(input)]] = {{"mean", s.mean}, {"max", s.max}};
  }
  summary["leakage"] = leakage;
  summary["max_unitarity_drift"] = max_drift(problem, traj);

  if (report != nullptr) {
    summary["termination"] = to_string(report->termination);
    summary["iterations"] = report->iterations;
    summary["wall_ms"] = report->wall_ms;
  } else {
    summary["termination"] = "replay";
  }
  summary["config"] = to_json(config);
  return summary;
}

void write_run_artifacts(const std::filesystem::path& dir, const RunConfig& config,
                         const GateProblem& problem, const Trajectory& traj,
                         const FidelityReport& fid, const SolveReport* report, const json& extra) {
  const TransmonSystem sys = config.system_model();
  std::filesystem::create_directories(dir);
  write_controls_csv(dir / "controls.csv", sys, problem.dynamics(), traj);
  write_populations_csv(dir / "populations.csv", sys, problem.dynamics(), traj,
                        population_input_indices(sys, config.population_inputs));
  if (report != nullptr) write_convergence_jsonl(dir / "convergence.jsonl", report->log);
  json summary = make_summary(config, problem, traj, fid, report);
  for (auto it = extra.begin(); it != extra.end(); ++it) summary[it.key()] = it.value();
  write_json(dir / "summary.json", summary);
}

std::vector<GridCellResult> run_grid(const RunConfig& config, std::ostream* progress) {
  std::vector<std::size_t> cells(config.grid.num_cells());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
  return run_grid_cells(config, cells, progress);
}

std::vector<GridCellResult> run_grid_cells(const RunConfig& config,
                                           const std::vector<std::size_t>& cells,
                                           std::ostream* progress) {
  const GridSpec& grid = config.grid;
  const std::size_t n_cells = cells.size();
  for (std::size_t c : cells) {
    if (c >= grid.num_cells()) throw DimensionMismatch("grid cell index out of range");
  }
  std::vector<GridCellResult> results(n_cells);
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::size_t finished = 0;

  auto run_cell = [&](std::size_t slot) {
    const std::size_t cell = cells[slot];
    GridCellResult best;
    best.cell = cell;
    best.multipliers = grid.cell(cell);
    for (int r = 0; r < grid.restarts; ++r) {
      GridCellResult res;
      res.cell = cell;
      res.multipliers = best.multipliers;
      res.seed = config.seed + cell * static_cast<std::uint64_t>(grid.restarts) +
                 static_cast<std::uint64_t>(r);
      try {
        const GateProblem problem = make_problem(config, res.multipliers);
        const SolveReport report =
            solve(problem, random_initial_controls(config, res.seed), config.solver);
        const FidelityReport fid = trajectory_fidelity(problem, report.trajectory);
        res.ok = true;
        res.trace_infidelity = fid.trace_infidelity;
        res.frobenius_cost = fid.frobenius_cost;
        res.iterations = report.iterations;
        res.wall_ms = report.wall_ms;
        res.smoothness = smoothness(problem.dynamics(), report.trajectory);
        res.termination = report.termination;
        res.controls = report.trajectory.controls;
        res.log = report.log;
      } catch (const std::exception& e) {
        res.ok = false;
        res.error = e.what();
      }
      const bool better = (res.ok && (!best.ok || res.trace_infidelity < best.trace_infidelity)) ||
                          (r == 0 && !res.ok);
      if (better) best = std::move(res);
    }
    if (progress != nullptr) {
      std::lock_guard lock(progress_mutex);
      ++finished;
      *progress << "[grid " << finished << "/" << n_cells << "] cell " << cell << ": "
                << (best.ok ? "infidelity " + format_double(best.trace_infidelity)
                            : "failed: " + best.error)
                << '\n';
      progress->flush();
    }
    results[slot] = std::move(best);
  };

  auto worker = [&] {
    for (std::size_t cell = next++; cell < n_cells; cell = next++) run_cell(cell);
  };

  const int jobs = std::max(1, std::min<int>(grid.jobs, static_cast<int>(n_cells)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  }

  std::stable_sort(results.begin(), results.end(), [](const GridCellResult& a, const GridCellResult& b) {
    if (a.ok != b.ok) return a.ok;
    if (!a.ok) return a.cell < b.cell;
    const bool a_nan = std::isnan(a.trace_infidelity);
    const bool b_nan = std::isnan(b.trace_infidelity);
    if (a_nan != b_nan) return b_nan;
    if (a.trace_infidelity != b.trace_infidelity) return a.trace_infidelity < b.trace_infidelity;
    return a.cell < b.cell;
  });
  return results;
}

void write_grid_results_csv(const std::filesystem::path& path,
                            const std::vector<GridCellResult>& ranked) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "rank,cell,seed,q_f_mult,r_d_mult,r_c_mult,r_f_mult,trace_infidelity,frobenius_cost,"
         "iterations,wall_ms,smoothness,termination,error\n";
  for (size_t rank = 0; rank < ranked.size(); ++rank) {
    const GridCellResult& r = ranked[rank];
    out << rank + 1 << ',' << r.cell << ',' << r.seed;
    for (double m : r.multipliers) out << ',' << format_double(m);
    if (r.ok) {
      out << ',' << format_double(r.trace_infidelity) << ',' << format_double(r.frobenius_cost)
          << ',' << r.iterations << ',' << format_double(r.wall_ms) << ','
          << format_double(r.smoothness) << ',' << to_string(r.termination) << ",\n";
    } else {
      std::string err = r.error;
      std::replace(err.begin(), err.end(), ',', ';');
      std::replace(err.begin(), err.end(), '\n', ' ');
      out << ",,,,,,failed," << err << '\n';
    }
  }
}

DragReport drag_check(const std::vector<double>& ux, const std::vector<double>& uy, double dt,
                      double delta1, double trim_fraction) {
  if (ux.size() != uy.size()) throw DimensionMismatch("drag_check: envelope lengths differ");
  DragReport rep;
  rep.minus_inverse_delta1 = -1.0 / delta1;
  rep.minus_delta1 = -delta1;
  const std::size_t n = ux.size();
  const auto trim = static_cast<std::size_t>(std::ceil(trim_fraction * static_cast<double>(n)));
  rep.interior_begin = std::max<std::size_t>(1, trim);
  rep.interior_end = n > trim + 1 ? std::min(n - 1, n - trim) : 0;
  if (rep.interior_end <= rep.interior_begin + 1) {
    rep.status = "undefined: too few interior points";
    return rep;
  }

  std::vector<double> x, y;
  for (std::size_t k = rep.interior_begin; k < rep.interior_end; ++k) {
    x.push_back((ux[k + 1] - ux[k - 1]) / (2.0 * dt));
    y.push_back(uy[k]);
  }
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, syy = 0.0, sxy = 0.0, x2 = 0.0, xy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
    x2 += x[i] * x[i];
    xy += x[i] * y[i];
  }
  if (x2 > 0.0) rep.factor = xy / x2;
  const double scale_x = std::max(1.0, mx * mx) * 1e-24 * count;
  const double scale_y = std::max(1.0, my * my) * 1e-24 * count;
  if (!(sxx > scale_x) || !(syy > scale_y)) {
    rep.status = "undefined: constant envelope on the interior";
    return rep;
  }
  rep.correlation = sxy / std::sqrt(sxx * syy);
  rep.status = "ok";
  return rep;
}

json to_json(const DragReport& r) {
  json doc;
  doc["status"] = r.status;
  doc["correlation"] = r.correlation ? json(*r.correlation) : json(nullptr);
  doc["factor"] = r.factor ? json(*r.factor) : json(nullptr);
  doc["minus_inverse_delta1"] = r.minus_inverse_delta1;
  doc["minus_delta1"] = r.minus_delta1;
  doc["interior_begin"] = r.interior_begin;
  doc["interior_end"] = r.interior_end;
  return doc;
}

int cmd_optimize(const RunConfig& config, std::ostream& out) {
  const GateProblem problem = make_problem(config);
  const SolveReport report = solve(problem, random_initial_controls(config, config.seed),
                                   config.solver);
  const FidelityReport fid = trajectory_fidelity(problem, report.trajectory);
  write_run_artifacts(config.output_dir, config, problem, report.trajectory, fid, &report);
  out << "termination: " << to_string(report.termination) << " after " << report.iterations
      << " iterations (" << format_double(report.wall_ms / 1000.0) << " s)\n"
      << "cost: " << format_double(report.cost) << '\n'
      << "trace infidelity: " << format_double(fid.trace_infidelity) << '\n'
      << "artifacts: " << config.output_dir.string() << '\n';
  return report.termination == Termination::kNoProgress ? kExitNoProgress : kExitOk;
}

int cmd_gridsearch(const RunConfig& config, std::ostream& out) {
  const std::vector<GridCellResult> ranked = run_grid(config, &out);
  write_grid_results_csv(config.output_dir / "grid_results.csv", ranked);

  const int keep = std::min<int>(config.grid.keep_top, static_cast<int>(ranked.size()));
  for (int rank = 0; rank < keep; ++rank) {
    const GridCellResult& r = ranked[static_cast<size_t>(rank)];
    if (!r.ok) break;
    const GateProblem problem = make_problem(config, r.multipliers);
    const Trajectory traj = rollout(problem, r.controls);
    SolveReport report;
    report.trajectory = traj;
    report.log = r.log;
    report.iterations = r.iterations;
    report.termination = r.termination;
    report.wall_ms = r.wall_ms;
    const std::filesystem::path dir =
        config.output_dir / "top" / ("rank" + std::to_string(rank + 1) + "_cell" + std::to_string(r.cell));
    RunConfig cell_config = config;
    cell_config.seed = r.seed;
    write_run_artifacts(dir, cell_config, problem, traj, trajectory_fidelity(problem, traj), &report,
                        {{"cell", r.cell}, {"multipliers", multipliers_to_json(r.multipliers)}});
  }
  if (!ranked.empty() && ranked.front().ok) {
    out << "best cell " << ranked.front().cell
        << ": trace infidelity " << format_double(ranked.front().trace_infidelity) << '\n';
  }
  out << "results: " << (config.output_dir / "grid_results.csv").string() << '\n';
  return kExitOk;
}

int cmd_rollout(const RunConfig& config, const std::filesystem::path& controls_path,
                std::ostream& out) {
  const GateProblem problem = make_problem(config);
  const std::vector<RealVector> controls =
      read_controls_csv(controls_path, config.system_model(), config.mode, config.n);
  const Trajectory traj = rollout(problem, controls);
  const FidelityReport fid = trajectory_fidelity(problem, traj);
  const TransmonSystem sys = config.system_model();
  std::filesystem::create_directories(config.output_dir);
  write_populations_csv(config.output_dir / "populations.csv", sys, problem.dynamics(), traj,
                        population_input_indices(sys, config.population_inputs));
  write_json(config.output_dir / "summary.json", make_summary(config, problem, traj, fid, nullptr));
  out << "trace infidelity: " << format_double(fid.trace_infidelity) << '\n'
      << "frobenius cost: " << format_double(fid.frobenius_cost) << '\n';
  return kExitOk;
}

int cmd_drag_check(const RunConfig& config, const std::filesystem::path& controls_path,
                   std::ostream& out) {
  const TransmonSystem sys = config.system_model();
  if (sys.num_transmons() != 1) {
    throw ConfigError("system", "drag-check needs a single-transmon system");
  }
  const std::vector<RealVector> env = read_envelopes_csv(controls_path, sys);
  std::vector<double> ux, uy;
  for (const RealVector& u : env) {
    ux.push_back(u(0));
    uy.push_back(u(1));
  }
  const DragReport rep = drag_check(ux, uy, sys.dt(), sys.delta1());
  write_json(config.output_dir / "drag_check.json", to_json(rep));
  out << "status: " << rep.status << '\n';
  if (rep.correlation) out << "correlation: " << format_double(*rep.correlation) << '\n';
  if (rep.factor) out << "factor: " << format_double(*rep.factor) << '\n';
  out << "-1/delta1: " << format_double(rep.minus_inverse_delta1)
      << "  -delta1: " << format_double(rep.minus_delta1) << '\n';
  return kExitOk;
}

}  // namespace qilqr
