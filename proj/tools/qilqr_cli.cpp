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

// Command line front end: optimize, gridsearch, rollout, drag-check.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "qilqr/config.hpp"
#include "qilqr/errors.hpp"
#include "qilqr/harness.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::string controls;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->required();
  cmd->add_option("--seed", f.seed, "override the RNG seed");
  cmd->add_option("--out", f.out, "override the output directory");
}

qilqr::RunConfig load(const CommonFlags& f) {
  qilqr::RunConfig cfg = qilqr::load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.output_dir = *f.out;
  if (f.jobs) cfg.grid.jobs = *f.jobs;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iLQR gate synthesis for transmon qubits"};
  app.require_subcommand(1);

  CommonFlags opt, grid, roll, drag;
  CLI::App* c_opt = app.add_subcommand("optimize", "solve one gate problem");
  add_common(c_opt, opt);
  CLI::App* c_grid = app.add_subcommand("gridsearch", "sweep cost multipliers");
  add_common(c_grid, grid);
  c_grid->add_option("--jobs", grid.jobs, "worker threads");
  CLI::App* c_roll = app.add_subcommand("rollout", "replay a controls.csv");
  add_common(c_roll, roll);
  c_roll->add_option("--controls", roll.controls, "controls.csv to replay")->required();
  CLI::App* c_drag = app.add_subcommand("drag-check", "compare u^Y with du^X/dt");
  add_common(c_drag, drag);
  c_drag->add_option("--controls", drag.controls, "controls.csv to analyse")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qilqr::kExitValidation;
  }

  try {
    if (c_opt->parsed()) return qilqr::cmd_optimize(load(opt), std::cout);
    if (c_grid->parsed()) return qilqr::cmd_gridsearch(load(grid), std::cout);
    if (c_roll->parsed()) return qilqr::cmd_rollout(load(roll), roll.controls, std::cout);
    if (c_drag->parsed()) return qilqr::cmd_drag_check(load(drag), drag.controls, std::cout);
  } catch (const qilqr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return qilqr::kExitValidation;
  } catch (const qilqr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qilqr::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qilqr::kExitValidation;
  }
  return qilqr::kExitValidation;
}
