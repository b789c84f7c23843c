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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qilqr/artifacts.hpp"
#include "qilqr/config.hpp"
#include "qilqr/errors.hpp"
#include "qilqr/harness.hpp"

namespace qilqr {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qilqr_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::string field_of(const json& doc) {
  try {
    parse_config(doc).validate();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

RunConfig bang_bang_config(const fs::path& out) {
  return parse_config({{"system", "1q2l"},
                       {"mode", "direct"},
                       {"n", 80},
                       {"costs", {{"q-f", 1000.0}, {"r-c", 1e-4}, {"r-d", 1.0}, {"r-f", 0.0}}},
                       {"output-dir", out.string()}});
}

RunConfig smooth_config(const fs::path& out) {
  return parse_config({{"system", "1q2l"},
                       {"mode", "smoothed"},
                       {"n", 80},
                       {"costs", {{"q-f", 1000.0}, {"r-d", 1e-3}, {"r-c", 1e-3}, {"r-f", 10.0}}},
                       {"output-dir", out.string()}});
}

TEST(Config, Defaults) {
  const RunConfig c = parse_config(json::object());
  EXPECT_EQ(c.system, SystemKind::k1q2l);
  EXPECT_EQ(c.mode, ControlMode::kSmoothed);
  EXPECT_EQ(c.n, 80);
  EXPECT_EQ(c.dt(), 0.5);
  EXPECT_EQ(c.init_amplitude, 0.01);
  EXPECT_EQ(c.costs.q_f, std::vector<double>{100.0});
  EXPECT_EQ(parse_config({{"system", "2q3l"}}).goal, GateName::CR9);
  EXPECT_EQ(c.solver.mu_init, 1e-6);
  EXPECT_EQ(c.solver.max_iterations, 2000);
}

TEST(Config, ValidationNamesField) {
  EXPECT_EQ(field_of({{"n", 1}}), "n");
  EXPECT_EQ(field_of({{"dt", 0.0}}), "dt");
  EXPECT_EQ(field_of({{"init-amplitude", -1.0}}), "init-amplitude");
  EXPECT_EQ(field_of({{"system", "1q2l"}, {"goal", "CR9"}}), "goal");
  EXPECT_EQ(field_of({{"costs", {{"r-d", 0.0}}}}), "costs.r-d");
  EXPECT_EQ(field_of({{"costs", {{"q-f", {1.0, 2.0, 3.0}}}}}), "costs.q-f");
  EXPECT_EQ(field_of({{"grid", {{"r-c", {-1.0}}}}}), "grid.r-c");
  EXPECT_EQ(field_of({{"population-inputs", {"7"}}}), "population-inputs");
  EXPECT_EQ(field_of({{"n", 2}}), "");
}

TEST(Config, UnknownKeysAreErrors) {
  EXPECT_THROW(parse_config({{"q_f", 1.0}}), ConfigError);
  EXPECT_THROW(parse_config({{"solver", {{"mu", 1.0}}}}), ConfigError);
  EXPECT_THROW(parse_config({{"mode", "fast"}}), ConfigError);
  EXPECT_THROW(parse_config({{"n", "eighty"}}), ConfigError);
}

TEST(Config, RoundTripThroughJson) {
  const RunConfig a = parse_config({{"system", "2q2l"},
                                    {"n", 12},
                                    {"seed", 9},
                                    {"costs", {{"q-f", 3.0}, {"r-c", {1.0, 2.0, 3.0, 4.0}}}},
                                    {"grid", {{"preset", "fine"}, {"fixed", {"r-c"}}, {"jobs", 3}}},
                                    {"parameters", {{"use-r2-on-second-drive", true}}}});
  const RunConfig b = parse_config(to_json(a));
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(b.costs.r_c, (std::vector<double>{1.0, 2.0, 3.0, 4.0}));
  EXPECT_TRUE(b.parameters.use_r2_on_second_drive);
  EXPECT_EQ(b.grid.num_cells(), 729u);
}

TEST(Config, GridCells) {
  GridSpec g;
  EXPECT_EQ(g.num_cells(), 625u);
  EXPECT_EQ(g.cell(0), (std::array<double, 4>{0.1, 0.1, 0.1, 0.1}));
  EXPECT_EQ(g.cell(1), (std::array<double, 4>{0.1, 0.1, 0.1, 0.5}));
  EXPECT_EQ(g.cell(125), (std::array<double, 4>{0.5, 0.1, 0.1, 0.1}));
  EXPECT_EQ(g.cell(312), (std::array<double, 4>{1.0, 1.0, 1.0, 1.0}));
  EXPECT_EQ(g.cell(624), (std::array<double, 4>{10.0, 10.0, 10.0, 10.0}));
}

TEST(Config, MaterializedCosts) {
  const RunConfig c = parse_config({{"system", "1q3l"}, {"costs", {{"r-d", {1.0, 2.0}}}}});
  const CostMatrices m = c.costs.materialize(18, 2, {2.0, 3.0, 1.0, 1.0});
  EXPECT_EQ(m.q_f, RealVector::Constant(18, 200.0));
  EXPECT_EQ(m.r_d(1), 6.0);
}

TEST(Harness, BangBangOptimizeAndReplay) {
  const fs::path dir = scratch("bangbang");
  RunConfig cfg = bang_bang_config(dir / "opt");
  std::ostringstream log;
  EXPECT_EQ(cmd_optimize(cfg, log), kExitOk);
  const json s = read_json(dir / "opt" / "summary.json");
  const double area = -std::numbers::pi / cfg.system_model().r1();
  EXPECT_NEAR(s["pulse_area_ns"]["ux"].get<double>(), area, 1e-4);
  EXPECT_LE(s["trace_infidelity"].get<double>(), 1e-8);
  for (const char* key : {"frobenius_cost", "termination", "iterations", "config", "leakage"})
    EXPECT_TRUE(s.contains(key)) << key;
  EXPECT_TRUE(fs::exists(dir / "opt" / "convergence.jsonl"));
  EXPECT_TRUE(fs::exists(dir / "opt" / "populations.csv"));

  RunConfig replay = cfg;
  replay.output_dir = dir / "replay";
  EXPECT_EQ(cmd_rollout(replay, dir / "opt" / "controls.csv", log), kExitOk);
  const json r = read_json(dir / "replay" / "summary.json");
  EXPECT_NEAR(r["trace_infidelity"].get<double>(), s["trace_infidelity"].get<double>(), 1e-12);
  EXPECT_NEAR(r["frobenius_cost"].get<double>(), s["frobenius_cost"].get<double>(), 1e-12);
}

TEST(Harness, HandWrittenBangBang) {
  const fs::path dir = scratch("handwritten");
  RunConfig cfg = bang_bang_config(dir);
  const double u = -std::numbers::pi / (cfg.system_model().r1() * cfg.n * cfg.dt());
  {
    std::ofstream out(dir / "controls.csv");
    out << "k,t_ns,ux,uy\n";
    for (int k = 0; k < cfg.n; ++k) out << k << ',' << k * cfg.dt() << ',' << format_double(u) << ",0\n";
  }
  std::ostringstream log;
  EXPECT_EQ(cmd_rollout(cfg, dir / "controls.csv", log), kExitOk);
  EXPECT_LE(read_json(dir / "summary.json")["trace_infidelity"].get<double>(), 1e-10);

  // truncated
  {
    std::ofstream out(dir / "short.csv");
    out << "k,t_ns,ux,uy\n0,0,0.1,0\n";
  }
  EXPECT_THROW(cmd_rollout(cfg, dir / "short.csv", log), DimensionMismatch);
  // non-finite
  {
    std::ofstream out(dir / "nan.csv");
    out << "k,t_ns,ux,uy\n";
    for (int k = 0; k < cfg.n; ++k) out << k << ',' << k * cfg.dt() << ",nan,0\n";
  }
  EXPECT_THROW(cmd_rollout(cfg, dir / "nan.csv", log), Error);
}

TEST(Harness, SmoothedPopulationsReachOne) {
  const fs::path dir = scratch("smooth");
  const RunConfig cfg = smooth_config(dir);
  std::ostringstream log;
  ASSERT_EQ(cmd_optimize(cfg, log), kExitOk);
  std::ifstream in(dir / "populations.csv");
  std::string header, line, last0;
  std::getline(in, header);
  EXPECT_EQ(header, "input,k,t_ns,p_0,p_1");
  while (std::getline(in, line))
    if (line.rfind("0,", 0) == 0) last0 = line;
  std::stringstream ss(last0);
  std::vector<std::string> cells;
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 5u);
  EXPECT_EQ(std::stoi(cells[1]), cfg.n);
  EXPECT_GE(std::stod(cells[4]), 1.0 - 1e-6);

  const json s = read_json(dir / "summary.json");
  EXPECT_EQ(s["initial_envelope"][0].get<double>(), 0.0);
  EXPECT_EQ(s["initial_envelope"][1].get<double>(), 0.0);
}

std::string without_wall_time(const fs::path& p) {
  std::stringstream in(slurp(p)), out;
  for (std::string line; std::getline(in, line);) {
    json j = json::parse(line);
    j.erase("wall_ms");
    out << j.dump() << '\n';
  }
  return out.str();
}

TEST(Harness, ArtifactsDeterministic) {
  const fs::path dir = scratch("determinism");
  std::ostringstream log;
  for (const char* run : {"a", "b"}) ASSERT_EQ(cmd_optimize(smooth_config(dir / run), log), kExitOk);
  EXPECT_EQ(slurp(dir / "a" / "controls.csv"), slurp(dir / "b" / "controls.csv"));
  EXPECT_EQ(slurp(dir / "a" / "populations.csv"), slurp(dir / "b" / "populations.csv"));
  EXPECT_EQ(without_wall_time(dir / "a" / "convergence.jsonl"),
            without_wall_time(dir / "b" / "convergence.jsonl"));
  json sa = read_json(dir / "a" / "summary.json"), sb = read_json(dir / "b" / "summary.json");
  for (json* s : {&sa, &sb}) {
    s->erase("wall_ms");
    s->erase("config");
  }
  EXPECT_EQ(sa, sb);
}

TEST(Harness, SingleCellGridMatchesOptimize) {
  const fs::path dir = scratch("onecell");
  RunConfig cfg = smooth_config(dir / "opt");
  cfg.seed = 5;
  cfg.grid.multipliers = {{{1.0}, {1.0}, {1.0}, {1.0}}};
  std::ostringstream log;
  ASSERT_EQ(cmd_optimize(cfg, log), kExitOk);
  cfg.output_dir = dir / "grid";
  ASSERT_EQ(cmd_gridsearch(cfg, log), kExitOk);
  EXPECT_EQ(slurp(dir / "opt" / "controls.csv"), slurp(dir / "grid" / "top" / "rank1_cell0" / "controls.csv"));
  const json a = read_json(dir / "opt" / "summary.json");
  const json b = read_json(dir / "grid" / "top" / "rank1_cell0" / "summary.json");
  EXPECT_EQ(a["trace_infidelity"], b["trace_infidelity"]);
  EXPECT_TRUE(fs::exists(dir / "grid" / "grid_results.csv"));
}

TEST(Harness, GridIndependentOfJobs) {
  RunConfig cfg = smooth_config(scratch("jobs"));
  cfg.n = 30;
  cfg.solver.max_iterations = 40;
  cfg.grid.multipliers = {{{0.5, 1.0}, {1.0}, {1.0, 5.0}, {1.0}}};
  cfg.grid.jobs = 1;
  const auto serial = run_grid(cfg);
  cfg.grid.jobs = 3;
  const auto parallel = run_grid(cfg);
  ASSERT_EQ(serial.size(), 4u);
  ASSERT_EQ(parallel.size(), 4u);
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(serial[i].cell, parallel[i].cell);
    EXPECT_EQ(serial[i].seed, parallel[i].seed);
    EXPECT_EQ(serial[i].trace_infidelity, parallel[i].trace_infidelity);
    if (i > 0 && serial[i].ok && serial[i - 1].ok) {
      EXPECT_LE(serial[i - 1].trace_infidelity, serial[i].trace_infidelity);
    }
  }
}

TEST(Harness, GridRecordsFailures) {
  RunConfig cfg = smooth_config(scratch("failures"));
  cfg.n = 10;
  cfg.solver.max_iterations = 5;
  // A huge fixed squaring count on the final cell would be fine; instead
  // break the propagator with a non-finite drift parameter.
  cfg.parameters.delta1_ghz = std::numeric_limits<double>::quiet_NaN();
  cfg.system = SystemKind::k1q3l;
  cfg.goal = GateName::X3;
  cfg.grid.multipliers = {{{1.0, 2.0}, {1.0}, {1.0}, {1.0}}};
  const auto res = run_grid(cfg);
  ASSERT_EQ(res.size(), 2u);
  for (const auto& r : res) {
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.error.empty());
  }
  const fs::path csv = scratch("failures_csv") / "grid.csv";
  write_grid_results_csv(csv, res);
  EXPECT_NE(slurp(csv).find("failed"), std::string::npos);
}

TEST(Harness, RandomInitWithinBound) {
  RunConfig cfg = smooth_config("unused");
  cfg.init_amplitude = 0.01;
  const auto a = random_initial_controls(cfg, 3), b = random_initial_controls(cfg, 3);
  ASSERT_EQ(a.size(), 80u);
  for (size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k], b[k]);
    EXPECT_LE(a[k].cwiseAbs().maxCoeff(), 0.01);
  }
  EXPECT_NE(random_initial_controls(cfg, 4)[0], a[0]);
}

TEST(Drag, ConstantEnvelopeUndefined) {
  const std::vector<double> ux(50, 0.3), uy(50, 0.1);
  const DragReport r = drag_check(ux, uy, 0.5, -1.96);
  EXPECT_FALSE(r.correlation.has_value());
  EXPECT_NE(r.status.find("undefined"), std::string::npos);
}

TEST(Drag, SyntheticDerivativeRelation) {
  const int n = 81;
  const double dt = 0.5, c = -0.51;
  std::vector<double> ux(n), uy(n);
  for (int k = 0; k < n; ++k) ux[size_t(k)] = std::pow(std::sin(std::numbers::pi * k / (n - 1)), 2);
  for (int k = 1; k + 1 < n; ++k) uy[size_t(k)] = c * (ux[size_t(k + 1)] - ux[size_t(k - 1)]) / (2 * dt);
  const DragReport r = drag_check(ux, uy, dt, -1.96);
  ASSERT_TRUE(r.correlation.has_value());
  EXPECT_NEAR(std::abs(*r.correlation), 1.0, 1e-12);
  EXPECT_NEAR(*r.factor, c, 1e-12);
  EXPECT_NEAR(r.minus_inverse_delta1, 1.0 / 1.96, 1e-15);
  EXPECT_EQ(r.interior_begin, 9u);
  EXPECT_EQ(r.interior_end, 72u);
}

}  // namespace
}  // namespace qilqr
