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

#include "qilqr/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "qilqr/errors.hpp"

namespace qilqr {

using nlohmann::json;

namespace {

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Reads keys from one JSON object and rejects whatever it did not consume.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return obj_.at(key);
  }

  std::string path(const std::string& key) const { return join_path(path_, key); }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    try {
      out = v.get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path(key), "has the wrong type (" + std::string(v.type_name()) + ")");
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(out)) throw ConfigError(path(key), "must be finite");
    }
  }

  /// A number or a list of numbers.
  void read_numbers(const std::string& key, std::vector<double>& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (v.is_number()) {
      out = {v.get<double>()};
    } else if (v.is_array() && !v.empty() &&
               std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
      out = v.get<std::vector<double>>();
    } else {
      throw ConfigError(path(key), "expected a number or a non-empty list of numbers");
    }
    for (double x : out) {
      if (!std::isfinite(x)) throw ConfigError(path(key), "must be finite");
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.contains(it.key())) throw ConfigError(path(it.key()), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

GateName default_goal(SystemKind kind) {
  switch (kind) {
    case SystemKind::k1q2l: return GateName::X2;
    case SystemKind::k1q3l: return GateName::X3;
    case SystemKind::k2q2l: return GateName::CR4;
    case SystemKind::k2q3l: return GateName::CR9;
  }
  return GateName::X2;
}

void parse_parameters(ObjectReader r, TransmonParameters& p) {
  r.read("omega1-ghz", p.omega1_ghz);
  r.read("omega2-ghz", p.omega2_ghz);
  r.read("delta1-ghz", p.delta1_ghz);
  r.read("delta2-ghz", p.delta2_ghz);
  r.read("j12-ghz", p.j12_ghz);
  r.read("r1-ghz", p.r1_ghz);
  r.read("r2-ghz", p.r2_ghz);
  r.read("use-r2-on-second-drive", p.use_r2_on_second_drive);
  r.finish();
}

void parse_solver(ObjectReader r, SolverSettings& s) {
  r.read("max-iterations", s.max_iterations);
  r.read("cost-tolerance", s.cost_tolerance);
  r.read("gradient-tolerance", s.gradient_tolerance);
  r.read("mu-init", s.mu_init);
  r.read("mu-min", s.mu_min);
  r.read("mu-max", s.mu_max);
  r.read("mu-scale", s.mu_scale);
  r.read("line-search-steps", s.line_search_steps);
  r.read("goldstein-gamma", s.goldstein_gamma);
  r.finish();
}

void parse_propagator(ObjectReader r, PropagatorOptions& p) {
  if (r.has("scaling")) {
    std::string scaling;
    r.read("scaling", scaling);
    if (scaling == "none") {
      p.scaling = PropagatorOptions::Scaling::kNone;
    } else if (scaling == "auto") {
      p.scaling = PropagatorOptions::Scaling::kAuto;
    } else if (scaling == "fixed") {
      p.scaling = PropagatorOptions::Scaling::kFixed;
    } else {
      throw ConfigError(r.path("scaling"), "expected none, auto or fixed");
    }
  }
  r.read("squarings", p.squarings);
  r.read("auto-threshold", p.auto_threshold);
  r.finish();
}

std::string to_string(PropagatorOptions::Scaling s) {
  switch (s) {
    case PropagatorOptions::Scaling::kNone: return "none";
    case PropagatorOptions::Scaling::kAuto: return "auto";
    case PropagatorOptions::Scaling::kFixed: return "fixed";
  }
  return "?";
}

void parse_grid(ObjectReader r, GridSpec& g) {
  if (r.has("preset")) {
    std::string preset;
    r.read("preset", preset);
    std::vector<double> list;
    if (preset == "coarse") {
      list = GridSpec::coarse_multipliers();
    } else if (preset == "fine") {
      list = GridSpec::fine_multipliers();
    } else {
      throw ConfigError(r.path("preset"), "expected coarse or fine");
    }
    g.multipliers = {list, list, list, list};
  }
  for (size_t i = 0; i < kCostKeys.size(); ++i) r.read_numbers(kCostKeys[i], g.multipliers[i]);
  if (r.has("fixed")) {
    std::vector<std::string> fixed;
    r.read("fixed", fixed);
    for (const std::string& key : fixed) {
      const auto it = std::find(kCostKeys.begin(), kCostKeys.end(), key);
      if (it == kCostKeys.end()) throw ConfigError(r.path("fixed"), "unknown cost matrix '" + key + "'");
      g.multipliers[static_cast<size_t>(it - kCostKeys.begin())] = {1.0};
    }
  }
  r.read("jobs", g.jobs);
  r.read("restarts", g.restarts);
  r.read("keep-top", g.keep_top);
  r.finish();
}

void check_cost_diagonal(const std::vector<double>& diag, Index expected, const std::string& field,
                         bool strictly_positive) {
  if (diag.size() != 1 && static_cast<Index>(diag.size()) != expected) {
    throw ConfigError(field, "expected 1 or " + std::to_string(expected) + " entries, got " +
                                 std::to_string(diag.size()));
  }
  for (double x : diag) {
    if (strictly_positive ? !(x > 0.0) : !(x >= 0.0)) {
      throw ConfigError(field, strictly_positive ? "entries must be positive"
                                                 : "entries must be non-negative");
    }
  }
}

RealVector to_diagonal(const std::vector<double>& values, Index size, double multiplier) {
  if (values.size() == 1) return RealVector::Constant(size, values.front() * multiplier);
  RealVector d(size);
  for (Index i = 0; i < size; ++i) d(i) = values[static_cast<size_t>(i)] * multiplier;
  return d;
}

json numbers_to_json(const std::vector<double>& v) {
  if (v.size() == 1) return v.front();
  return v;
}

}  // namespace

CostMatrices CostDiagonals::materialize(Index unitary_state_dim, Index num_controls,
                                        const std::array<double, 4>& multipliers) const {
  return {to_diagonal(q_f, unitary_state_dim, multipliers[0]),
          to_diagonal(r_d, num_controls, multipliers[1]),
          to_diagonal(r_c, num_controls, multipliers[2]),
          to_diagonal(r_f, num_controls, multipliers[3])};
}

std::size_t GridSpec::num_cells() const {
  std::size_t n = 1;
  for (const auto& list : multipliers) n *= list.size();
  return n;
}

std::array<double, 4> GridSpec::cell(std::size_t index) const {
  std::array<double, 4> out{};
  for (size_t i = multipliers.size(); i-- > 0;) {
    const std::size_t size = multipliers[i].size();
    out[i] = multipliers[i][index % size];
    index /= size;
  }
  return out;
}

void RunConfig::validate() const {
  if (n < 2) throw ConfigError("n", "must be at least 2, got " + std::to_string(n));
  if (!(parameters.dt_ns > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(init_amplitude >= 0.0)) throw ConfigError("init-amplitude", "must be non-negative");

  const TransmonSystem sys = system_model();
  try {
    goal_gate(goal, sys);
  } catch (const DimensionMismatch& e) {
    throw ConfigError("goal", e.what());
  }

  const Index nx = 2 * sys.dim() * sys.dim();
  const Index m = sys.num_controls();
  check_cost_diagonal(costs.q_f, nx, "costs.q-f", false);
  check_cost_diagonal(costs.r_d, m, "costs.r-d", true);
  check_cost_diagonal(costs.r_c, m, "costs.r-c", false);
  check_cost_diagonal(costs.r_f, m, "costs.r-f", false);

  try {
    solver.validate();
  } catch (const Error& e) {
    throw ConfigError("solver", e.what());
  }
  if (propagator.squarings < 0) throw ConfigError("propagator.squarings", "must be non-negative");
  if (!(propagator.auto_threshold > 0.0)) {
    throw ConfigError("propagator.auto-threshold", "must be positive");
  }

  const std::vector<std::string> labels = sys.basis_labels();
  for (const std::string& label : population_inputs) {
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
      throw ConfigError("population-inputs", "unknown basis state '" + label + "'");
    }
  }

  for (size_t i = 0; i < grid.multipliers.size(); ++i) {
    const std::string field = std::string("grid.") + kCostKeys[i];
    if (grid.multipliers[i].empty()) throw ConfigError(field, "multiplier list is empty");
    for (double x : grid.multipliers[i]) {
      if (!(x > 0.0)) throw ConfigError(field, "multipliers must be positive");
    }
  }
  if (grid.jobs < 1) throw ConfigError("grid.jobs", "must be at least 1");
  if (grid.restarts < 1) throw ConfigError("grid.restarts", "must be at least 1");
  if (grid.keep_top < 0) throw ConfigError("grid.keep-top", "must be non-negative");
}

RunConfig parse_config(const json& doc) {
  RunConfig c;
  ObjectReader r(doc, "");
  if (r.has("system")) {
    std::string name;
    r.read("system", name);
    c.system = parse_system_kind(name);
  }
  c.goal = default_goal(c.system);
  if (r.has("parameters")) parse_parameters(ObjectReader(r.raw("parameters"), "parameters"), c.parameters);
  if (r.has("mode")) {
    std::string name;
    r.read("mode", name);
    c.mode = parse_control_mode(name);
  }
  if (r.has("goal")) {
    std::string name;
    r.read("goal", name);
    c.goal = parse_gate_name(name);
  }
  r.read("n", c.n);
  r.read("dt", c.parameters.dt_ns);
  if (r.has("costs")) {
    ObjectReader costs(r.raw("costs"), "costs");
    costs.read_numbers("q-f", c.costs.q_f);
    costs.read_numbers("r-d", c.costs.r_d);
    costs.read_numbers("r-c", c.costs.r_c);
    costs.read_numbers("r-f", c.costs.r_f);
    costs.finish();
  }
  if (r.has("solver")) parse_solver(ObjectReader(r.raw("solver"), "solver"), c.solver);
  if (r.has("propagator")) {
    parse_propagator(ObjectReader(r.raw("propagator"), "propagator"), c.propagator);
  }
  r.read("seed", c.seed);
  r.read("init-amplitude", c.init_amplitude);
  r.read("population-inputs", c.population_inputs);
  if (r.has("output-dir")) {
    std::string dir;
    r.read("output-dir", dir);
    c.output_dir = dir;
  }
  if (r.has("grid")) parse_grid(ObjectReader(r.raw("grid"), "grid"), c.grid);
  r.finish();
  c.solver.seed = c.seed;
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  const TransmonParameters& p = c.parameters;
  json doc;
  doc["system"] = to_string(c.system);
  doc["parameters"] = {{"omega1-ghz", p.omega1_ghz}, {"omega2-ghz", p.omega2_ghz},
                       {"delta1-ghz", p.delta1_ghz}, {"delta2-ghz", p.delta2_ghz},
                       {"j12-ghz", p.j12_ghz},       {"r1-ghz", p.r1_ghz},
                       {"r2-ghz", p.r2_ghz},         {"use-r2-on-second-drive", p.use_r2_on_second_drive}};
  doc["mode"] = to_string(c.mode);
  doc["goal"] = to_string(c.goal);
  doc["n"] = c.n;
  doc["dt"] = p.dt_ns;
  doc["costs"] = {{"q-f", numbers_to_json(c.costs.q_f)}, {"r-d", numbers_to_json(c.costs.r_d)},
                  {"r-c", numbers_to_json(c.costs.r_c)}, {"r-f", numbers_to_json(c.costs.r_f)}};
  const SolverSettings& s = c.solver;
  doc["solver"] = {{"max-iterations", s.max_iterations}, {"cost-tolerance", s.cost_tolerance},
                   {"gradient-tolerance", s.gradient_tolerance}, {"mu-init", s.mu_init},
                   {"mu-min", s.mu_min}, {"mu-max", s.mu_max}, {"mu-scale", s.mu_scale},
                   {"line-search-steps", s.line_search_steps},
                   {"goldstein-gamma", s.goldstein_gamma}};
  doc["propagator"] = {{"scaling", to_string(c.propagator.scaling)},
                       {"squarings", c.propagator.squarings},
                       {"auto-threshold", c.propagator.auto_threshold}};
  doc["seed"] = c.seed;
  doc["init-amplitude"] = c.init_amplitude;
  doc["population-inputs"] = c.population_inputs;
  doc["output-dir"] = c.output_dir.string();
  json grid;
  for (size_t i = 0; i < kCostKeys.size(); ++i) grid[kCostKeys[i]] = c.grid.multipliers[i];
  grid["jobs"] = c.grid.jobs;
  grid["restarts"] = c.grid.restarts;
  grid["keep-top"] = c.grid.keep_top;
  doc["grid"] = grid;
  return doc;
}

}  // namespace qilqr
