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

#include "qilqr/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qilqr/errors.hpp"

namespace qilqr {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, sep)) fields.push_back(f);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
  t.header = split(line, ',');
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    t.rows.push_back(split(line, ','));
  }
  return t;
}

std::vector<RealVector> read_columns(const std::filesystem::path& path,
                                     const std::vector<std::string>& columns) {
  const CsvTable t = read_csv(path);
  std::vector<size_t> idx;
  for (const std::string& name : columns) {
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) throw Error(path.string() + ": missing column '" + name + "'");
    idx.push_back(static_cast<size_t>(it - t.header.begin()));
  }
  std::vector<RealVector> out;
  out.reserve(t.rows.size());
  for (size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != t.header.size()) {
      throw Error(path.string() + ": row " + std::to_string(r + 1) + " has " +
                  std::to_string(row.size()) + " fields, expected " +
                  std::to_string(t.header.size()));
    }
    RealVector v(static_cast<Index>(idx.size()));
    for (size_t c = 0; c < idx.size(); ++c) {
      const std::string& cell = row[idx[c]];
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(x)) {
        throw Error(path.string() + ": row " + std::to_string(r + 1) + ", column '" +
                    columns[c] + "' is not a finite number");
      }
      v(static_cast<Index>(c)) = x;
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_controls_csv(const std::filesystem::path& path, const TransmonSystem& sys,
                        const UnitaryDynamics& dynamics, const Trajectory& traj) {
  std::ofstream out = open_for_write(path);
  const std::vector<std::string> names = sys.channel_names();
  const bool smoothed = dynamics.mode() == ControlMode::kSmoothed;
  out << "k,t_ns";
  for (const std::string& n : names) out << ',' << (smoothed ? "d" + n : n);
  if (smoothed) {
    for (const std::string& n : names) out << ',' << n;
  }
  out << '\n';
  for (size_t k = 0; k < traj.controls.size(); ++k) {
    out << k << ',' << format_double(static_cast<double>(k) * dynamics.dt());
    for (Index j = 0; j < traj.controls[k].size(); ++j) out << ',' << format_double(traj.controls[k](j));
    if (smoothed) {
      const RealVector u = dynamics.envelope_of(traj.states[k]);
      for (Index j = 0; j < u.size(); ++j) out << ',' << format_double(u(j));
    }
    out << '\n';
  }
}

std::vector<RealVector> read_controls_csv(const std::filesystem::path& path,
                                          const TransmonSystem& sys, ControlMode mode,
                                          Index expected_rows) {
  std::vector<std::string> columns = sys.channel_names();
  if (mode == ControlMode::kSmoothed) {
    for (std::string& c : columns) c = "d" + c;
  }
  std::vector<RealVector> controls = read_columns(path, columns);
  if (static_cast<Index>(controls.size()) != expected_rows) {
    throw DimensionMismatch(path.string() + ": expected " + std::to_string(expected_rows) +
                            " control rows, found " + std::to_string(controls.size()));
  }
  return controls;
}

std::vector<RealVector> read_envelopes_csv(const std::filesystem::path& path,
                                           const TransmonSystem& sys) {
  return read_columns(path, sys.channel_names());
}

RealMatrix population_trace(const UnitaryDynamics& dynamics, const Trajectory& traj, Index input) {
  const Index d = dynamics.dim();
  if (input < 0 || input >= d) throw DimensionMismatch("population_trace: input index out of range");
  RealMatrix p(static_cast<Index>(traj.states.size()), d);
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const ComplexMatrix u = dynamics.unitary_of(traj.states[k]);
    p.row(static_cast<Index>(k)) = u.col(input).cwiseAbs2().transpose();
  }
  return p;
}

LeakageStats leakage_stats(const TransmonSystem& sys, const RealMatrix& populations) {
  LeakageStats s;
  if (populations.rows() == 0) return s;
  for (Index k = 0; k < populations.rows(); ++k) {
    double leak = 0.0;
    for (Index j = 0; j < populations.cols(); ++j) {
      if (sys.is_leakage_state(j)) leak += populations(k, j);
    }
    s.mean += leak;
    s.max = std::max(s.max, leak);
  }
  s.mean /= static_cast<double>(populations.rows());
  return s;
}

std::vector<Index> population_input_indices(const TransmonSystem& sys,
                                            const std::vector<std::string>& labels) {
  const std::vector<std::string> all = sys.basis_labels();
  std::vector<Index> out;
  if (labels.empty()) {
    for (Index j = 0; j < sys.dim(); ++j) {
      if (!sys.is_leakage_state(j)) out.push_back(j);
    }
    return out;
  }
  for (const std::string& label : labels) {
    const auto it = std::find(all.begin(), all.end(), label);
    if (it == all.end()) throw ConfigError("population-inputs", "unknown basis state '" + label + "'");
    out.push_back(static_cast<Index>(it - all.begin()));
  }
  return out;
}

void write_populations_csv(const std::filesystem::path& path, const TransmonSystem& sys,
                           const UnitaryDynamics& dynamics, const Trajectory& traj,
                           const std::vector<Index>& inputs) {
  std::ofstream out = open_for_write(path);
  const std::vector<std::string> labels = sys.basis_labels();
  out << "input,k,t_ns";
  for (const std::string& l : labels) out << ",p_" << l;
  out << '\n';
  for (Index input : inputs) {
    const RealMatrix p = population_trace(dynamics, traj, input);
    for (Index k = 0; k < p.rows(); ++k) {
      out << labels[static_cast<size_t>(input)] << ',' << k << ','
          << format_double(static_cast<double>(k) * dynamics.dt());
      for (Index j = 0; j < p.cols(); ++j) out << ',' << format_double(p(k, j));
      out << '\n';
    }
  }
}

void write_convergence_jsonl(const std::filesystem::path& path,
                             const std::vector<IterationRecord>& log) {
  std::ofstream out = open_for_write(path);
  for (const IterationRecord& r : log) {
    const nlohmann::json rec = {{"iter", r.iteration}, {"J", r.cost},
                                {"grad_norm", r.gradient_norm}, {"mu", r.mu},
                                {"alpha", r.alpha}, {"accepted", r.accepted},
                                {"wall_ms", r.wall_ms}};
    out << rec.dump() << '\n';
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out = open_for_write(path);
  out << doc.dump(2) << '\n';
}

RealVector pulse_area(const UnitaryDynamics& dynamics, const Trajectory& traj) {
  RealVector area = RealVector::Zero(dynamics.num_controls());
  for (size_t k = 0; k < traj.controls.size(); ++k) {
    area += dynamics.applied_envelope(traj.states[k], traj.controls[k]) * dynamics.dt();
  }
  return area;
}

double smoothness(const UnitaryDynamics& dynamics, const Trajectory& traj) {
  double s = 0.0;
  if (dynamics.mode() == ControlMode::kSmoothed) {
    for (const RealVector& v : traj.controls) s += v.squaredNorm();
    return s;
  }
  for (size_t k = 1; k < traj.controls.size(); ++k) {
    s += ((traj.controls[k] - traj.controls[k - 1]) / dynamics.dt()).squaredNorm();
  }
  return s;
}

}  // namespace qilqr
