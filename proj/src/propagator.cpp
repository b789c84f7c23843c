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

#include "qilqr/propagator.hpp"

#include <cmath>
#include <string>

#include "qilqr/errors.hpp"

namespace qilqr {

namespace {

using Coeffs = PadeCoefficients;

struct PadeParts {
  RealMatrix a1, a2, a3;  // A, A^2, A^3 (kept for the derivative)
  Eigen::PartialPivLU<RealMatrix> denominator;
  RealMatrix value;
};

PadeParts pade_parts(const RealMatrix& a) {
  const Index n = a.rows();
  PadeParts p;
  p.a1 = a;
  p.a2 = a * a;
  p.a3 = p.a2 * a;
  const RealMatrix a4 = p.a2 * p.a2;
  const RealMatrix even = RealMatrix::Identity(n, n) + Coeffs::numerator[2] * p.a2 +
                          Coeffs::numerator[4] * a4;
  const RealMatrix odd = Coeffs::numerator[1] * a + Coeffs::numerator[3] * p.a3;
  const RealMatrix f = even + odd;
  const RealMatrix b = even - odd;
  if (!b.allFinite()) throw SingularDenominator("pade_expm: non-finite generator");
  p.denominator.compute(b);
  const double rcond = p.denominator.rcond();
  if (!(rcond > 1e-14)) {
    throw SingularDenominator("pade_expm: denominator is numerically singular (rcond " +
                              std::to_string(rcond) + ")");
  }
  p.value = p.denominator.solve(f);
  return p;
}

// Directional derivative of B^{-1} F along E, given the factorized parts.
RealMatrix pade_derivative(const PadeParts& p, const RealMatrix& e) {
  const RealMatrix d1 = e;
  const RealMatrix d2 = e * p.a1 + p.a1 * e;
  const RealMatrix d3 = d2 * p.a1 + p.a2 * e;
  const RealMatrix d4 = d3 * p.a1 + p.a3 * e;
  const RealMatrix even = Coeffs::numerator[2] * d2 + Coeffs::numerator[4] * d4;
  const RealMatrix odd = Coeffs::numerator[1] * d1 + Coeffs::numerator[3] * d3;
  // dF = even + odd, dB = even - odd
  const RealMatrix rhs = (even + odd) - (even - odd) * p.value;
  return p.denominator.solve(rhs);
}

int resolve_squarings(const IsoMatrix& g, double dt, const PropagatorOptions& options) {
  switch (options.scaling) {
    case PropagatorOptions::Scaling::kNone:
      return 0;
    case PropagatorOptions::Scaling::kFixed:
      return options.squarings;
    case PropagatorOptions::Scaling::kAuto:
      return squarings_for_norm(g, dt, options.auto_threshold);
  }
  return 0;
}

PropagatorWithDerivatives propagate(const ControlGenerator& gen, const RealVector& u, double dt,
                                    int squarings, bool with_derivatives) {
  const IsoMatrix g = gen.at(u);
  const double scale = dt / std::ldexp(1.0, squarings);
  const PadeParts parts = pade_parts(g.real() * scale);

  RealMatrix p = parts.value;
  std::vector<RealMatrix> dp;
  if (with_derivatives) {
    dp.reserve(gen.controls().size());
    for (const IsoMatrix& gj : gen.controls()) {
      dp.push_back(pade_derivative(parts, gj.real() * scale));
    }
  }
  for (int s = 0; s < squarings; ++s) {
    for (RealMatrix& d : dp) d = d * p + p * d;
    p = p * p;
  }

  // Products of embedded matrices keep the block structure up to rounding.
  PropagatorWithDerivatives out{IsoMatrix::from_real(std::move(p), 1e-9), {}};
  out.derivatives.reserve(dp.size());
  for (RealMatrix& d : dp) out.derivatives.push_back(IsoMatrix::from_real(std::move(d), 1e-9));
  return out;
}

PropagatorWithDerivatives propagate_with_fallback(const ControlGenerator& gen,
                                                  const RealVector& u, double dt,
                                                  const PropagatorOptions& options,
                                                  bool with_derivatives) {
  if (gen.num_controls() != u.size()) {
    throw DimensionMismatch("step_propagator: expected " + std::to_string(gen.num_controls()) +
                            " controls, got " + std::to_string(u.size()));
  }
  if (!(dt > 0.0)) throw Error("step_propagator: dt must be positive");
  const int squarings = resolve_squarings(gen.at(u), dt, options);
  try {
    return propagate(gen, u, dt, squarings, with_derivatives);
  } catch (const SingularDenominator&) {
    if (options.scaling != PropagatorOptions::Scaling::kNone) throw;
    const int fallback = std::max(1, squarings_for_norm(gen.at(u), dt, options.auto_threshold));
    return propagate(gen, u, dt, fallback, with_derivatives);
  }
}

}  // namespace

IsoMatrix pade_expm(const IsoMatrix& g, double dt, int squarings) {
  if (!(dt > 0.0)) throw Error("pade_expm: dt must be positive");
  if (squarings < 0) throw Error("pade_expm: negative squaring count");
  RealMatrix p = pade_parts(g.real() * (dt / std::ldexp(1.0, squarings))).value;
  for (int s = 0; s < squarings; ++s) p = p * p;
  return IsoMatrix::from_real(std::move(p), 1e-9);
}

int squarings_for_norm(const IsoMatrix& g, double dt, double threshold) {
  const double norm = g.real().cwiseAbs().colwise().sum().maxCoeff() * dt;
  if (!(norm > threshold) || !std::isfinite(norm)) return 0;
  return static_cast<int>(std::ceil(std::log2(norm / threshold)));
}

ControlGenerator::ControlGenerator(const ComplexMatrix& drift,
                                   const std::vector<ComplexMatrix>& controls) {
  const std::complex<double> minus_i{0.0, -1.0};
  drift_ = IsoMatrix::embed(minus_i * drift);
  controls_.reserve(controls.size());
  for (const ComplexMatrix& h : controls) {
    if (h.rows() != drift.rows() || h.cols() != drift.cols()) {
      throw DimensionMismatch("ControlGenerator: control Hamiltonian size differs from drift");
    }
    controls_.push_back(IsoMatrix::embed(minus_i * h));
  }
}

IsoMatrix ControlGenerator::at(const RealVector& u) const {
  if (u.size() != num_controls()) {
    throw DimensionMismatch("ControlGenerator: expected " + std::to_string(num_controls()) +
                            " controls, got " + std::to_string(u.size()));
  }
  RealMatrix g = drift_.real();
  for (Index j = 0; j < u.size(); ++j) g += u(j) * controls_[static_cast<size_t>(j)].real();
  return IsoMatrix::from_real(std::move(g));
}

IsoMatrix step_propagator_only(const ControlGenerator& gen, const RealVector& u, double dt,
                               const PropagatorOptions& options) {
  return propagate_with_fallback(gen, u, dt, options, false).propagator;
}

PropagatorWithDerivatives step_propagator(const ControlGenerator& gen, const RealVector& u,
                                          double dt, const PropagatorOptions& options) {
  return propagate_with_fallback(gen, u, dt, options, true);
}

}  // namespace qilqr
