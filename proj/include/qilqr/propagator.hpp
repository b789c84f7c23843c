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

#include <array>
#include <vector>

#include "qilqr/iso_linalg.hpp"

namespace qilqr {

/// Degree-4 diagonal Pade coefficients for exp(A):
///   F(A) = sum_k c_k A^k,  B(A) = sum_k (-1)^k c_k A^k,  exp(A) ~ B^{-1} F.
struct PadeCoefficients {
  static constexpr std::array<double, 5> numerator{1.0, 1.0 / 2.0, 3.0 / 28.0, 1.0 / 84.0,
                                                   1.0 / 1680.0};
  static constexpr std::array<double, 5> denominator{1.0, -1.0 / 2.0, 3.0 / 28.0, -1.0 / 84.0,
                                                     1.0 / 1680.0};
};

/// B(G, dt)^{-1} F(G, dt). With `squarings` = s > 0 the approximant is taken at
/// dt / 2^s and squared s times. Throws SingularDenominator.
IsoMatrix pade_expm(const IsoMatrix& g, double dt, int squarings = 0);

/// Smallest s with ||G dt||_1 / 2^s <= threshold.
int squarings_for_norm(const IsoMatrix& g, double dt, double threshold);

struct PropagatorOptions {
  enum class Scaling {
    kNone,   // plain approximant; squaring only as a fallback on SingularDenominator
    kAuto,   // pick s from the 1-norm of G dt
    kFixed,  // always use `squarings`
  };
  Scaling scaling = Scaling::kAuto;
  int squarings = 0;
  /// Norm bound on G dt / 2^s for kAuto. At 0.5 the degree-4 approximant is
  /// accurate to ~1e-10 on skew-symmetric generators.
  double auto_threshold = 0.5;
};

/// Control-affine generator in the embedded representation:
///   G(u) = embed(-i H0) + sum_j u_j embed(-i H_j).
class ControlGenerator {
 public:
  ControlGenerator(const ComplexMatrix& drift, const std::vector<ComplexMatrix>& controls);

  Index dim() const noexcept { return drift_.dim(); }
  Index num_controls() const noexcept { return static_cast<Index>(controls_.size()); }

  const IsoMatrix& drift() const noexcept { return drift_; }
  const std::vector<IsoMatrix>& controls() const noexcept { return controls_; }

  IsoMatrix at(const RealVector& u) const;

 private:
  IsoMatrix drift_;
  std::vector<IsoMatrix> controls_;
};

struct PropagatorWithDerivatives {
  IsoMatrix propagator;
  /// d propagator / d u_j, one per control channel.
  std::vector<IsoMatrix> derivatives;
};

/// Step propagator for piecewise-constant control `u` held for `dt`, without
/// derivatives.
IsoMatrix step_propagator_only(const ControlGenerator& gen, const RealVector& u, double dt,
                               const PropagatorOptions& options = {});

/// Step propagator and its exact derivatives with respect to every control
/// amplitude. The derivatives are those of the rational approximant itself
/// (including any squarings), not of the true exponential.
PropagatorWithDerivatives step_propagator(const ControlGenerator& gen, const RealVector& u,
                                          double dt, const PropagatorOptions& options = {});

}  // namespace qilqr
