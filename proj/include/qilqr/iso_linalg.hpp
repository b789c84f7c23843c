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

// Real-valued embedding of complex linear algebra.
//
// A complex d x d matrix A is represented by the real 2d x 2d matrix
//
//     [ Re A  -Im A ]
//     [ Im A   Re A ]
//
// and a unitary U is flattened into a 2d^2 state vector holding all real
// parts (row-major) followed by all imaginary parts (row-major). The optimizer
// only ever sees that real vector.

#include <Eigen/Dense>

namespace qilqr {

using Index = Eigen::Index;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Real 2d x 2d image of a complex d x d matrix.
class IsoMatrix {
 public:
  IsoMatrix() = default;

  static IsoMatrix embed(const ComplexMatrix& a);

  /// Wraps an existing real matrix. Throws BlockStructureViolation when the
  /// blocks disagree by more than `tol` (scaled by max(1, max|m_ij|)).
  static IsoMatrix from_real(RealMatrix m, double tol = 1e-12);

  static IsoMatrix identity(Index dim);
  static IsoMatrix zero(Index dim);

  Index dim() const noexcept { return dim_; }
  const RealMatrix& real() const noexcept { return m_; }

  ComplexMatrix extract() const;

  /// Transpose of the embedding, i.e. the embedding of the adjoint.
  IsoMatrix transpose() const;

  IsoMatrix operator*(const IsoMatrix& rhs) const;
  IsoMatrix operator+(const IsoMatrix& rhs) const;
  IsoMatrix operator*(double s) const;

 private:
  IsoMatrix(Index dim, RealMatrix m) : dim_(dim), m_(std::move(m)) {}

  Index dim_ = 0;
  RealMatrix m_;
};

IsoMatrix embed_matrix(const ComplexMatrix& a);

/// Inverse of embed_matrix. Throws BlockStructureViolation on corrupted input.
ComplexMatrix extract_matrix(const IsoMatrix& m);
ComplexMatrix extract_matrix(const RealMatrix& m);

/// (Re psi, Im psi).
RealVector embed_vector(const ComplexVector& psi);
ComplexVector extract_vector(const RealVector& v);

/// Flattens U into (Re U row-major, Im U row-major), length 2d^2.
RealVector vectorize_unitary(const ComplexMatrix& u);
ComplexMatrix devectorize_unitary(const RealVector& x, Index dim);

/// Dimension d of the d x d matrix encoded by a state vector of length 2d^2.
/// Throws DimensionMismatch if `length` is not of that form.
Index unitary_dim_from_length(Index length);

/// vectorize(P * devectorize(x)), computed by applying the embedded P to the
/// embedded columns of the encoded matrix.
RealVector apply_propagator_to_state(const IsoMatrix& p, const RealVector& x);

/// Applies the state-space map x -> vectorize(Q * devectorize(x)) to every
/// column of `cols` (2d^2 rows). Equivalent to left-multiplying by
/// left_multiplication_matrix(q) but costs O(d^3) per column instead of
/// O(d^4).
RealMatrix left_multiply_columns(const IsoMatrix& q, const RealMatrix& cols);

/// Dense 2d^2 x 2d^2 matrix of the map x -> vectorize(Q * devectorize(x)).
RealMatrix left_multiplication_matrix(const IsoMatrix& q);

}  // namespace qilqr
