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

#include "qilqr/iso_linalg.hpp"

#include <cmath>
#include <string>

#include "qilqr/errors.hpp"

namespace qilqr {

IsoMatrix IsoMatrix::embed(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("embed: matrix must be square");
  }
  const Index d = a.rows();
  RealMatrix m(2 * d, 2 * d);
  m.topLeftCorner(d, d) = a.real();
  m.topRightCorner(d, d) = -a.imag();
  m.bottomLeftCorner(d, d) = a.imag();
  m.bottomRightCorner(d, d) = a.real();
  return IsoMatrix(d, std::move(m));
}

IsoMatrix IsoMatrix::from_real(RealMatrix m, double tol) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw DimensionMismatch("IsoMatrix: expected a square matrix of even size, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const Index d = m.rows() / 2;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double diag_err =
      (m.topLeftCorner(d, d) - m.bottomRightCorner(d, d)).cwiseAbs().maxCoeff();
  const double off_err =
      (m.topRightCorner(d, d) + m.bottomLeftCorner(d, d)).cwiseAbs().maxCoeff();
  // NaN compares false, so test the negation.
  if (!(std::max(diag_err, off_err) <= tol * scale)) {
    throw BlockStructureViolation("IsoMatrix: block structure violated by " +
                                  std::to_string(std::max(diag_err, off_err)));
  }
  return IsoMatrix(d, std::move(m));
}

IsoMatrix IsoMatrix::identity(Index dim) {
  return IsoMatrix(dim, RealMatrix::Identity(2 * dim, 2 * dim));
}

IsoMatrix IsoMatrix::zero(Index dim) { return IsoMatrix(dim, RealMatrix::Zero(2 * dim, 2 * dim)); }

ComplexMatrix IsoMatrix::extract() const {
  ComplexMatrix a(dim_, dim_);
  a.real() = m_.topLeftCorner(dim_, dim_);
  a.imag() = m_.bottomLeftCorner(dim_, dim_);
  return a;
}

IsoMatrix IsoMatrix::transpose() const { return IsoMatrix(dim_, m_.transpose()); }

IsoMatrix IsoMatrix::operator*(const IsoMatrix& rhs) const {
  if (dim_ != rhs.dim_) throw DimensionMismatch("IsoMatrix product: dimensions differ");
  return IsoMatrix(dim_, m_ * rhs.m_);
}

IsoMatrix IsoMatrix::operator+(const IsoMatrix& rhs) const {
  if (dim_ != rhs.dim_) throw DimensionMismatch("IsoMatrix sum: dimensions differ");
  return IsoMatrix(dim_, m_ + rhs.m_);
}

IsoMatrix IsoMatrix::operator*(double s) const { return IsoMatrix(dim_, m_ * s); }

IsoMatrix embed_matrix(const ComplexMatrix& a) { return IsoMatrix::embed(a); }

ComplexMatrix extract_matrix(const IsoMatrix& m) {
  // Re-validate: an IsoMatrix may come from arithmetic on wrapped data.
  return IsoMatrix::from_real(m.real()).extract();
}

ComplexMatrix extract_matrix(const RealMatrix& m) { return IsoMatrix::from_real(m).extract(); }

RealVector embed_vector(const ComplexVector& psi) {
  RealVector v(2 * psi.size());
  v.head(psi.size()) = psi.real();
  v.tail(psi.size()) = psi.imag();
  return v;
}

ComplexVector extract_vector(const RealVector& v) {
  if (v.size() % 2 != 0) throw DimensionMismatch("extract_vector: odd length");
  const Index d = v.size() / 2;
  ComplexVector psi(d);
  psi.real() = v.head(d);
  psi.imag() = v.tail(d);
  return psi;
}

RealVector vectorize_unitary(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw DimensionMismatch("vectorize_unitary: matrix must be square");
  const Index d = u.rows();
  RealVector x(2 * d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      x(i * d + j) = u(i, j).real();
      x(d * d + i * d + j) = u(i, j).imag();
    }
  }
  return x;
}

Index unitary_dim_from_length(Index length) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(length) / 2.0)));
  if (d <= 0 || 2 * d * d != length) {
    throw DimensionMismatch("state vector length " + std::to_string(length) +
                            " is not of the form 2d^2");
  }
  return d;
}

ComplexMatrix devectorize_unitary(const RealVector& x, Index dim) {
  if (x.size() != 2 * dim * dim) {
    throw DimensionMismatch("devectorize_unitary: expected length " +
                            std::to_string(2 * dim * dim) + ", got " + std::to_string(x.size()));
  }
  ComplexMatrix u(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) {
      u(i, j) = {x(i * dim + j), x(dim * dim + i * dim + j)};
    }
  }
  return u;
}

namespace {

// Regroups the rows of a 2d^2 x c block so that the embedded columns of each
// encoded matrix become columns of a 2d x (d*c) matrix:
//   gathered(part*d + l, j + d*col) = cols(part*d^2 + l*d + j, col).
RealMatrix gather_columns(const RealMatrix& cols, Index d) {
  const Index c = cols.cols();
  RealMatrix g(2 * d, d * c);
  for (Index col = 0; col < c; ++col) {
    for (Index j = 0; j < d; ++j) {
      auto dst = g.col(j + d * col);
      for (Index part = 0; part < 2; ++part) {
        for (Index l = 0; l < d; ++l) {
          dst(part * d + l) = cols(part * d * d + l * d + j, col);
        }
      }
    }
  }
  return g;
}

RealMatrix scatter_columns(const RealMatrix& g, Index d, Index c) {
  RealMatrix cols(2 * d * d, c);
  for (Index col = 0; col < c; ++col) {
    for (Index j = 0; j < d; ++j) {
      const auto src = g.col(j + d * col);
      for (Index part = 0; part < 2; ++part) {
        for (Index i = 0; i < d; ++i) {
          cols(part * d * d + i * d + j, col) = src(part * d + i);
        }
      }
    }
  }
  return cols;
}

}  // namespace

RealMatrix left_multiply_columns(const IsoMatrix& q, const RealMatrix& cols) {
  const Index d = q.dim();
  if (cols.rows() != 2 * d * d) {
    throw DimensionMismatch("left_multiply_columns: expected " + std::to_string(2 * d * d) +
                            " rows, got " + std::to_string(cols.rows()));
  }
  const RealMatrix g = gather_columns(cols, d);
  const RealMatrix y = q.real() * g;
  return scatter_columns(y, d, cols.cols());
}

RealVector apply_propagator_to_state(const IsoMatrix& p, const RealVector& x) {
  const RealMatrix y = left_multiply_columns(p, x);
  return y.col(0);
}

RealMatrix left_multiplication_matrix(const IsoMatrix& q) {
  const Index d = q.dim();
  const Index n = 2 * d * d;
  RealMatrix l = RealMatrix::Zero(n, n);
  const RealMatrix& qr = q.real();
  for (Index pi = 0; pi < 2; ++pi) {
    for (Index i = 0; i < d; ++i) {
      for (Index pl = 0; pl < 2; ++pl) {
        for (Index k = 0; k < d; ++k) {
          const double v = qr(pi * d + i, pl * d + k);
          for (Index j = 0; j < d; ++j) {
            l(pi * d * d + i * d + j, pl * d * d + k * d + j) = v;
          }
        }
      }
    }
  }
  return l;
}

}  // namespace qilqr
