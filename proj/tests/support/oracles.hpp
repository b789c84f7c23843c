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

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code paths.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>
#include <functional>
#include <random>

namespace qilqr::oracle {

using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// exp(-i H t) for Hermitian H via a self-adjoint eigendecomposition.
inline CMat expm_hermitian(const CMat& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -t)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// [[Re, -Im], [Im, Re]], written out element by element.
inline RMat iso(const CMat& a) {
  const auto d = a.rows();
  RMat m(2 * d, 2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      m(i, j) = a(i, j).real();
      m(i, j + d) = -a(i, j).imag();
      m(i + d, j) = a(i, j).imag();
      m(i + d, j + d) = a(i, j).real();
    }
  }
  return m;
}

inline RVec vec(const CMat& u) {
  const auto d = u.rows();
  RVec x(2 * d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      x(i * d + j) = u(i, j).real();
      x(d * d + i * d + j) = u(i, j).imag();
    }
  }
  return x;
}

inline CMat random_complex(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMat a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = {n(rng), n(rng)};
  return a;
}

inline CMat random_unitary(Eigen::Index d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMat> qr(random_complex(d, rng));
  return qr.householderQ() * CMat::Identity(d, d);
}

inline RVec random_vector(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  RVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

// Central-difference Jacobian of f at x.
inline RMat fd_jacobian(const std::function<RVec(const RVec&)>& f, const RVec& x, double h = 1e-6) {
  const RVec f0 = f(x);
  RMat jac(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    RVec xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    jac.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

inline RVec fd_gradient(const std::function<double(const RVec&)>& f, const RVec& x, double h = 1e-6) {
  RVec g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    RVec xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    g(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Max over entries of |a - b| / max(1, |b|).
inline double max_rel_error(const RMat& a, const RMat& b) {
  return ((a - b).array().abs() / b.array().abs().max(1.0)).maxCoeff();
}

// Finite-horizon discrete Riccati recursion for x+ = a x + b u,
// cost sum_k (q x_k^2 + r u_k^2) + qf x_N^2. Returns gains u_k = -k_k x_k.
struct ScalarLq {
  double a, b, q, r, qf;
  std::vector<double> gains(int n) const {
    std::vector<double> k(static_cast<size_t>(n));
    double p = qf;
    for (int i = n - 1; i >= 0; --i) {
      k[static_cast<size_t>(i)] = a * b * p / (r + b * b * p);
      p = q + a * a * p - a * b * p * k[static_cast<size_t>(i)];
    }
    return k;
  }
  double optimal_cost(int n, double x0) const {
    double p = qf;
    for (int i = n - 1; i >= 0; --i) {
      const double k = a * b * p / (r + b * b * p);
      p = q + a * a * p - a * b * p * k;
    }
    return p * x0 * x0;
  }
};

}  // namespace qilqr::oracle
