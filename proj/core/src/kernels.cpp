// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sgp {

MaternKernel::MaternKernel(double nu, double ell, double s2)
    : nu_(nu), ell_(ell), s2_(s2) {
  if (!(ell > 0.0) || !(s2 > 0.0))
    throw std::invalid_argument("MaternKernel: need ell > 0 and s2 > 0");
  const double n_real = nu - 0.5;
  n_ = static_cast<int>(std::lround(n_real));
  if (n_ < 0 || n_ > 12 || std::abs(n_real - n_) > 1e-12)
    throw std::invalid_argument(
        "MaternKernel: nu must be half-integer n + 1/2 with 0 <= n <= 12");

  // P_n(u) = n!/(2n)! sum_i (n+i)!/(i!(n-i)!) (sqrt(8 nu) u)^{n-i}
  // as coefficients of u^j with exact integer combinatorics.
  const double root8nu = std::sqrt(8.0 * nu);
  std::int64_t pref_den = 1;  // (2n)! / n! = (n+1)...(2n)
  for (int k = n_ + 1; k <= 2 * n_; ++k) pref_den *= k;
  poly_.assign(n_ + 1, 0.0);
  for (int i = 0; i <= n_; ++i) {
    std::int64_t num = 1;  // (n+i)! / i!
    for (int k = i + 1; k <= n_ + i; ++k) num *= k;
    std::int64_t den = 1;  // (n-i)!
    for (int k = 2; k <= n_ - i; ++k) den *= k;
    const std::int64_t c = num / den;  // exact integer
    const int j = n_ - i;              // power of u
    poly_[j] = static_cast<double>(c) / static_cast<double>(pref_den) *
               std::pow(root8nu, j);
  }

  // s P_n(u) - P_n'(u), the polynomial factor of the length-scale derivative.
  const double s = std::sqrt(2.0 * nu);
  dpoly_.assign(n_ + 1, 0.0);
  for (int j = 0; j <= n_; ++j) {
    dpoly_[j] = s * poly_[j];
    if (j + 1 <= n_) dpoly_[j] -= (j + 1) * poly_[j + 1];
  }
}

double MaternKernel::unit(double r) const {
  const double u = r / ell_;
  double p = 0.0;
  for (int j = n_; j >= 0; --j) p = p * u + poly_[j];
  return std::exp(-std::sqrt(2.0 * nu_) * u) * p;
}

double MaternKernel::dlength(double r) const {
  const double u = r / ell_;
  double p = 0.0;
  for (int j = n_; j >= 0; --j) p = p * u + dpoly_[j];
  return s2_ * (r / (ell_ * ell_)) * std::exp(-std::sqrt(2.0 * nu_) * u) * p;
}

Eigen::MatrixXd kernel_matrix(const MaternKernel& k, const PointCloud& A,
                              const PointCloud& B) {
  if (A.dim() != B.dim())
    throw std::invalid_argument("kernel_matrix: dimension mismatch");
  Eigen::MatrixXd K(A.size(), B.size());
  for (Eigen::Index j = 0; j < B.size(); ++j)
    for (Eigen::Index i = 0; i < A.size(); ++i)
      K(i, j) = k((A.point(i) - B.point(j)).norm());
  return K;
}

Eigen::MatrixXd distance_weighted_matrix(const MaternKernel& k,
                                         const PointCloud& A) {
  Eigen::MatrixXd K(A.size(), A.size());
  for (Eigen::Index j = 0; j < A.size(); ++j) {
    K(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < A.size(); ++i) {
      const double r = (A.point(i) - A.point(j)).norm();
      K(i, j) = K(j, i) = r * k.unit(r);
    }
  }
  return K;
}

void Hyperparameters::clamp() {
  ell = std::clamp(ell, ell_bounds.lower, ell_bounds.upper);
  s2 = std::clamp(s2, s2_bounds.lower, s2_bounds.upper);
  sigma2 = std::clamp(sigma2, sigma2_bounds.lower, sigma2_bounds.upper);
}

}  // namespace sgp
