// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_KERNELS_HPP
#define SGP_KERNELS_HPP

#include <Eigen/Dense>
#include <vector>

#include "sgp/point_cloud.hpp"

namespace sgp {

/// Matern covariance function with half-integer smoothness nu = n + 1/2,
///   s^2 k_{nu,l}(r) = s^2 exp(-sqrt(2 nu) r / l) P_n(r / l),
/// where P_n is the degree-n polynomial of the closed form. Only
/// half-integer nu is supported; other values are rejected at construction
/// (general nu would require the modified Bessel function K_nu).
class MaternKernel {
 public:
  MaternKernel(double nu, double ell, double s2);

  double nu() const { return nu_; }
  double ell() const { return ell_; }
  double s2() const { return s2_; }

  /// s^2 k_{nu,l}(r), r >= 0.
  double operator()(double r) const { return s2_ * unit(r); }
  /// k_{nu,l}(r) with unit signal variance.
  double unit(double r) const;
  /// Exact derivative d/dl [s^2 k_{nu,l}(r)];
  /// equals s^2 (r/l^2) e^{-su} (s P_n(u) - P_n'(u)) with s = sqrt(2 nu),
  /// u = r/l. Zero at r = 0 and zero diagonal as a matrix.
  double dlength(double r) const;

  MaternKernel with(double ell, double s2) const {
    return MaternKernel(nu_, ell, s2);
  }

 private:
  double nu_;
  double ell_;
  double s2_;
  int n_;
  std::vector<double> poly_;    // P_n coefficients in u = r/l
  std::vector<double> dpoly_;   // s P_n - P_n'
};

/// Dense kernel matrix [s^2 k(|a_i - b_j|)]; symmetric PSD when A = B.
Eigen::MatrixXd kernel_matrix(const MaternKernel& k, const PointCloud& A,
                              const PointCloud& B);

/// Distance-weighted matrix [ |x_i - x_j| k_{nu,l}(x_i, x_j) ] with the
/// unit-variance kernel; symmetric with zero diagonal.
Eigen::MatrixXd distance_weighted_matrix(const MaternKernel& k,
                                         const PointCloud& A);

struct ParameterBounds {
  double lower;
  double upper;
};

/// GP hyperparameters with box constraints used during training.
struct Hyperparameters {
  double ell = 1.0;
  double s2 = 1.0;
  double sigma2 = 1.0;
  ParameterBounds ell_bounds{0.005, 2.0};
  ParameterBounds s2_bounds{0.05, 20.0};
  ParameterBounds sigma2_bounds{0.1, 2.0};

  void clamp();
};

}  // namespace sgp

#endif  // SGP_KERNELS_HPP
