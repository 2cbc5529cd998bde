// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sgp/kernels.hpp"
#include "sgp/random.hpp"

using namespace sgp;

TEST_CASE("matern evaluation at reference values") {
  CHECK(MaternKernel(0.5, 1.0, 1.0)(0.0) == doctest::Approx(1.0));
  CHECK(MaternKernel(2.5, 0.3, 4.0)(0.0) == doctest::Approx(4.0));
  CHECK(MaternKernel(0.5, 1.0, 1.0)(1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(MaternKernel(1.5, 1.0, 1.0)(1.0) ==
        doctest::Approx((1.0 + std::sqrt(3.0)) * std::exp(-std::sqrt(3.0)))
            .epsilon(1e-12));
  CHECK(MaternKernel(2.5, 1.0, 1.0)(1.0) ==
        doctest::Approx((1.0 + std::sqrt(5.0) + 5.0 / 3.0) *
                        std::exp(-std::sqrt(5.0)))
            .epsilon(1e-12));
}

TEST_CASE("only half-integer smoothness is accepted") {
  CHECK_THROWS_AS(MaternKernel(1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MaternKernel(2.5, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MaternKernel(2.5, 1.0, 0.0), std::invalid_argument);
  CHECK_NOTHROW(MaternKernel(12.5, 1.0, 1.0));
  CHECK_THROWS_AS(MaternKernel(13.5, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("monotone decay in r") {
  for (double nu : {0.5, 1.5, 2.5, 4.5}) {
    const MaternKernel k(nu, 0.7, 2.0);
    double prev = k(1e-9);
    for (int i = 1; i <= 100; ++i) {
      const double r = i * 0.07;  // up to 10 ell
      const double v = k(r);
      CHECK(v < prev);
      CHECK(v > 0.0);
      prev = v;
    }
  }
}

TEST_CASE("stationarity under translation") {
  RandomSource rng(1);
  const MaternKernel k(1.5, 0.9, 1.3);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d a = rng.normal_vector(3);
    const Eigen::Vector3d b = rng.normal_vector(3);
    const Eigen::Vector3d t = rng.normal_vector(3);
    // the kernel is a function of the distance only: equal r gives equal
    // values exactly, translated inputs agree up to the rounding of r
    CHECK(k((a - b).norm()) == k((b - a).norm()));
    CHECK(k((a - b).norm()) ==
          doctest::Approx(k(((a + t) - (b + t)).norm())).epsilon(1e-12));
  }
}

TEST_CASE("kernel matrix layout and PSD") {
  Eigen::MatrixXd one(1, 1);
  one << 0.4;
  const PointCloud single(one);
  const MaternKernel k(0.5, 1.0, 3.0);
  const Eigen::MatrixXd k11 = kernel_matrix(k, single, single);
  CHECK(k11(0, 0) == doctest::Approx(3.0));

  Eigen::MatrixXd two(1, 2);
  two << 0.0, 1.0;
  const PointCloud pair(two);
  const MaternKernel unitk(0.5, 1.0, 1.0);
  const Eigen::MatrixXd k22 = kernel_matrix(unitk, pair, pair);
  CHECK(k22(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(k22(1, 0) == doctest::Approx(std::exp(-1.0)));
  CHECK(k22(0, 0) == doctest::Approx(1.0));

  RandomSource rng(2);
  const PointCloud cloud(rng.uniform_matrix(3, 50));
  const Eigen::MatrixXd kk =
      kernel_matrix(MaternKernel(2.5, 0.6, 1.0), cloud, cloud);
  CHECK(kk.isApprox(kk.transpose()));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kk);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);

  const PointCloud wrong(rng.uniform_matrix(2, 5));
  CHECK_THROWS_AS((void)kernel_matrix(k, cloud, wrong), std::invalid_argument);
}

TEST_CASE("distance-weighted matrix") {
  Eigen::MatrixXd two(1, 2);
  two << 0.0, 1.0;
  const PointCloud pair(two);
  const MaternKernel k(0.5, 1.0, 1.0);
  const Eigen::MatrixXd dw = distance_weighted_matrix(k, pair);
  CHECK(dw(0, 0) == 0.0);
  CHECK(dw(1, 1) == 0.0);
  CHECK(dw(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(dw(1, 0) == dw(0, 1));

  RandomSource rng(3);
  const PointCloud cloud(rng.uniform_matrix(2, 30));
  const Eigen::MatrixXd m =
      distance_weighted_matrix(MaternKernel(1.5, 0.8, 2.0), cloud);
  CHECK(m.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.isApprox(m.transpose()));
}

TEST_CASE("exact length-scale derivative matches central differences") {
  RandomSource rng(4);
  const PointCloud cloud(rng.uniform_matrix(2, 40));
  for (double nu : {0.5, 1.5, 2.5, 3.5}) {
    const double ell = 0.8, s2 = 1.7;
    const MaternKernel k(nu, ell, s2);
    const double h = 1e-5 * ell;
    const MaternKernel kp(nu, ell + h, s2), km(nu, ell - h, s2);
    const Eigen::MatrixXd fd =
        (kernel_matrix(kp, cloud, cloud) - kernel_matrix(km, cloud, cloud)) /
        (2.0 * h);
    Eigen::MatrixXd analytic(cloud.size(), cloud.size());
    for (Eigen::Index j = 0; j < cloud.size(); ++j)
      for (Eigen::Index i = 0; i < cloud.size(); ++i)
        analytic(i, j) = k.dlength((cloud.point(i) - cloud.point(j)).norm());
    CHECK(analytic.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK((analytic - fd).cwiseAbs().maxCoeff() <=
          1e-6 * fd.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("signal-variance derivative identity dK/ds2 = K/s2") {
  RandomSource rng(5);
  const PointCloud cloud(rng.uniform_matrix(2, 30));
  const double ell = 1.1, s2 = 2.3, h = 1e-5 * s2;
  const MaternKernel k(2.5, ell, s2);
  const Eigen::MatrixXd fd =
      (kernel_matrix(MaternKernel(2.5, ell, s2 + h), cloud, cloud) -
       kernel_matrix(MaternKernel(2.5, ell, s2 - h), cloud, cloud)) /
      (2.0 * h);
  const Eigen::MatrixXd analytic = kernel_matrix(k, cloud, cloud) / s2;
  CHECK((analytic - fd).cwiseAbs().maxCoeff() <=
        1e-6 * fd.cwiseAbs().maxCoeff());
}

TEST_CASE("hyperparameter clamping") {
  Hyperparameters h;
  h.ell = 5.0;
  h.s2 = 1e-4;
  h.sigma2 = 0.5;
  h.clamp();
  CHECK(h.ell == 2.0);
  CHECK(h.s2 == 0.05);
  CHECK(h.sigma2 == 0.5);
}
