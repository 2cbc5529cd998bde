// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_POINT_CLOUD_HPP
#define SGP_POINT_CLOUD_HPP

#include <Eigen/Dense>
#include <stdexcept>

namespace sgp {

/// A set of N points in R^d, stored as the columns of a d x N matrix.
class PointCloud {
 public:
  PointCloud() = default;

  explicit PointCloud(Eigen::MatrixXd points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1)
      throw std::invalid_argument("PointCloud: need d >= 1 and N >= 1");
  }

  Eigen::Index dim() const { return points_.rows(); }
  Eigen::Index size() const { return points_.cols(); }

  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::MatrixXd::ConstColXpr point(Eigen::Index i) const {
    return points_.col(i);
  }

 private:
  Eigen::MatrixXd points_;
};

}  // namespace sgp

#endif  // SGP_POINT_CLOUD_HPP
