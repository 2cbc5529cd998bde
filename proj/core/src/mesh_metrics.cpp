// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/mesh_metrics.hpp"

#include <limits>
#include <stdexcept>

namespace sgp {

MeshMetrics mesh_metrics(const PointCloud& cloud,
                         const Eigen::MatrixXd& domain_samples) {
  const Eigen::Index n = cloud.size();
  if (n < 2)
    throw std::invalid_argument("mesh_metrics: separation needs N >= 2");
  if (domain_samples.cols() < 1)
    throw std::invalid_argument("mesh_metrics: need at least one domain sample");
  if (domain_samples.rows() != cloud.dim())
    throw std::invalid_argument("mesh_metrics: sample dimension mismatch");

  const Eigen::MatrixXd& pts = cloud.points();
  double min_pair_sq = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      min_pair_sq =
          std::min(min_pair_sq, (pts.col(i) - pts.col(j)).squaredNorm());
  const double separation = 0.5 * std::sqrt(min_pair_sq);

  double fill_sq = 0.0;
  for (Eigen::Index s = 0; s < domain_samples.cols(); ++s) {
    const double nearest_sq =
        (pts.colwise() - domain_samples.col(s)).colwise().squaredNorm().minCoeff();
    fill_sq = std::max(fill_sq, nearest_sq);
  }
  const double fill = std::sqrt(fill_sq);

  const double ratio = separation > 0.0
                           ? fill / separation
                           : std::numeric_limits<double>::infinity();
  return {fill, separation, ratio};
}

Eigen::MatrixXd halton_samples(const BoundingBox& box, Eigen::Index count) {
  static constexpr int primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                   23, 29, 31, 37, 41, 43, 47, 53};
  const Eigen::Index d = box.dim();
  if (d > static_cast<Eigen::Index>(std::size(primes)))
    throw std::invalid_argument("halton_samples: dimension too large");
  Eigen::MatrixXd out(d, count);
  for (Eigen::Index j = 0; j < d; ++j) {
    const int base = primes[j];
    for (Eigen::Index i = 0; i < count; ++i) {
      double f = 1.0, r = 0.0;
      for (Eigen::Index k = i + 1; k > 0; k /= base) {
        f /= base;
        r += f * static_cast<double>(k % base);
      }
      out(j, i) = box.lower[j] + r * (box.upper[j] - box.lower[j]);
    }
  }
  return out;
}

}  // namespace sgp
