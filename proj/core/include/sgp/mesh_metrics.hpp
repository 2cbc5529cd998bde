// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_MESH_METRICS_HPP
#define SGP_MESH_METRICS_HPP

#include <Eigen/Dense>

#include "sgp/bounding_box.hpp"
#include "sgp/point_cloud.hpp"

namespace sgp {

struct MeshMetrics {
  /// Largest distance from any domain sample to its nearest cloud point;
  /// a lower bound on the true fill distance sup_x inf_i |x - x_i|.
  double fill_distance;
  /// Half the minimum pairwise distance (exact).
  double separation_radius;
  /// fill_distance / separation_radius; +inf when the cloud has duplicates.
  double mesh_ratio;
};

/// Estimate the Def.-style mesh quantities of a cloud. The fill distance is
/// maximized over caller-supplied domain samples (columns of a d x m matrix).
/// Requires N >= 2 and at least one sample.
MeshMetrics mesh_metrics(const PointCloud& cloud,
                         const Eigen::MatrixXd& domain_samples);

/// Halton sequence samples inside a box, as columns of a d x count matrix.
/// Default sample set for mesh_metrics when the caller has no domain model.
Eigen::MatrixXd halton_samples(const BoundingBox& box, Eigen::Index count);

}  // namespace sgp

#endif  // SGP_MESH_METRICS_HPP
