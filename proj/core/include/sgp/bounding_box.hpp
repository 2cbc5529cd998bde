// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_BOUNDING_BOX_HPP
#define SGP_BOUNDING_BOX_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgp {

/// Smallest axis-parallel hyperrectangle containing a set of points.
/// Degenerate zero-width edges are permitted.
struct BoundingBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  BoundingBox() = default;
  BoundingBox(Eigen::VectorXd lo, Eigen::VectorXd hi)
      : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size())
      throw std::invalid_argument("BoundingBox: dimension mismatch");
    if (((upper - lower).array() < 0.0).any())
      throw std::invalid_argument("BoundingBox: lower > upper");
  }

  /// Box of the columns of a d x n matrix block.
  template <typename Derived>
  static BoundingBox of(const Eigen::MatrixBase<Derived>& pts) {
    return BoundingBox(pts.rowwise().minCoeff(), pts.rowwise().maxCoeff());
  }

  Eigen::Index dim() const { return lower.size(); }
  Eigen::VectorXd midpoint() const { return 0.5 * (lower + upper); }
  Eigen::VectorXd edge_lengths() const { return upper - lower; }

  /// Euclidean length of the box diagonal.
  double diameter() const { return (upper - lower).norm(); }

  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const {
    return ((x - lower).array() >= -tol).all() &&
           ((upper - x).array() >= -tol).all();
  }
};

/// Euclidean distance between two boxes,
///   dist(a, b)^2 = sum_i max{0, a.lo_i - b.hi_i}^2 + max{0, b.lo_i - a.hi_i}^2.
inline double box_distance(const BoundingBox& a, const BoundingBox& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("box_distance: dimension mismatch");
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    const double lo_gap = std::max(0.0, a.lower[i] - b.upper[i]);
    const double hi_gap = std::max(0.0, b.lower[i] - a.upper[i]);
    s += lo_gap * lo_gap + hi_gap * hi_gap;
  }
  return std::sqrt(s);
}

struct BoxMetrics {
  double diam_a;
  double diam_b;
  double dist;
};

inline BoxMetrics box_metrics(const BoundingBox& a, const BoundingBox& b) {
  return {a.diameter(), b.diameter(), box_distance(a, b)};
}

/// Admissibility condition dist(B_a, B_b) >= eta * max{diam(B_a), diam(B_b)}.
inline bool boxes_admissible(const BoundingBox& a, const BoundingBox& b,
                             double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("admissibility: eta must be > 0");
  return box_distance(a, b) >= eta * std::max(a.diameter(), b.diameter());
}

}  // namespace sgp

#endif  // SGP_BOUNDING_BOX_HPP
