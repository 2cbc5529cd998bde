// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_CLUSTER_TREE_HPP
#define SGP_CLUSTER_TREE_HPP

#include <Eigen/Dense>
#include <vector>

#include "sgp/bounding_box.hpp"
#include "sgp/point_cloud.hpp"

namespace sgp {

/// Node of a balanced binary cluster tree. Points of a node occupy the
/// contiguous slice [begin, end) of the tree's permuted point storage.
struct ClusterNode {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;
  int level = 0;
  BoundingBox bbox;
  int son1 = -1;
  int son2 = -1;

  bool is_leaf() const { return son1 < 0; }
  Eigen::Index size() const { return end - begin; }
};

/// Balanced binary spatial partition of a point cloud, built by recursive
/// median splits along the longest bounding-box edge. The tree owns a
/// permuted copy of the points; `permutation()[i]` is the original index of
/// the point stored at tree position i. Immutable after construction.
class ClusterTree {
 public:
  ClusterTree(Eigen::MatrixXd permuted_points,
              std::vector<Eigen::Index> permutation,
              std::vector<ClusterNode> nodes, int leaf_threshold, int depth)
      : points_(std::move(permuted_points)),
        permutation_(std::move(permutation)),
        nodes_(std::move(nodes)),
        leaf_threshold_(leaf_threshold),
        depth_(depth) {}

  Eigen::Index dim() const { return points_.rows(); }
  Eigen::Index size() const { return points_.cols(); }
  int depth() const { return depth_; }
  int leaf_threshold() const { return leaf_threshold_; }

  /// Nodes in breadth-first order; node 0 is the root.
  const std::vector<ClusterNode>& nodes() const { return nodes_; }
  const ClusterNode& node(int i) const { return nodes_[i]; }
  const ClusterNode& root() const { return nodes_.front(); }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }

  /// Points in tree order (d x N).
  const Eigen::MatrixXd& points() const { return points_; }
  const std::vector<Eigen::Index>& permutation() const { return permutation_; }

  /// Contiguous view of the points of a node.
  auto points_of(const ClusterNode& v) const {
    return points_.middleCols(v.begin, v.size());
  }

  /// Reorder a vector given in original point order into tree order.
  Eigen::VectorXd to_tree_order(const Eigen::VectorXd& values) const;
  /// Inverse of to_tree_order.
  Eigen::VectorXd to_input_order(const Eigen::VectorXd& values) const;

 private:
  Eigen::MatrixXd points_;
  std::vector<Eigen::Index> permutation_;
  std::vector<ClusterNode> nodes_;
  int leaf_threshold_;
  int depth_;
};

/// Outcome of a single median split of a point slice: index subsets of the
/// slice, the split direction and the split value. Points with coordinate
/// greater than the median go left; points equal to the median are promoted
/// left until the left side holds ceil(n/2) points.
struct SplitResult {
  std::vector<Eigen::Index> left;
  std::vector<Eigen::Index> right;
  int direction = 0;
  double median = 0.0;
};

SplitResult split_cluster(const Eigen::Ref<const Eigen::MatrixXd>& pts);

/// Build the balanced binary cluster tree; clusters with fewer than
/// `leaf_threshold` points become leaves. Rejects leaf_threshold <= 1.
ClusterTree build_cluster_tree(const PointCloud& cloud, int leaf_threshold);

/// Admissibility test dist(B_a, B_b) >= eta * max{diam(B_a), diam(B_b)}.
inline bool is_admissible(const ClusterNode& a, const ClusterNode& b,
                          double eta) {
  return boxes_admissible(a.bbox, b.bbox, eta);
}

}  // namespace sgp

#endif  // SGP_CLUSTER_TREE_HPP
