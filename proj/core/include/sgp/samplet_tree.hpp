// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_SAMPLET_TREE_HPP
#define SGP_SAMPLET_TREE_HPP

#include <Eigen/Dense>
#include <vector>

#include "sgp/cluster_tree.hpp"
#include "sgp/multi_index.hpp"

namespace sgp {

/// Per-cluster data of the multiscale samplet basis. For a non-leaf cluster
/// the orthogonal matrix Q maps the children's n scaling functions onto
/// n_scaling new scaling functions followed by n_samplets samplets. Leaves
/// carry no Q; their scaling functions are the Dirac functionals of their
/// points.
struct SampletNode {
  Eigen::MatrixXd scaling_moments;  //!< m_q x n_scaling, about own center
  int n_scaling = 0;
  int n_samplets = 0;
  Eigen::Index start_index = -1;    //!< samplet block start in the global
                                    //!< coefficient vector, -1 if none
};

/// Evaluate the moment matrix [((x_i - center)/scale)^alpha] of a set of
/// points (columns), rows running over `iset` in its stored order.
Eigen::MatrixXd moment_matrix(const Eigen::Ref<const Eigen::MatrixXd>& points,
                              const MultiIndexSet& iset,
                              const Eigen::VectorXd& center, double scale);

/// Multiscale samplet basis with q vanishing moments over a cluster tree.
///
/// Global coefficient layout: the root's scaling coefficients first, then
/// one contiguous samplet block per cluster in breadth-first order, so
/// coarse-level samplets precede finer ones. The induced N x N change of
/// basis T is orthogonal; forward_transform applies T, inverse_transform
/// applies T^T. Immutable after construction; transforms are reentrant.
class SampletTree {
 public:
  SampletTree(ClusterTree tree, int q, bool augment_leaf_moments);

  const ClusterTree& cluster_tree() const { return tree_; }
  Eigen::Index size() const { return tree_.size(); }
  int q() const { return q_; }
  /// Dimension m_q of the annihilated polynomial space.
  int scaling_space_dim() const { return mq_; }
  bool augmented() const { return augmented_; }

  const std::vector<SampletNode>& nodes() const { return nodes_; }
  const SampletNode& node(int i) const { return nodes_[i]; }
  int root_scaling_count() const { return nodes_[0].n_scaling; }

  /// Orthogonal transformation of a non-leaf cluster, mapping its
  /// children's n scaling functions to [scaling | samplets]. All Q blocks
  /// live in one arena laid out in bottom-up traversal order, so the
  /// transforms stream it sequentially.
  Eigen::Map<const Eigen::MatrixXd> Q(int i) const {
    const Eigen::Index n = nodes_[i].n_scaling + nodes_[i].n_samplets;
    const bool leaf = tree_.node(i).is_leaf();
    return Eigen::Map<const Eigen::MatrixXd>(
        qdata_.data() + q_offset_[i], leaf ? 0 : n, leaf ? 0 : n);
  }

  /// Cluster node id owning each global basis index (root for the scaling
  /// block, the samplet's cluster otherwise).
  const std::vector<int>& basis_owner() const { return basis_owner_; }

  /// Monomial center/scale used for a cluster's moment matrices.
  Eigen::VectorXd center(const ClusterNode& v) const {
    return v.bbox.midpoint();
  }
  double scale(const ClusterNode& v) const {
    const double s = 0.5 * v.bbox.diameter();
    return s > 0.0 ? s : 1.0;
  }

  /// f (input point order) -> samplet coefficients, cost O(N).
  Eigen::VectorXd forward_transform(const Eigen::VectorXd& values) const;
  /// Samplet coefficients -> f (input point order), cost O(N).
  Eigen::VectorXd inverse_transform(const Eigen::VectorXd& coeffs) const;

  /// Materialized change-of-basis matrix T with T*f == forward_transform(f);
  /// row j holds the coefficient vector of basis function j. Test oracle,
  /// rejects N > cap.
  Eigen::MatrixXd dense_basis_matrix(Eigen::Index cap = 4096) const;

 private:
  ClusterTree tree_;
  int q_;
  int mq_;
  bool augmented_;
  std::vector<SampletNode> nodes_;
  std::vector<int> basis_owner_;
  std::vector<double> qdata_;
  std::vector<Eigen::Index> q_offset_;
  // flat scratch layout for the transforms: one slice of n_scaling entries
  // per node, so a transform performs no per-node allocations
  std::vector<Eigen::Index> scratch_offset_;
  Eigen::Index scratch_size_ = 0;
  Eigen::Index max_block_ = 0;
};

inline SampletTree build_samplet_tree(ClusterTree tree, int q,
                                      bool augment_leaf_moments = false) {
  return SampletTree(std::move(tree), q, augment_leaf_moments);
}

}  // namespace sgp

#endif  // SGP_SAMPLET_TREE_HPP
