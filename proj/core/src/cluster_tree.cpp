// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/cluster_tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace sgp {

Eigen::VectorXd ClusterTree::to_tree_order(const Eigen::VectorXd& values) const {
  if (values.size() != size())
    throw std::invalid_argument("to_tree_order: length mismatch");
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    out[i] = values[permutation_[i]];
  return out;
}

Eigen::VectorXd ClusterTree::to_input_order(const Eigen::VectorXd& values) const {
  if (values.size() != size())
    throw std::invalid_argument("to_input_order: length mismatch");
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    out[permutation_[i]] = values[i];
  return out;
}

SplitResult split_cluster(const Eigen::Ref<const Eigen::MatrixXd>& pts) {
  const Eigen::Index n = pts.cols();
  SplitResult res;
  if (n < 2) return res;  // singleton: two empty children

  // Longest bounding-box edge determines the split direction.
  Eigen::VectorXd lengths =
      pts.rowwise().maxCoeff() - pts.rowwise().minCoeff();
  Eigen::Index dir = 0;
  lengths.maxCoeff(&dir);
  res.direction = static_cast<int>(dir);

  // Median convention: lower middle element of the sorted coordinates, so
  // at least one point attains the median and the tie rule is exercised.
  std::vector<double> coords(n);
  for (Eigen::Index i = 0; i < n; ++i) coords[i] = pts(dir, i);
  std::vector<double> sorted = coords;
  std::nth_element(sorted.begin(), sorted.begin() + (n - 1) / 2, sorted.end());
  const double median = sorted[(n - 1) / 2];
  res.median = median;

  const Eigen::Index target_left = (n + 1) / 2;
  for (Eigen::Index i = 0; i < n; ++i)
    if (coords[i] > median) res.left.push_back(i);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (coords[i] == median) {
      if (static_cast<Eigen::Index>(res.left.size()) < target_left)
        res.left.push_back(i);
      else
        res.right.push_back(i);
    } else if (coords[i] < median) {
      res.right.push_back(i);
    }
  }
  return res;
}

ClusterTree build_cluster_tree(const PointCloud& cloud, int leaf_threshold) {
  if (leaf_threshold <= 1)
    throw std::invalid_argument("build_cluster_tree: leaf_threshold must be >= 2");
  const Eigen::Index n = cloud.size();
  const Eigen::Index d = cloud.dim();
  if (n < 1) throw std::invalid_argument("build_cluster_tree: empty cloud");

  Eigen::MatrixXd pts = cloud.points();
  std::vector<Eigen::Index> perm(n);
  for (Eigen::Index i = 0; i < n; ++i) perm[i] = i;

  std::vector<ClusterNode> nodes;
  nodes.push_back({0, n, 0, BoundingBox::of(pts), -1, -1});

  // Breadth-first construction keeps levels contiguous in the node array.
  std::deque<int> queue{0};
  int depth = 0;
  Eigen::MatrixXd scratch_pts(d, n);
  std::vector<Eigen::Index> scratch_perm(n);
  while (!queue.empty()) {
    const int vi = queue.front();
    queue.pop_front();
    const Eigen::Index begin = nodes[vi].begin;
    const Eigen::Index sz = nodes[vi].size();
    depth = std::max(depth, nodes[vi].level);
    if (sz < leaf_threshold) continue;

    const SplitResult split = split_cluster(pts.middleCols(begin, sz));
    const Eigen::Index n1 = static_cast<Eigen::Index>(split.left.size());
    const Eigen::Index n2 = static_cast<Eigen::Index>(split.right.size());

    // Rearrange storage so son1 precedes son2 within [begin, end).
    Eigen::Index pos = 0;
    for (Eigen::Index i : split.left) {
      scratch_pts.col(pos) = pts.col(begin + i);
      scratch_perm[pos] = perm[begin + i];
      ++pos;
    }
    for (Eigen::Index i : split.right) {
      scratch_pts.col(pos) = pts.col(begin + i);
      scratch_perm[pos] = perm[begin + i];
      ++pos;
    }
    pts.middleCols(begin, sz) = scratch_pts.leftCols(sz);
    std::copy(scratch_perm.begin(), scratch_perm.begin() + sz,
              perm.begin() + begin);

    const int level = nodes[vi].level + 1;
    const int i1 = static_cast<int>(nodes.size());
    nodes.push_back({begin, begin + n1, level,
                     BoundingBox::of(pts.middleCols(begin, n1)), -1, -1});
    const int i2 = static_cast<int>(nodes.size());
    nodes.push_back({begin + n1, begin + sz, level,
                     BoundingBox::of(pts.middleCols(begin + n1, n2)), -1, -1});
    nodes[vi].son1 = i1;
    nodes[vi].son2 = i2;
    queue.push_back(i1);
    queue.push_back(i2);
  }

  return ClusterTree(std::move(pts), std::move(perm), std::move(nodes),
                     leaf_threshold, depth);
}

}  // namespace sgp
