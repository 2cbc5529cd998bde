// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_INTERPOLATION_HPP
#define SGP_INTERPOLATION_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "sgp/bounding_box.hpp"

namespace sgp {

/// Symmetric radial function r -> f(r) used to fill coupling matrices and
/// kernel blocks (Matern kernel, its length-scale derivative, the
/// distance-weighted variant, ...).
using RadialFn = std::function<double(double)>;

/// Chebyshev points of the first kind on [-1, 1], ascending.
Eigen::VectorXd chebyshev_nodes(int n);

/// Tensor-product interpolation grid on a bounding box: per dimension n
/// Chebyshev points mapped affinely onto the box edge. A zero-width edge
/// maps every node onto the single coordinate; the Lagrange basis of such
/// a dimension degenerates to the constant selected by the first node.
class InterpolationGrid {
 public:
  InterpolationGrid(const BoundingBox& box, int n);

  int order() const { return n_; }
  Eigen::Index dim() const { return nodes1d_.rows(); }
  Eigen::Index num_nodes() const { return nodes_.cols(); }

  /// Tensor nodes xi_alpha as columns of a d x n^d matrix. Flat index
  /// alpha_1 + n alpha_2 + n^2 alpha_3 + ...
  const Eigen::MatrixXd& nodes() const { return nodes_; }

  /// Values of all n^d tensor Lagrange polynomials at x.
  Eigen::VectorXd lagrange_at(const Eigen::VectorXd& x) const;

 private:
  int n_;
  Eigen::MatrixXd nodes1d_;      // d x n
  std::vector<bool> degenerate_; // zero-width edges
  Eigen::MatrixXd nodes_;        // d x n^d
};

/// Same-order grids of all interpolation points for the clusters of a tree.
Eigen::MatrixXd interpolation_points(const BoundingBox& box, int n);

/// Transfer matrix T_{v,son} with entry (beta, alpha) = l^v_alpha(xi^son_beta):
/// V^Phi_son * T_{v,son} re-expresses the son's Lagrange moments in the
/// parent's basis.
Eigen::MatrixXd transfer_matrix(const InterpolationGrid& parent,
                                const InterpolationGrid& child);

/// Coupling matrix S_{v,v'} = [f(|xi^v_alpha - xi^v'_beta|)].
Eigen::MatrixXd coupling_matrix(const RadialFn& f, const InterpolationGrid& a,
                                const InterpolationGrid& b);

}  // namespace sgp

#endif  // SGP_INTERPOLATION_HPP
