// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/interpolation.hpp"

#include <cmath>
#include <stdexcept>

namespace sgp {

Eigen::VectorXd chebyshev_nodes(int n) {
  if (n < 1) throw std::invalid_argument("chebyshev_nodes: n must be >= 1");
  Eigen::VectorXd x(n);
  for (int k = 1; k <= n; ++k)
    x[n - k] = std::cos((2.0 * k - 1.0) / (2.0 * n) * M_PI);
  return x;
}

InterpolationGrid::InterpolationGrid(const BoundingBox& box, int n) : n_(n) {
  const Eigen::Index d = box.dim();
  const Eigen::VectorXd ref = chebyshev_nodes(n);
  nodes1d_.resize(d, n);
  degenerate_.assign(d, false);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double lo = box.lower[j], hi = box.upper[j];
    if (hi > lo) {
      nodes1d_.row(j) =
          (0.5 * (hi - lo) * ref.array() + 0.5 * (hi + lo)).transpose();
    } else {
      nodes1d_.row(j).setConstant(lo);
      degenerate_[j] = true;
    }
  }

  Eigen::Index total = 1;
  for (Eigen::Index j = 0; j < d; ++j) total *= n;
  nodes_.resize(d, total);
  std::vector<int> alpha(d, 0);
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    for (Eigen::Index j = 0; j < d; ++j) nodes_(j, flat) = nodes1d_(j, alpha[j]);
    for (Eigen::Index j = 0; j < d; ++j) {
      if (++alpha[j] < n) break;
      alpha[j] = 0;
    }
  }
}

Eigen::VectorXd InterpolationGrid::lagrange_at(const Eigen::VectorXd& x) const {
  const Eigen::Index d = dim();
  if (x.size() != d)
    throw std::invalid_argument("lagrange_at: dimension mismatch");
  // Per-dimension 1D Lagrange basis values, then tensor products.
  Eigen::MatrixXd basis(d, n_);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (degenerate_[j]) {
      basis.row(j).setZero();
      basis(j, 0) = 1.0;
      continue;
    }
    for (int k = 0; k < n_; ++k) {
      double v = 1.0;
      for (int i = 0; i < n_; ++i) {
        if (i == k) continue;
        v *= (x[j] - nodes1d_(j, i)) / (nodes1d_(j, k) - nodes1d_(j, i));
      }
      basis(j, k) = v;
    }
  }
  Eigen::VectorXd out(num_nodes());
  std::vector<int> alpha(d, 0);
  for (Eigen::Index flat = 0; flat < num_nodes(); ++flat) {
    double v = 1.0;
    for (Eigen::Index j = 0; j < d; ++j) v *= basis(j, alpha[j]);
    out[flat] = v;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (++alpha[j] < n_) break;
      alpha[j] = 0;
    }
  }
  return out;
}

Eigen::MatrixXd interpolation_points(const BoundingBox& box, int n) {
  return InterpolationGrid(box, n).nodes();
}

Eigen::MatrixXd transfer_matrix(const InterpolationGrid& parent,
                                const InterpolationGrid& child) {
  if (parent.order() != child.order() || parent.dim() != child.dim())
    throw std::invalid_argument("transfer_matrix: grids must match in n and d");
  const Eigen::Index m = parent.num_nodes();
  Eigen::MatrixXd T(m, m);
  for (Eigen::Index beta = 0; beta < m; ++beta)
    T.row(beta) = parent.lagrange_at(child.nodes().col(beta)).transpose();
  return T;
}

Eigen::MatrixXd coupling_matrix(const RadialFn& f, const InterpolationGrid& a,
                                const InterpolationGrid& b) {
  Eigen::MatrixXd S(a.num_nodes(), b.num_nodes());
  for (Eigen::Index j = 0; j < b.num_nodes(); ++j)
    for (Eigen::Index i = 0; i < a.num_nodes(); ++i)
      S(i, j) = f((a.nodes().col(i) - b.nodes().col(j)).norm());
  return S;
}

}  // namespace sgp
