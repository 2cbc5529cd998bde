// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_TRACE_HPP
#define SGP_TRACE_HPP

#include <Eigen/Dense>

#include "sgp/random.hpp"
#include "sgp/sparse_cholesky.hpp"
#include "sgp/sparse_matrix.hpp"

namespace sgp {

/// Hutchinson estimate (1/t) sum_i (A^{-1} z_i)^T M z_i of tr(A^{-1} M)
/// for explicit probe vectors z_i (columns).
inline double hutchinson_trace_probes(const CholeskyFactor& factor,
                                      const SparseSymMatrix& m,
                                      const Eigen::MatrixXd& probes) {
  if (probes.rows() != factor.dim() || m.dim() != factor.dim())
    throw std::invalid_argument("hutchinson_trace: dimension mismatch");
  if (probes.cols() < 1)
    throw std::invalid_argument("hutchinson_trace: need at least one probe");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probes.cols(); ++i)
    acc += factor.solve(Eigen::VectorXd(probes.col(i)))
               .dot(m.apply(probes.col(i)));
  return acc / static_cast<double>(probes.cols());
}

/// Unbiased stochastic estimate of tr(A^{-1} M) with t standard normal
/// probes drawn from rng.
inline double hutchinson_trace(const CholeskyFactor& factor,
                               const SparseSymMatrix& m, int t,
                               RandomSource& rng) {
  if (t < 1) throw std::invalid_argument("hutchinson_trace: t must be >= 1");
  return hutchinson_trace_probes(factor, m,
                                 rng.normal_matrix(factor.dim(), t));
}

}  // namespace sgp

#endif  // SGP_TRACE_HPP
