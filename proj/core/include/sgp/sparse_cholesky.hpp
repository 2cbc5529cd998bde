// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_SPARSE_CHOLESKY_HPP
#define SGP_SPARSE_CHOLESKY_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgp/sparse_matrix.hpp"

namespace sgp {

/// Factorization breakdown on a non-positive pivot. Carries the index of
/// the failing pivot in the original (unpermuted) matrix ordering; callers
/// typically retry with a larger diagonal shift.
class IndefiniteMatrix : public std::runtime_error {
 public:
  IndefiniteMatrix(Eigen::Index pivot, double value)
      : std::runtime_error("sparse_cholesky: non-positive pivot " +
                           std::to_string(value) + " at index " +
                           std::to_string(pivot)),
        pivot_index(pivot) {}
  Eigen::Index pivot_index;
};

enum class Ordering { amd, natural };

/// Simplicial sparse Cholesky factor L with P (A + shift I) P^T = L L^T.
/// Immutable after construction; concurrent solves are safe.
class CholeskyFactor {
 public:
  Eigen::Index dim() const { return n_; }
  Eigen::Index nnz() const { return static_cast<Eigen::Index>(li_.size()); }

  /// x with (A + shift I) x = b, applying the ordering transparently.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// Column-wise solve for multiple right-hand sides.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
  /// Half solve L z = P b; needed for posterior covariance downdates.
  Eigen::MatrixXd forward_substitute(const Eigen::MatrixXd& b) const;

  /// log det(A + shift I) = 2 sum_i log L_ii.
  double log_det() const;

  const std::vector<Eigen::Index>& permutation() const { return perm_; }

  friend CholeskyFactor sparse_cholesky(const SparseSymMatrix&, double,
                                        Ordering);
  friend CholeskyFactor sparse_cholesky(const SparseSymMatrix&, double,
                                        const std::vector<Eigen::Index>&);

 private:
  Eigen::Index n_ = 0;
  std::vector<Eigen::Index> lp_;   // column pointers, size n + 1
  std::vector<Eigen::Index> li_;   // row indices, sorted within columns
  std::vector<double> lx_;         // values
  std::vector<Eigen::Index> perm_;  // new position -> original index
  std::vector<Eigen::Index> iperm_; // original index -> new position
};

/// Factor A + shift I with a fill-reducing ordering (approximate minimum
/// degree by default). Throws IndefiniteMatrix on a non-positive pivot.
CholeskyFactor sparse_cholesky(const SparseSymMatrix& a, double shift,
                               Ordering ordering = Ordering::amd);

/// Factor with a caller-supplied elimination order; permutation[k] is the
/// original index eliminated at position k.
CholeskyFactor sparse_cholesky(const SparseSymMatrix& a, double shift,
                               const std::vector<Eigen::Index>& permutation);

}  // namespace sgp

#endif  // SGP_SPARSE_CHOLESKY_HPP
