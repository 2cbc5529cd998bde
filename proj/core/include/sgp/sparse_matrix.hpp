// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_SPARSE_MATRIX_HPP
#define SGP_SPARSE_MATRIX_HPP

#include <Eigen/Sparse>
#include <stdexcept>

namespace sgp {

/// Symmetric sparse matrix in compressed-column storage; both triangles are
/// stored explicitly. Thin wrapper that keeps symmetry-aware helpers in one
/// place.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  explicit SparseSymMatrix(Eigen::SparseMatrix<double> m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw std::invalid_argument("SparseSymMatrix: matrix must be square");
    if (!m_.isCompressed()) m_.makeCompressed();
  }

  Eigen::Index dim() const { return m_.rows(); }
  Eigen::Index nnz() const { return m_.nonZeros(); }
  const Eigen::SparseMatrix<double>& matrix() const { return m_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return m_ * x; }
  double quad(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return u.dot(m_ * v);
  }

  SparseSymMatrix scaled(double a) const { return SparseSymMatrix(a * m_); }

  /// Largest absolute difference |A - A^T|; zero for exactly symmetric data.
  double symmetry_defect() const {
    Eigen::SparseMatrix<double> diff = m_ - Eigen::SparseMatrix<double>(m_.transpose());
    double mx = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
        mx = std::max(mx, std::abs(it.value()));
    return mx;
  }

  /// Replace the data by its symmetric part (A + A^T) / 2.
  void symmetrize() {
    Eigen::SparseMatrix<double> t = m_.transpose();
    m_ = 0.5 * (m_ + t);
    m_.makeCompressed();
  }

  /// Drop off-diagonal entries with |value| < tau; the diagonal is kept so
  /// thresholding cannot break factorizability.
  void drop_small(double tau) {
    if (tau <= 0.0) return;
    m_.prune([tau](Eigen::Index row, Eigen::Index col, double value) {
      return row == col || std::abs(value) >= tau;
    });
    m_.makeCompressed();
  }

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }

 private:
  Eigen::SparseMatrix<double> m_;
};

}  // namespace sgp

#endif  // SGP_SPARSE_MATRIX_HPP
