// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/sparse_cholesky.hpp"

#include <Eigen/OrderingMethods>
#include <cmath>

namespace sgp {

namespace {

// Elimination tree of a symmetric matrix given by the upper triangle of its
// permuted pattern.
std::vector<Eigen::Index> elimination_tree(
    const Eigen::SparseMatrix<double>& c) {
  const Eigen::Index n = c.rows();
  std::vector<Eigen::Index> parent(n, -1), ancestor(n, -1);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(c, k); it; ++it) {
      Eigen::Index i = it.row();
      if (i >= k) continue;
      while (i != -1 && i < k) {
        const Eigen::Index next = ancestor[i];
        ancestor[i] = k;
        if (next == -1) parent[i] = k;
        i = next;
      }
    }
  }
  return parent;
}

// Nonzero pattern of row k of L: reach of the upper column pattern in the
// elimination tree, returned in topological order in s[top..n).
Eigen::Index ereach(const Eigen::SparseMatrix<double>& c, Eigen::Index k,
                    const std::vector<Eigen::Index>& parent,
                    std::vector<Eigen::Index>& s,
                    std::vector<Eigen::Index>& w,
                    std::vector<Eigen::Index>& stack) {
  const Eigen::Index n = c.rows();
  Eigen::Index top = n;
  w[k] = k;
  for (Eigen::SparseMatrix<double>::InnerIterator it(c, k); it; ++it) {
    Eigen::Index i = it.row();
    if (i > k) continue;
    Eigen::Index len = 0;
    while (w[i] != k) {
      stack[len++] = i;
      w[i] = k;
      i = parent[i];
    }
    while (len > 0) s[--top] = stack[--len];
  }
  return top;
}

}  // namespace

CholeskyFactor sparse_cholesky(const SparseSymMatrix& a, double shift,
                               const std::vector<Eigen::Index>& permutation) {
  if (shift < 0.0)
    throw std::invalid_argument("sparse_cholesky: shift must be >= 0");
  const Eigen::Index n = a.dim();
  if (static_cast<Eigen::Index>(permutation.size()) != n)
    throw std::invalid_argument("sparse_cholesky: permutation size mismatch");
  CholeskyFactor f;
  f.n_ = n;
  f.perm_ = permutation;
  f.iperm_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) f.iperm_[f.perm_[i]] = i;

  // Permuted matrix C = P (A + shift I) P^T.
  Eigen::SparseMatrix<double> c(n, n);
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(a.nnz() + n);
    const auto& m = a.matrix();
    for (int col = 0; col < m.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
        const double add = (it.row() == it.col()) ? shift : 0.0;
        trips.emplace_back(static_cast<int>(f.iperm_[it.row()]),
                           static_cast<int>(f.iperm_[it.col()]),
                           it.value() + add);
      }
    // Entries absent from A still need the diagonal shift.
    std::vector<bool> has_diag(n, false);
    for (int col = 0; col < m.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it)
        if (it.row() == it.col()) has_diag[it.row()] = true;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!has_diag[i])
        trips.emplace_back(static_cast<int>(f.iperm_[i]),
                           static_cast<int>(f.iperm_[i]), shift);
    c.setFromTriplets(trips.begin(), trips.end());
    c.makeCompressed();
  }

  const std::vector<Eigen::Index> parent = elimination_tree(c);

  // Symbolic pass: column counts of L.
  std::vector<Eigen::Index> s(n), w(n, -1), stack(n);
  std::vector<Eigen::Index> counts(n, 1);  // diagonal
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index top = ereach(c, k, parent, s, w, stack);
    for (Eigen::Index t = top; t < n; ++t) ++counts[s[t]];
  }
  f.lp_.assign(n + 1, 0);
  for (Eigen::Index j = 0; j < n; ++j) f.lp_[j + 1] = f.lp_[j] + counts[j];
  const Eigen::Index lnz = f.lp_[n];
  f.li_.assign(lnz, 0);
  f.lx_.assign(lnz, 0.0);

  // Numeric up-looking factorization (row k of L per step).
  std::vector<Eigen::Index> next(n);  // next free slot per column
  for (Eigen::Index j = 0; j < n; ++j) next[j] = f.lp_[j];
  std::fill(w.begin(), w.end(), -1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index top = ereach(c, k, parent, s, w, stack);
    double dk = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(c, k); it; ++it) {
      if (it.row() < k)
        x[it.row()] = it.value();
      else if (it.row() == k)
        dk = it.value();
    }
    for (Eigen::Index t = top; t < n; ++t) {
      const Eigen::Index j = s[t];
      const double lkj = x[j] / f.lx_[f.lp_[j]];
      x[j] = 0.0;
      for (Eigen::Index p = f.lp_[j] + 1; p < next[j]; ++p)
        x[f.li_[p]] -= f.lx_[p] * lkj;
      dk -= lkj * lkj;
      f.li_[next[j]] = k;
      f.lx_[next[j]] = lkj;
      ++next[j];
    }
    if (!(dk > 0.0)) throw IndefiniteMatrix(f.perm_[k], dk);
    f.li_[next[k]] = k;
    f.lx_[next[k]] = std::sqrt(dk);
    ++next[k];
  }
  return f;
}

CholeskyFactor sparse_cholesky(const SparseSymMatrix& a, double shift,
                               Ordering ordering) {
  const Eigen::Index n = a.dim();
  std::vector<Eigen::Index> perm(n);
  if (ordering == Ordering::amd) {
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> p;
    Eigen::SparseMatrix<double> pattern = a.matrix();
    Eigen::AMDOrdering<int>()(pattern, p);
    // p.indices()(k) is the original index eliminated at position k.
    for (Eigen::Index i = 0; i < n; ++i)
      perm[i] = p.indices()(static_cast<int>(i));
  } else {
    for (Eigen::Index i = 0; i < n; ++i) perm[i] = i;
  }
  return sparse_cholesky(a, shift, perm);
}

Eigen::VectorXd CholeskyFactor::solve(const Eigen::VectorXd& b) const {
  if (b.size() != n_) throw std::invalid_argument("solve: length mismatch");
  Eigen::VectorXd y(n_);
  for (Eigen::Index i = 0; i < n_; ++i) y[i] = b[perm_[i]];
  // L y' = y
  for (Eigen::Index j = 0; j < n_; ++j) {
    y[j] /= lx_[lp_[j]];
    for (Eigen::Index p = lp_[j] + 1; p < lp_[j + 1]; ++p)
      y[li_[p]] -= lx_[p] * y[j];
  }
  // L^T z = y'
  for (Eigen::Index j = n_ - 1; j >= 0; --j) {
    for (Eigen::Index p = lp_[j] + 1; p < lp_[j + 1]; ++p)
      y[j] -= lx_[p] * y[li_[p]];
    y[j] /= lx_[lp_[j]];
  }
  Eigen::VectorXd out(n_);
  for (Eigen::Index i = 0; i < n_; ++i) out[perm_[i]] = y[i];
  return out;
}

Eigen::MatrixXd CholeskyFactor::solve(const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd out(b.rows(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    out.col(j) = solve(Eigen::VectorXd(b.col(j)));
  return out;
}

Eigen::MatrixXd CholeskyFactor::forward_substitute(
    const Eigen::MatrixXd& b) const {
  if (b.rows() != n_)
    throw std::invalid_argument("forward_substitute: dimension mismatch");
  Eigen::MatrixXd y(n_, b.cols());
  for (Eigen::Index i = 0; i < n_; ++i) y.row(i) = b.row(perm_[i]);
  for (Eigen::Index j = 0; j < n_; ++j) {
    y.row(j) /= lx_[lp_[j]];
    for (Eigen::Index p = lp_[j] + 1; p < lp_[j + 1]; ++p)
      y.row(li_[p]) -= lx_[p] * y.row(j);
  }
  return y;
}

double CholeskyFactor::log_det() const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < n_; ++j) s += std::log(lx_[lp_[j]]);
  return 2.0 * s;
}

}  // namespace sgp
