// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/samplet_tree.hpp"

#include <Eigen/QR>
#include <map>
#include <stdexcept>

namespace sgp {

namespace {

// Pascal triangle, binomial(a, b) for a <= 64.
double binomial(int a, int b) {
  if (b < 0 || b > a) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

// Row lookup for a multi-index set.
std::map<std::vector<int>, int> index_rows(const MultiIndexSet& iset) {
  std::map<std::vector<int>, int> rows;
  for (int r = 0; r < iset.size(); ++r) rows[iset.indices[r]] = r;
  return rows;
}

// Re-centering map for moment matrices: given moments about (c_in, s_in),
// left-multiplication by this matrix yields moments about (c_out, s_out).
// Entry (alpha, beta) = prod_i binom(alpha_i, beta_i) (s_in/s_out)^{beta_i}
//                       ((c_in - c_out)_i / s_out)^{alpha_i - beta_i}.
Eigen::MatrixXd recenter_map(const MultiIndexSet& iset,
                             const std::map<std::vector<int>, int>& rows,
                             const Eigen::VectorXd& c_in, double s_in,
                             const Eigen::VectorXd& c_out, double s_out) {
  const int m = iset.size();
  const int d = iset.dim;
  const Eigen::VectorXd t = (c_in - c_out) / s_out;
  const double ratio = s_in / s_out;
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(m, m);
  std::vector<int> beta(d);
  for (int a = 0; a < m; ++a) {
    const std::vector<int>& alpha = iset.indices[a];
    // enumerate beta <= alpha componentwise
    std::fill(beta.begin(), beta.end(), 0);
    while (true) {
      double val = 1.0;
      int abs_beta = 0;
      for (int i = 0; i < d; ++i) {
        val *= binomial(alpha[i], beta[i]) *
               std::pow(t[i], alpha[i] - beta[i]);
        abs_beta += beta[i];
      }
      val *= std::pow(ratio, abs_beta);
      map(a, rows.at(beta)) = val;
      int k = 0;
      while (k < d && beta[k] == alpha[k]) beta[k++] = 0;
      if (k == d) break;
      ++beta[k];
    }
  }
  return map;
}

}  // namespace

Eigen::MatrixXd moment_matrix(const Eigen::Ref<const Eigen::MatrixXd>& points,
                              const MultiIndexSet& iset,
                              const Eigen::VectorXd& center, double scale) {
  if (points.cols() < 1)
    throw std::invalid_argument("moment_matrix: empty point set");
  const int m = iset.size();
  const Eigen::Index n = points.cols();
  const int d = iset.dim;
  Eigen::MatrixXd mat(m, n);
  Eigen::VectorXd u(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    u = (points.col(i) - center) / scale;
    for (int r = 0; r < m; ++r) {
      double val = 1.0;
      for (int k = 0; k < d; ++k) {
        const int p = iset.indices[r][k];
        for (int e = 0; e < p; ++e) val *= u[k];
      }
      mat(r, i) = val;
    }
  }
  return mat;
}

SampletTree::SampletTree(ClusterTree tree, int q, bool augment_leaf_moments)
    : tree_(std::move(tree)), q_(q), augmented_(augment_leaf_moments) {
  if (q < 0) throw std::invalid_argument("SampletTree: q must be >= 0");
  const int d = static_cast<int>(tree_.dim());
  mq_ = monomial_dimension(q, d);
  const MultiIndexSet iset(q, d);
  const auto rows = index_rows(iset);

  // Augmented moment degree for clusters whose children are leaves:
  // the largest q_tilde with m_{q_tilde} <= 2 * leaf_threshold, never
  // smaller than q itself.
  int q_aug = q;
  if (augment_leaf_moments) {
    while (monomial_dimension(q_aug + 1, d) <= 2 * tree_.leaf_threshold())
      ++q_aug;
  }

  const auto& cnodes = tree_.nodes();
  nodes_.resize(cnodes.size());
  std::vector<Eigen::MatrixXd> q_store(cnodes.size());

  // Bottom-up pass (children have larger BFS indices than parents).
  for (int i = static_cast<int>(cnodes.size()) - 1; i >= 0; --i) {
    const ClusterNode& v = cnodes[i];
    SampletNode& sn = nodes_[i];
    const Eigen::VectorXd c_v = center(v);
    const double s_v = scale(v);
    if (v.is_leaf()) {
      sn.n_scaling = static_cast<int>(v.size());
      sn.n_samplets = 0;
      sn.scaling_moments = moment_matrix(tree_.points_of(v), iset, c_v, s_v);
      continue;
    }

    const SampletNode& s1 = nodes_[v.son1];
    const SampletNode& s2 = nodes_[v.son2];
    const ClusterNode& c1 = cnodes[v.son1];
    const ClusterNode& c2 = cnodes[v.son2];
    const int n = s1.n_scaling + s2.n_scaling;

    const bool both_leaves = c1.is_leaf() && c2.is_leaf();
    Eigen::MatrixXd moments;
    if (both_leaves && augment_leaf_moments && q_aug > q) {
      const MultiIndexSet iset_aug(q_aug, d);
      moments = moment_matrix(tree_.points_of(v), iset_aug, c_v, s_v);
    } else if (both_leaves) {
      moments = moment_matrix(tree_.points_of(v), iset, c_v, s_v);
    } else {
      moments.resize(mq_, n);
      moments.leftCols(s1.n_scaling) =
          recenter_map(iset, rows, center(c1), scale(c1), c_v, s_v) *
          s1.scaling_moments;
      moments.rightCols(s2.n_scaling) =
          recenter_map(iset, rows, center(c2), scale(c2), c_v, s_v) *
          s2.scaling_moments;
    }

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(moments.transpose());
    Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd R =
        qr.matrixQR().topRows(std::min<Eigen::Index>(n, moments.rows()));
    // Fix signs so the triangular factor has a non-negative diagonal.
    for (Eigen::Index k = 0; k < R.rows() && k < Q.cols(); ++k)
      if (R(k, k) < 0.0) Q.col(k) *= -1.0;

    sn.n_scaling = std::min(n, mq_);
    sn.n_samplets = n - sn.n_scaling;
    sn.scaling_moments = (moments * Q).topRows(mq_).leftCols(sn.n_scaling);
    q_store[i] = std::move(Q);
  }

  // Pack the transformations into one arena in bottom-up order.
  q_offset_.assign(cnodes.size(), 0);
  Eigen::Index q_total = 0;
  for (int i = static_cast<int>(cnodes.size()) - 1; i >= 0; --i) {
    q_offset_[i] = q_total;
    q_total += q_store[i].size();
  }
  qdata_.resize(std::max<Eigen::Index>(q_total, 1));
  for (int i = static_cast<int>(cnodes.size()) - 1; i >= 0; --i)
    if (q_store[i].size() > 0)
      Eigen::Map<Eigen::MatrixXd>(qdata_.data() + q_offset_[i],
                                  q_store[i].rows(), q_store[i].cols()) =
          q_store[i];

  // Coefficient layout: root scaling block first, then per-cluster samplet
  // blocks in breadth-first (coarse to fine) order.
  Eigen::Index idx = nodes_[0].n_scaling;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].n_samplets > 0) {
      nodes_[i].start_index = idx;
      idx += nodes_[i].n_samplets;
    }
  }
  if (idx != tree_.size())
    throw std::logic_error("SampletTree: basis size mismatch");

  basis_owner_.assign(tree_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (int k = 0; k < nodes_[i].n_samplets; ++k)
      basis_owner_[nodes_[i].start_index + k] = static_cast<int>(i);

  scratch_offset_.resize(nodes_.size());
  scratch_size_ = 0;
  max_block_ = 1;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    scratch_offset_[i] = scratch_size_;
    scratch_size_ += nodes_[i].n_scaling;
    const Eigen::Index block = nodes_[i].n_scaling + nodes_[i].n_samplets;
    if (!tree_.node(static_cast<int>(i)).is_leaf() && block > max_block_)
      max_block_ = block;
  }
}

Eigen::VectorXd SampletTree::forward_transform(
    const Eigen::VectorXd& values) const {
  if (values.size() != size())
    throw std::invalid_argument("forward_transform: length mismatch");
  const Eigen::VectorXd tree_vals = tree_.to_tree_order(values);
  Eigen::VectorXd out(size());
  Eigen::VectorXd scratch(scratch_size_);
  Eigen::VectorXd block(max_block_), mixed(max_block_);
  const auto& cnodes = tree_.nodes();
  for (int i = static_cast<int>(cnodes.size()) - 1; i >= 0; --i) {
    const ClusterNode& v = cnodes[i];
    const SampletNode& sn = nodes_[i];
    if (v.is_leaf()) {
      scratch.segment(scratch_offset_[i], v.size()) =
          tree_vals.segment(v.begin, v.size());
      continue;
    }
    const Eigen::Index n1 = nodes_[v.son1].n_scaling;
    const Eigen::Index n2 = nodes_[v.son2].n_scaling;
    block.head(n1) = scratch.segment(scratch_offset_[v.son1], n1);
    block.segment(n1, n2) = scratch.segment(scratch_offset_[v.son2], n2);
    mixed.head(n1 + n2).noalias() = Q(i).transpose() * block.head(n1 + n2);
    if (sn.n_samplets > 0)
      out.segment(sn.start_index, sn.n_samplets) =
          mixed.segment(sn.n_scaling, sn.n_samplets);
    scratch.segment(scratch_offset_[i], sn.n_scaling) =
        mixed.head(sn.n_scaling);
  }
  out.head(nodes_[0].n_scaling) =
      scratch.segment(scratch_offset_[0], nodes_[0].n_scaling);
  return out;
}

Eigen::VectorXd SampletTree::inverse_transform(
    const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != size())
    throw std::invalid_argument("inverse_transform: length mismatch");
  Eigen::VectorXd tree_vals(size());
  Eigen::VectorXd scratch(scratch_size_);
  Eigen::VectorXd block(max_block_), mixed(max_block_);
  scratch.segment(scratch_offset_[0], nodes_[0].n_scaling) =
      coeffs.head(nodes_[0].n_scaling);
  const auto& cnodes = tree_.nodes();
  for (std::size_t i = 0; i < cnodes.size(); ++i) {
    const ClusterNode& v = cnodes[i];
    const SampletNode& sn = nodes_[i];
    if (v.is_leaf()) {
      tree_vals.segment(v.begin, v.size()) =
          scratch.segment(scratch_offset_[i], v.size());
      continue;
    }
    const Eigen::Index n1 = nodes_[v.son1].n_scaling;
    const Eigen::Index n2 = nodes_[v.son2].n_scaling;
    block.head(sn.n_scaling) = scratch.segment(scratch_offset_[i], sn.n_scaling);
    if (sn.n_samplets > 0)
      block.segment(sn.n_scaling, sn.n_samplets) =
          coeffs.segment(sn.start_index, sn.n_samplets);
    mixed.head(n1 + n2).noalias() =
        Q(static_cast<int>(i)) * block.head(n1 + n2);
    scratch.segment(scratch_offset_[v.son1], n1) = mixed.head(n1);
    scratch.segment(scratch_offset_[v.son2], n2) = mixed.segment(n1, n2);
  }
  return tree_.to_input_order(tree_vals);
}

Eigen::MatrixXd SampletTree::dense_basis_matrix(Eigen::Index cap) const {
  const Eigen::Index n = size();
  if (n > cap)
    throw std::invalid_argument("dense_basis_matrix: N exceeds oracle cap");
  Eigen::MatrixXd T(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    e[i] = 1.0;
    T.col(i) = forward_transform(e);
    e[i] = 0.0;
  }
  return T;
}

}  // namespace sgp
