// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/compressor.hpp"

#include <stdexcept>
#include <unordered_map>

namespace sgp {

std::vector<InterpolationGrid> cluster_grids(const SampletTree& st, int n) {
  const auto& cnodes = st.cluster_tree().nodes();
  std::vector<InterpolationGrid> grids;
  grids.reserve(cnodes.size());
  for (const auto& v : cnodes) grids.emplace_back(v.bbox, n);
  return grids;
}

ClusterBases compute_cluster_bases(
    const SampletTree& st, const std::vector<InterpolationGrid>& grids) {
  const auto& cnodes = st.cluster_tree().nodes();
  ClusterBases bases;
  bases.phi.resize(cnodes.size());
  bases.sigma.resize(cnodes.size());
  for (int i = static_cast<int>(cnodes.size()) - 1; i >= 0; --i) {
    const ClusterNode& v = cnodes[i];
    const SampletNode& sn = st.node(i);
    if (v.is_leaf()) {
      const auto pts = st.cluster_tree().points_of(v);
      Eigen::MatrixXd vphi(v.size(), grids[i].num_nodes());
      for (Eigen::Index r = 0; r < v.size(); ++r)
        vphi.row(r) = grids[i].lagrange_at(pts.col(r)).transpose();
      bases.phi[i] = std::move(vphi);
      continue;
    }
    const Eigen::MatrixXd t1 = transfer_matrix(grids[i], grids[v.son1]);
    const Eigen::MatrixXd t2 = transfer_matrix(grids[i], grids[v.son2]);
    Eigen::MatrixXd stacked(st.Q(i).rows(), grids[i].num_nodes());
    stacked.topRows(bases.phi[v.son1].rows()) = bases.phi[v.son1] * t1;
    stacked.bottomRows(bases.phi[v.son2].rows()) = bases.phi[v.son2] * t2;
    Eigen::MatrixXd combined = st.Q(i).transpose() * stacked;
    bases.phi[i] = combined.topRows(sn.n_scaling);
    bases.sigma[i] = combined.bottomRows(sn.n_samplets);
  }
  return bases;
}

namespace {

// Column-sweep assembly state for the compressed kernel matrix.
struct Assembler {
  const SampletTree& st;
  const RadialFn& kernel;
  double eta;
  const std::vector<InterpolationGrid>& grids;
  const ClusterBases& bases;
  CompressionStats& stats;
  std::vector<Eigen::Triplet<double>> triplets;
  // Blocks with a leaf row cluster, keyed by (row, col) cluster ids; they
  // are consumed when the column's parent is assembled and freed afterwards.
  std::unordered_map<std::uint64_t, Eigen::MatrixXd> cache;
  std::vector<std::vector<std::uint64_t>> cache_keys_per_col;

  Assembler(const SampletTree& s, const RadialFn& k, double e,
            const std::vector<InterpolationGrid>& g, const ClusterBases& b,
            CompressionStats& st_)
      : st(s), kernel(k), eta(e), grids(g), bases(b), stats(st_) {
    cache_keys_per_col.resize(s.cluster_tree().num_nodes());
  }

  static std::uint64_t key(int row, int col) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(row)) << 32) |
           static_cast<std::uint32_t>(col);
  }

  const ClusterNode& cnode(int i) const { return st.cluster_tree().node(i); }

  bool admissible(int a, int b) const {
    return boxes_admissible(cnode(a).bbox, cnode(b).bbox, eta);
  }

  // [V^Phi_a; V^Sigma_a] S_{a,b} [V^Phi_b^T V^Sigma_b^T]
  Eigen::MatrixXd low_rank_block(int a, int b) {
    ++stats.blocks_lowrank;
    const Eigen::MatrixXd s = coupling_matrix(kernel, grids[a], grids[b]);
    const Eigen::Index ra = bases.phi[a].rows() + bases.sigma[a].rows();
    const Eigen::Index cb = bases.phi[b].rows() + bases.sigma[b].rows();
    Eigen::MatrixXd va(ra, s.rows());
    va.topRows(bases.phi[a].rows()) = bases.phi[a];
    va.bottomRows(bases.sigma[a].rows()) = bases.sigma[a];
    Eigen::MatrixXd vb(cb, s.cols());
    vb.topRows(bases.phi[b].rows()) = bases.phi[b];
    vb.bottomRows(bases.sigma[b].rows()) = bases.sigma[b];
    return va * s * vb.transpose();
  }

  // Kernel evaluations between two leaf point sets.
  Eigen::MatrixXd leaf_block(int a, int b) const {
    const auto pa = st.cluster_tree().points_of(cnode(a));
    const auto pb = st.cluster_tree().points_of(cnode(b));
    Eigen::MatrixXd out(pa.cols(), pb.cols());
    for (Eigen::Index j = 0; j < pb.cols(); ++j)
      for (Eigen::Index i = 0; i < pa.cols(); ++i)
        out(i, j) = kernel((pa.col(i) - pb.col(j)).norm());
    return out;
  }

  // Scatter the basis part of a block into the output triplets. Scaling
  // rows/columns contribute only for the root cluster, whose scaling
  // functions belong to the final basis.
  void store(int v, int vp, const Eigen::MatrixXd& block) {
    const SampletNode& rn = st.node(v);
    const SampletNode& cn = st.node(vp);
    std::vector<Eigen::Index> rows(block.rows(), -1);
    std::vector<Eigen::Index> cols(block.cols(), -1);
    if (v == 0)
      for (int i = 0; i < rn.n_scaling; ++i) rows[i] = i;
    for (int i = 0; i < rn.n_samplets; ++i)
      rows[rn.n_scaling + i] = rn.start_index + i;
    if (vp == 0)
      for (int i = 0; i < cn.n_scaling; ++i) cols[i] = i;
    for (int i = 0; i < cn.n_samplets; ++i)
      cols[cn.n_scaling + i] = cn.start_index + i;
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
      if (cols[j] < 0) continue;
      for (Eigen::Index i = 0; i < block.rows(); ++i)
        if (rows[i] >= 0)
          triplets.emplace_back(rows[i], cols[j], block(i, j));
    }
  }

  // Block column for row cluster v against column cluster vp; (v, vp) is
  // non-admissible. Returns [[Phi x Phi, Phi x Sigma], [Sigma x Phi,
  // Sigma x Sigma]] with leaf clusters contributing Dirac rows/columns.
  Eigen::MatrixXd setup_row(int v, int vp) {
    ++stats.blocks_exact;
    const ClusterNode& rv = cnode(v);
    const ClusterNode& cv = cnode(vp);
    Eigen::MatrixXd block;
    if (!rv.is_leaf()) {
      const int s1 = rv.son1, s2 = rv.son2;
      Eigen::MatrixXd b1 = admissible(s1, vp) ? low_rank_block(s1, vp)
                                              : setup_row(s1, vp);
      Eigen::MatrixXd b2 = admissible(s2, vp) ? low_rank_block(s2, vp)
                                              : setup_row(s2, vp);
      const Eigen::Index r1 = st.node(s1).n_scaling;
      const Eigen::Index r2 = st.node(s2).n_scaling;
      Eigen::MatrixXd stacked(r1 + r2, b1.cols());
      stacked.topRows(r1) = b1.topRows(r1);
      stacked.bottomRows(r2) = b2.topRows(r2);
      block = st.Q(v).transpose() * stacked;
    } else if (cv.is_leaf()) {
      block = leaf_block(v, vp);
    } else {
      const int s1 = cv.son1, s2 = cv.son2;
      Eigen::MatrixXd b1, b2;
      if (admissible(v, s1)) {
        b1 = low_rank_block(v, s1);
      } else {
        auto it = cache.find(key(v, s1));
        if (it == cache.end())
          throw std::logic_error("compress: missing cached block");
        b1 = it->second;
      }
      if (admissible(v, s2)) {
        b2 = low_rank_block(v, s2);
      } else {
        auto it = cache.find(key(v, s2));
        if (it == cache.end())
          throw std::logic_error("compress: missing cached block");
        b2 = it->second;
      }
      const Eigen::Index c1 = st.node(s1).n_scaling;
      const Eigen::Index c2 = st.node(s2).n_scaling;
      Eigen::MatrixXd side(b1.rows(), c1 + c2);
      side.leftCols(c1) = b1.leftCols(c1);
      side.rightCols(c2) = b2.leftCols(c2);
      block = side * st.Q(vp);
    }

    store(v, vp, block);
    if (rv.is_leaf() && vp != 0) {
      cache[key(v, vp)] = block;
      cache_keys_per_col[vp].push_back(key(v, vp));
      stats.peak_cached_blocks = std::max(
          stats.peak_cached_blocks, static_cast<Eigen::Index>(cache.size()));
    }
    return block;
  }

  // Post-order column sweep; child columns are assembled before their
  // parent and their cached leaf-row blocks are released right after the
  // parent column is done.
  void setup_column(int vp) {
    const ClusterNode& cv = cnode(vp);
    if (!cv.is_leaf()) {
      setup_column(cv.son1);
      setup_column(cv.son2);
    }
    setup_row(0, vp);
    if (!cv.is_leaf()) {
      for (int son : {cv.son1, cv.son2}) {
        for (std::uint64_t k : cache_keys_per_col[son]) cache.erase(k);
        cache_keys_per_col[son].clear();
      }
    }
  }
};

}  // namespace

SparseSymMatrix compress(const SampletTree& st, const RadialFn& kernel,
                         double eta, int interp_order, double tau_comp,
                         CompressionStats* stats) {
  if (!(eta > 0.0)) throw std::invalid_argument("compress: eta must be > 0");
  if (interp_order < 1)
    throw std::invalid_argument("compress: interpolation order must be >= 1");
  const Eigen::Index n = st.size();

  const auto grids = cluster_grids(st, interp_order);
  const auto bases = compute_cluster_bases(st, grids);

  CompressionStats local;
  CompressionStats& s = stats ? *stats : local;
  s = CompressionStats{};
  Assembler assembler(st, kernel, eta, grids, bases, s);
  assembler.setup_column(0);

  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(assembler.triplets.begin(), assembler.triplets.end());
  SparseSymMatrix out(std::move(m));
  s.max_asymmetry = out.symmetry_defect();
  out.symmetrize();
  s.nnz_before_threshold = out.nnz();
  out.drop_small(tau_comp);
  s.nnz = out.nnz();
  return out;
}

Eigen::MatrixXd dense_compressed_oracle(const SampletTree& st,
                                        const RadialFn& kernel, double eta,
                                        Eigen::Index cap) {
  if (!(eta > 0.0))
    throw std::invalid_argument("dense_compressed_oracle: eta must be > 0");
  const Eigen::Index n = st.size();
  if (n > cap)
    throw std::invalid_argument("dense_compressed_oracle: N exceeds oracle cap");

  const Eigen::MatrixXd& pts = st.cluster_tree().points();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      K(i, j) = kernel((pts.col(i) - pts.col(j)).norm());
  // T is built against input point order; evaluate K in tree order and
  // conjugate by the permutation-free part only. Assemble T in tree order
  // directly by permuting columns.
  Eigen::MatrixXd t = st.dense_basis_matrix(cap);
  const auto& perm = st.cluster_tree().permutation();
  Eigen::MatrixXd t_tree(n, n);
  for (Eigen::Index i = 0; i < n; ++i) t_tree.col(i) = t.col(perm[i]);
  Eigen::MatrixXd result = t_tree * K * t_tree.transpose();

  const auto& owner = st.basis_owner();
  const auto& cnodes = st.cluster_tree().nodes();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (boxes_admissible(cnodes[owner[i]].bbox, cnodes[owner[j]].bbox, eta))
        result(i, j) = 0.0;
  return result;
}

}  // namespace sgp
