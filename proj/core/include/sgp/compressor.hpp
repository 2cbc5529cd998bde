// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_COMPRESSOR_HPP
#define SGP_COMPRESSOR_HPP

#include <Eigen/Dense>
#include <vector>

#include "sgp/interpolation.hpp"
#include "sgp/samplet_tree.hpp"
#include "sgp/sparse_matrix.hpp"

namespace sgp {

/// Multiscale cluster basis matrices: for each cluster v the Lagrange
/// moments V^Phi_v (n_scaling x n^d) of its scaling functions and
/// V^Sigma_v (n_samplets x n^d) of its samplets.
struct ClusterBases {
  std::vector<Eigen::MatrixXd> phi;
  std::vector<Eigen::MatrixXd> sigma;
};

/// Bottom-up recursion over the transfer matrices; leaf bases are direct
/// Lagrange evaluations at the leaf points.
ClusterBases compute_cluster_bases(const SampletTree& st,
                                   const std::vector<InterpolationGrid>& grids);

/// Interpolation grids (one per cluster) of tensor Chebyshev points on the
/// cluster bounding boxes.
std::vector<InterpolationGrid> cluster_grids(const SampletTree& st, int n);

struct CompressionStats {
  Eigen::Index nnz = 0;
  Eigen::Index nnz_before_threshold = 0;
  double max_asymmetry = 0.0;            //!< |A - A^T| before symmetrization
  Eigen::Index blocks_exact = 0;         //!< non-admissible blocks visited
  Eigen::Index blocks_lowrank = 0;       //!< transient low-rank evaluations
  Eigen::Index peak_cached_blocks = 0;   //!< memory guard statistic
};

/// Compressed kernel matrix K^Sigma_eta assembled directly in the samplet
/// basis: entries of non-admissible cluster pairs are computed by the exact
/// refinement recursion from leaf-level kernel evaluations; admissible
/// blocks encountered during the recursion are evaluated transiently as
/// V S V^T over the tensor Chebyshev grids and never stored. After assembly
/// off-diagonal entries with |value| < tau_comp are dropped. The root's
/// scaling rows and columns are part of the output alongside the samplet
/// entries. Cost and storage are O(N log N) on quasi-uniform points.
SparseSymMatrix compress(const SampletTree& st, const RadialFn& kernel,
                         double eta, int interp_order, double tau_comp,
                         CompressionStats* stats = nullptr);

/// Brute-force oracle: forms T K T^T densely and zeroes every entry whose
/// row and column basis functions live on an admissible cluster pair.
/// Rejects N above the cap.
Eigen::MatrixXd dense_compressed_oracle(const SampletTree& st,
                                        const RadialFn& kernel, double eta,
                                        Eigen::Index cap = 2048);

}  // namespace sgp

#endif  // SGP_COMPRESSOR_HPP
