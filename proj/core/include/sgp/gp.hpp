// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_GP_HPP
#define SGP_GP_HPP

#include <Eigen/Dense>
#include <optional>

#include "sgp/compressor.hpp"
#include "sgp/kernels.hpp"
#include "sgp/random.hpp"
#include "sgp/samplet_tree.hpp"
#include "sgp/sparse_cholesky.hpp"

namespace sgp {

/// Affine target transform y -> (y - mean) / scale applied before training.
struct Normalizer {
  double mean = 0.0;
  double scale = 1.0;

  static Normalizer fit(const Eigen::VectorXd& y);
  Eigen::VectorXd normalize(const Eigen::VectorXd& y) const {
    return (y.array() - mean) / scale;
  }
  Eigen::VectorXd denormalize(const Eigen::VectorXd& y) const {
    return (y.array() * scale + mean).matrix();
  }
};

/// Samplet-compression settings of a GP model. Zero-valued fields resolve
/// to their defaults: interpolation order q + 2 and leaf threshold m_q.
struct CompressionConfig {
  int q = 3;
  double eta = 0.8;
  int interp_order = 0;
  double tau_comp = 0.0;
  int leaf_threshold = 0;
  bool augment_leaf_moments = false;

  int resolved_order() const { return interp_order > 0 ? interp_order : q + 2; }
  int resolved_leaf_threshold(int d) const {
    if (leaf_threshold > 0) return leaf_threshold;
    return std::max(2, monomial_dimension(q, d));
  }
};

struct AdamParams {
  double learning_rate = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  int n_steps = 0;
  AdamParams adam;
  int trace_probes = 50;
  std::uint64_t seed = 0;
  /// Indefiniteness policy: double sigma^2 up to this many times, then
  /// freeze it out of the optimization.
  int sigma2_escalation_max = 6;
  /// Alternative policy: raise sigma^2 to the smallest positive integer
  /// that makes the compressed system positive definite.
  bool integer_sigma2_search = false;
  bool optimize_sigma2 = true;
  /// Exact trace term (dense solves) instead of the Hutchinson estimate.
  bool exact_trace = false;
  /// Reuse one probe block across steps instead of redrawing per step.
  bool reuse_probes = false;
};

/// Trained samplet GP: hyperparameters, samplet tree, Cholesky factor of
/// K^Sigma_eta + sigma^2 I and the fitted coefficients. Immutable after
/// training; concurrent predict calls are safe.
class GPModel {
 public:
  GPModel(Hyperparameters hyper, double nu, SampletTree st,
          SparseSymMatrix k_compressed, CholeskyFactor factor,
          Eigen::VectorXd ctilde, Eigen::VectorXd ctilde_samplet,
          Normalizer normalizer, PointCloud train_points,
          CompressionConfig compression, double log_likelihood,
          int sigma2_escalations)
      : hyper_(hyper),
        nu_(nu),
        st_(std::move(st)),
        k_(std::move(k_compressed)),
        factor_(std::move(factor)),
        ctilde_(std::move(ctilde)),
        ctilde_samplet_(std::move(ctilde_samplet)),
        normalizer_(normalizer),
        train_points_(std::move(train_points)),
        compression_(compression),
        log_likelihood_(log_likelihood),
        sigma2_escalations_(sigma2_escalations) {}

  const Hyperparameters& hyper() const { return hyper_; }
  double nu() const { return nu_; }
  MaternKernel kernel() const {
    return MaternKernel(nu_, hyper_.ell, hyper_.s2);
  }
  const SampletTree& samplet_tree() const { return st_; }
  const SparseSymMatrix& compressed_kernel() const { return k_; }
  const CholeskyFactor& factor() const { return factor_; }
  /// Fitted coefficients c~ in input point order.
  const Eigen::VectorXd& ctilde() const { return ctilde_; }
  /// T c~, the coefficients in the samplet basis.
  const Eigen::VectorXd& ctilde_samplet() const { return ctilde_samplet_; }
  const Normalizer& normalizer() const { return normalizer_; }
  const PointCloud& train_points() const { return train_points_; }
  const CompressionConfig& compression() const { return compression_; }
  /// Log marginal likelihood of the training targets, stored at the end of
  /// training (normalized scale).
  double stored_log_likelihood() const { return log_likelihood_; }
  int sigma2_escalations() const { return sigma2_escalations_; }

 private:
  Hyperparameters hyper_;
  double nu_;
  SampletTree st_;
  SparseSymMatrix k_;
  CholeskyFactor factor_;
  Eigen::VectorXd ctilde_;
  Eigen::VectorXd ctilde_samplet_;
  Normalizer normalizer_;
  PointCloud train_points_;
  CompressionConfig compression_;
  double log_likelihood_;
  int sigma2_escalations_;
};

/// c~ = T^{-1} (L L^T)^{-1} T y for a factor built on the same tree.
Eigen::VectorXd solve_perturbed_system(const CholeskyFactor& factor,
                                       const SampletTree& st,
                                       const Eigen::VectorXd& y);

/// -1/2 y^T c~ - sum_i log L_ii - (N/2) log 2 pi evaluated with the model's
/// samplet quantities; y is on the model's normalized scale.
double log_marginal_likelihood(const GPModel& model, const Eigen::VectorXd& y);

/// Samplet-approximated likelihood gradient over (ell, s2, sigma2) in
/// natural scale. The quadratic term is exact given c~; the trace term uses
/// t Hutchinson probes from rng, or dense solves when exact_trace is set.
Eigen::Vector3d likelihood_gradient(const GPModel& model,
                                    const Eigen::VectorXd& y,
                                    RandomSource& rng, int t = 50,
                                    bool exact_trace = false);

/// Samplet-accelerated GP training: normalizes the targets, builds the
/// samplet tree once, then per step recompresses the kernel, factorizes,
/// solves and applies an Adam update on the log-hyperparameters with box
/// projection. On factorization breakdown sigma^2 escalates per the config.
GPModel train(const PointCloud& points, const Eigen::VectorXd& y,
              const MaternKernel& kernel_template, double sigma2_init,
              const TrainConfig& cfg, const CompressionConfig& compression,
              const Hyperparameters& bounds_template = Hyperparameters{});

/// Posterior mean (denormalized) and covariance (scaled by the squared
/// normalizer scale) at the prediction points.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> predict(const GPModel& model,
                                                    const PointCloud& x_pred);

/// sqrt( sum (truth - pred)^2 / sum truth^2 ).
double relative_l2_error(const Eigen::VectorXd& truth,
                         const Eigen::VectorXd& pred);

}  // namespace sgp

#endif  // SGP_GP_HPP
