// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_BAYESOPT_HPP
#define SGP_BAYESOPT_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "sgp/gp.hpp"

namespace sgp {

struct BOConfig {
  int n0 = 600;                  //!< total evaluation budget
  double gamma = 0.1;            //!< variance-filter fraction in (0, 1]
  int batch_size = 100;          //!< observations between model refreshes
  int candidates_per_round = 0;  //!< 0 resolves to 100 * d
  std::uint64_t seed = 0;
  double nu = 2.5;
  Hyperparameters init_hyper;    //!< starting values and bounds
  /// Dense exact GP (single-leaf tree) is used while N <= dense_threshold;
  /// beyond it the samplet-compressed pipeline takes over.
  int dense_threshold = 10000;
  TrainConfig train;
  CompressionConfig compression;

  int resolved_candidates(int d) const {
    return candidates_per_round > 0 ? candidates_per_round : 100 * d;
  }
};

struct BOStep {
  int step;
  Eigen::VectorXd x;
  double y;
  double best_so_far;
  bool retrained;
};

struct BOResult {
  Eigen::VectorXd x_best;
  double y_best;
  std::vector<BOStep> history;
};

/// Black-box evaluation failure carrying the history accumulated so far.
class BlackBoxFailure : public std::runtime_error {
 public:
  BlackBoxFailure(const std::string& what, std::vector<BOStep> partial)
      : std::runtime_error(what), history(std::move(partial)) {}
  std::vector<BOStep> history;
};

/// Draw m' + L eps with L L^T = cov. Jitter is escalated from
/// 1e-10 * jitter_ref by factors of 10 up to 1e-4 * jitter_ref when the
/// dense factorization fails; a zero covariance returns the mean exactly.
Eigen::VectorXd thompson_sample(const Eigen::VectorXd& mean,
                                const Eigen::MatrixXd& cov, RandomSource& rng,
                                double jitter_ref = 1.0);

/// Indices of candidates whose posterior variance is at least
/// gamma * max variance; never empty (falls back to the argmax candidate).
/// Negative variances are clamped to zero first.
std::vector<int> gamma_filter(const Eigen::VectorXd& posterior_var,
                              double gamma);

/// Thompson-sampling Bayesian optimization of a black-box function on
/// [0,1]^d with gamma-stabilized candidate filtering. The model is
/// refreshed every batch_size observations with warm-started
/// hyperparameters; the final point maximizes the posterior mean.
BOResult run_bo(const std::function<double(const Eigen::VectorXd&)>& black_box,
                int dim, const BOConfig& cfg);

}  // namespace sgp

#endif  // SGP_BAYESOPT_HPP
