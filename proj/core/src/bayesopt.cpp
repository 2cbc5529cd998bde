// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/bayesopt.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <optional>

namespace sgp {

Eigen::VectorXd thompson_sample(const Eigen::VectorXd& mean,
                                const Eigen::MatrixXd& cov, RandomSource& rng,
                                double jitter_ref) {
  if (mean.size() != cov.rows() || cov.rows() != cov.cols())
    throw std::invalid_argument("thompson_sample: dimension mismatch");
  if (cov.cwiseAbs().maxCoeff() == 0.0) return mean;
  const Eigen::VectorXd eps = rng.normal_vector(mean.size());
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success)
    return mean + llt.matrixL() * eps;
  for (double jitter = 1e-10 * jitter_ref; jitter <= 1e-4 * jitter_ref;
       jitter *= 10.0) {
    Eigen::MatrixXd shifted = cov;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) return mean + llt.matrixL() * eps;
  }
  throw std::runtime_error("thompson_sample: covariance factorization failed");
}

std::vector<int> gamma_filter(const Eigen::VectorXd& posterior_var,
                              double gamma) {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("gamma_filter: gamma must be in (0, 1]");
  const Eigen::VectorXd var = posterior_var.cwiseMax(0.0);
  const double vmax = var.maxCoeff();
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < var.size(); ++i)
    if (var[i] >= gamma * vmax) keep.push_back(static_cast<int>(i));
  if (keep.empty()) {
    Eigen::Index imax = 0;
    var.maxCoeff(&imax);
    keep.push_back(static_cast<int>(imax));
  }
  return keep;
}

namespace {

// Exact GP below the density threshold is realized as a single-leaf tree:
// the compression becomes the identity conjugation and all solves are
// numerically dense.
CompressionConfig backend_compression(const BOConfig& cfg, Eigen::Index n) {
  CompressionConfig comp = cfg.compression;
  if (n <= cfg.dense_threshold) {
    comp.leaf_threshold = static_cast<int>(n) + 1;
    comp.tau_comp = 0.0;
  }
  return comp;
}

}  // namespace

BOResult run_bo(const std::function<double(const Eigen::VectorXd&)>& black_box,
                int dim, const BOConfig& cfg) {
  if (cfg.n0 < 2) throw std::invalid_argument("run_bo: budget must be >= 2");
  if (dim < 1) throw std::invalid_argument("run_bo: dim must be >= 1");

  RandomSource rng(cfg.seed);
  const int m = cfg.resolved_candidates(dim);
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  std::vector<BOStep> history;
  double best = -std::numeric_limits<double>::infinity();

  Hyperparameters hyper = cfg.init_hyper;
  std::optional<GPModel> model;

  const auto evaluate = [&](const Eigen::VectorXd& x, bool retrained) {
    double y;
    try {
      y = black_box(x);
    } catch (const std::exception& e) {
      throw BlackBoxFailure(e.what(), history);
    }
    xs.push_back(x);
    ys.push_back(y);
    best = std::max(best, y);
    history.push_back({static_cast<int>(xs.size()), x, y, best, retrained});
  };

  const auto refresh_model = [&]() {
    const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd pts(dim, n);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      pts.col(i) = xs[i];
      y[i] = ys[i];
    }
    const MaternKernel k(cfg.nu, hyper.ell, hyper.s2);
    model = train(PointCloud(pts), y, k, hyper.sigma2, cfg.train,
                  backend_compression(cfg, n), hyper);
    hyper = model->hyper();  // warm start for the next refresh
  };

  for (int i = 1; i <= cfg.n0 - 1; ++i) {
    bool retrained = false;
    if (i % cfg.batch_size == 0 && xs.size() >= 2) {
      refresh_model();
      retrained = true;
    }
    const Eigen::MatrixXd cand = rng.uniform_matrix(dim, m);
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    if (model) {
      std::tie(mean, cov) = predict(*model, PointCloud(cand));
    } else {
      // Prior process: zero mean, prior covariance.
      const MaternKernel k(cfg.nu, hyper.ell, hyper.s2);
      const PointCloud cloud(cand);
      mean = Eigen::VectorXd::Zero(m);
      cov = kernel_matrix(k, cloud, cloud);
    }
    const std::vector<int> keep =
        gamma_filter(cov.diagonal(), cfg.gamma);
    const Eigen::VectorXd a = thompson_sample(mean, cov, rng, hyper.s2);
    int pick = keep.front();
    for (int idx : keep)
      if (a[idx] > a[pick]) pick = idx;
    evaluate(cand.col(pick), retrained);
  }

  // Final point: argmax of the posterior mean over fresh candidates. With
  // fewer than two observations the posterior degenerates to the zero-mean
  // prior and any candidate maximizes it.
  const bool final_trained = xs.size() >= 2;
  if (final_trained) refresh_model();
  const Eigen::MatrixXd cand = rng.uniform_matrix(dim, m);
  Eigen::Index imax = 0;
  if (final_trained) {
    const auto [mean, cov] = predict(*model, PointCloud(cand));
    mean.maxCoeff(&imax);
  }
  evaluate(cand.col(imax), final_trained);

  BOResult result;
  std::size_t ibest = 0;
  for (std::size_t i = 1; i < ys.size(); ++i)
    if (ys[i] > ys[ibest]) ibest = i;
  result.x_best = xs[ibest];
  result.y_best = ys[ibest];
  result.history = std::move(history);
  return result;
}

}  // namespace sgp
