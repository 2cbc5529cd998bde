// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/gp.hpp"

#include <cmath>
#include <stdexcept>

#include "sgp/cluster_tree.hpp"
#include "sgp/trace.hpp"

namespace sgp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

struct FitState {
  SparseSymMatrix k;
  CholeskyFactor factor;
  int escalations = 0;
  bool frozen_sigma2 = false;
};

// Compress and factor K^Sigma_eta + sigma^2 I; escalates sigma^2 on
// indefiniteness per the configured policy.
FitState compress_and_factor(const SampletTree& st, const MaternKernel& k,
                             Hyperparameters& hyper,
                             const CompressionConfig& comp,
                             const TrainConfig& cfg) {
  FitState state;
  state.k = compress(st, [&k](double r) { return k(r); }, comp.eta,
                     comp.resolved_order(), comp.tau_comp);
  if (cfg.integer_sigma2_search) {
    try {
      state.factor = sparse_cholesky(state.k, hyper.sigma2);
      return state;
    } catch (const IndefiniteMatrix&) {
      for (double s2 = 1.0;; s2 += 1.0) {
        if (s2 > 1e6)
          throw std::runtime_error("train: integer sigma2 search exhausted");
        try {
          state.factor = sparse_cholesky(state.k, s2);
          hyper.sigma2 = s2;
          ++state.escalations;
          state.frozen_sigma2 = true;
          return state;
        } catch (const IndefiniteMatrix&) {
        }
      }
    }
  }
  for (int attempt = 0;; ++attempt) {
    try {
      state.factor = sparse_cholesky(state.k, hyper.sigma2);
      return state;
    } catch (const IndefiniteMatrix&) {
      if (attempt >= cfg.sigma2_escalation_max)
        throw std::runtime_error(
            "train: system stayed indefinite after sigma2 escalation");
      hyper.sigma2 *= 2.0;
      ++state.escalations;
      state.frozen_sigma2 = true;
    }
  }
}

// Exact tr((K + sigma^2 I)^{-1} D) via one solve per column.
double exact_trace_term(const CholeskyFactor& factor,
                        const SparseSymMatrix& d) {
  const Eigen::Index n = factor.dim();
  double tr = 0.0;
  Eigen::VectorXd col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    col = d.matrix().col(j);
    tr += factor.solve(col)[j];
  }
  return tr;
}

// Gradient over (ell, s2, sigma2) from precomputed solves. w = T c~,
// z/u hold the probes and their solves when the Hutchinson path is used.
Eigen::Vector3d gradient_from_state(
    const SampletTree& st, const MaternKernel& k, const SparseSymMatrix& ks,
    const CholeskyFactor& factor, const CompressionConfig& comp,
    const Eigen::VectorXd& w, const Eigen::MatrixXd& z,
    const Eigen::MatrixXd& u, bool exact_trace) {
  const Eigen::Index n = w.size();
  const SparseSymMatrix dk_dl =
      compress(st, [&k](double r) { return k.dlength(r); }, comp.eta,
               comp.resolved_order(), comp.tau_comp);
  const SparseSymMatrix dk_ds2 = ks.scaled(1.0 / k.s2());

  const auto trace_of = [&](const SparseSymMatrix& d) {
    if (exact_trace) return exact_trace_term(factor, d);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < z.cols(); ++i)
      acc += u.col(i).dot(d.apply(z.col(i)));
    return acc / static_cast<double>(z.cols());
  };

  Eigen::Vector3d g;
  g[0] = 0.5 * dk_dl.quad(w, w) - 0.5 * trace_of(dk_dl);
  g[1] = 0.5 * dk_ds2.quad(w, w) - 0.5 * trace_of(dk_ds2);
  // d/dsigma2 has the identity as derivative matrix.
  double tr_id;
  if (exact_trace) {
    tr_id = 0.0;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      e[j] = 1.0;
      tr_id += factor.solve(e)[j];
      e[j] = 0.0;
    }
  } else {
    tr_id = 0.0;
    for (Eigen::Index i = 0; i < z.cols(); ++i)
      tr_id += u.col(i).dot(z.col(i));
    tr_id /= static_cast<double>(z.cols());
  }
  g[2] = 0.5 * w.squaredNorm() - 0.5 * tr_id;
  return g;
}

}  // namespace

Normalizer Normalizer::fit(const Eigen::VectorXd& y) {
  Normalizer nz;
  nz.mean = y.mean();
  const double var =
      (y.array() - nz.mean).square().sum() / std::max<Eigen::Index>(1, y.size());
  nz.scale = var > 0.0 ? std::sqrt(var) : 1.0;
  return nz;
}

Eigen::VectorXd solve_perturbed_system(const CholeskyFactor& factor,
                                       const SampletTree& st,
                                       const Eigen::VectorXd& y) {
  return st.inverse_transform(factor.solve(st.forward_transform(y)));
}

double log_marginal_likelihood(const GPModel& model,
                               const Eigen::VectorXd& y) {
  const Eigen::VectorXd ty = model.samplet_tree().forward_transform(y);
  const Eigen::VectorXd w = model.factor().solve(ty);
  const double quad = ty.dot(w);
  return -0.5 * quad - 0.5 * model.factor().log_det() -
         0.5 * static_cast<double>(y.size()) * kLog2Pi;
}

Eigen::Vector3d likelihood_gradient(const GPModel& model,
                                    const Eigen::VectorXd& y,
                                    RandomSource& rng, int t,
                                    bool exact_trace) {
  const SampletTree& st = model.samplet_tree();
  const Eigen::VectorXd w = model.factor().solve(st.forward_transform(y));
  Eigen::MatrixXd z, u;
  if (!exact_trace) {
    z = rng.normal_matrix(st.size(), t);
    u = model.factor().solve(z);
  }
  return gradient_from_state(st, model.kernel(), model.compressed_kernel(),
                             model.factor(), model.compression(), w, z, u,
                             exact_trace);
}

GPModel train(const PointCloud& points, const Eigen::VectorXd& y,
              const MaternKernel& kernel_template, double sigma2_init,
              const TrainConfig& cfg, const CompressionConfig& compression,
              const Hyperparameters& bounds_template) {
  const Eigen::Index n = points.size();
  if (n < 2) throw std::invalid_argument("train: need N >= 2");
  if (y.size() != n) throw std::invalid_argument("train: y length mismatch");
  if (!y.allFinite()) throw std::invalid_argument("train: non-finite targets");

  const Normalizer nz = Normalizer::fit(y);
  const Eigen::VectorXd yn = nz.normalize(y);

  const int d = static_cast<int>(points.dim());
  ClusterTree tree = build_cluster_tree(
      points, compression.resolved_leaf_threshold(d));
  SampletTree st = build_samplet_tree(std::move(tree), compression.q,
                                      compression.augment_leaf_moments);
  const Eigen::VectorXd ty = st.forward_transform(yn);

  Hyperparameters hyper = bounds_template;
  hyper.ell = kernel_template.ell();
  hyper.s2 = kernel_template.s2();
  hyper.sigma2 = sigma2_init;
  const double nu = kernel_template.nu();

  RandomSource rng(cfg.seed);
  Eigen::Vector3d adam_m = Eigen::Vector3d::Zero();
  Eigen::Vector3d adam_v = Eigen::Vector3d::Zero();
  bool sigma2_frozen = !cfg.optimize_sigma2;
  int total_escalations = 0;
  Eigen::MatrixXd probes;

  for (int step = 0; step < cfg.n_steps; ++step) {
    MaternKernel k(nu, hyper.ell, hyper.s2);
    FitState state = compress_and_factor(st, k, hyper, compression, cfg);
    total_escalations += state.escalations;
    if (state.frozen_sigma2) sigma2_frozen = true;

    const Eigen::VectorXd w = state.factor.solve(ty);
    Eigen::MatrixXd u;
    if (!cfg.exact_trace) {
      if (probes.size() == 0 || !cfg.reuse_probes)
        probes = rng.normal_matrix(n, cfg.trace_probes);
      u = state.factor.solve(probes);
    }
    Eigen::Vector3d g =
        gradient_from_state(st, k, state.k, state.factor, compression, w,
                            probes, u, cfg.exact_trace);

    // Ascent on the log-parameters (chain rule d/dlog = theta d/dtheta),
    // maximizing the likelihood.
    Eigen::Vector3d theta(hyper.ell, hyper.s2, hyper.sigma2);
    Eigen::Vector3d g_log = g.cwiseProduct(theta);
    if (sigma2_frozen) g_log[2] = 0.0;

    const double t_count = static_cast<double>(step + 1);
    adam_m = cfg.adam.beta1 * adam_m + (1.0 - cfg.adam.beta1) * g_log;
    adam_v = cfg.adam.beta2 * adam_v +
             (1.0 - cfg.adam.beta2) * g_log.cwiseProduct(g_log);
    const Eigen::Vector3d m_hat =
        adam_m / (1.0 - std::pow(cfg.adam.beta1, t_count));
    const Eigen::Vector3d v_hat =
        adam_v / (1.0 - std::pow(cfg.adam.beta2, t_count));
    Eigen::Vector3d log_theta = theta.array().log();
    for (int i = 0; i < 3; ++i)
      log_theta[i] += cfg.adam.learning_rate * m_hat[i] /
                      (std::sqrt(v_hat[i]) + cfg.adam.epsilon);

    hyper.ell = std::exp(log_theta[0]);
    hyper.s2 = std::exp(log_theta[1]);
    if (!sigma2_frozen) hyper.sigma2 = std::exp(log_theta[2]);
    const double sigma2_before = hyper.sigma2;
    hyper.clamp();
    if (sigma2_frozen) hyper.sigma2 = sigma2_before;  // escalated value wins
  }

  MaternKernel k(nu, hyper.ell, hyper.s2);
  FitState state = compress_and_factor(st, k, hyper, compression, cfg);
  total_escalations += state.escalations;
  const Eigen::VectorXd w = state.factor.solve(ty);
  const Eigen::VectorXd ctilde = st.inverse_transform(w);
  const double loglik = -0.5 * ty.dot(w) - 0.5 * state.factor.log_det() -
                        0.5 * static_cast<double>(n) * kLog2Pi;

  return GPModel(hyper, nu, std::move(st), std::move(state.k),
                 std::move(state.factor), ctilde, w, nz, points, compression,
                 loglik, total_escalations);
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> predict(const GPModel& model,
                                                    const PointCloud& x_pred) {
  if (x_pred.dim() != model.train_points().dim())
    throw std::invalid_argument("predict: dimension mismatch");
  const MaternKernel k = model.kernel();
  const Eigen::MatrixXd k1 = kernel_matrix(k, x_pred, model.train_points());
  const Eigen::MatrixXd k2 = kernel_matrix(k, x_pred, x_pred);

  const Normalizer& nz = model.normalizer();
  const Eigen::VectorXd mean_n = k1 * model.ctilde();
  const Eigen::VectorXd mean = nz.denormalize(mean_n);

  // A~ = L \ (T K1^T), covariance K2 - A~^T A~ in normalized units.
  const SampletTree& st = model.samplet_tree();
  Eigen::MatrixXd tk1(st.size(), x_pred.size());
  for (Eigen::Index j = 0; j < x_pred.size(); ++j)
    tk1.col(j) = st.forward_transform(k1.row(j).transpose());
  const Eigen::MatrixXd a = model.factor().forward_substitute(tk1);
  Eigen::MatrixXd cov = k2 - a.transpose() * a;
  cov = 0.5 * (cov + cov.transpose()).eval();
  cov *= nz.scale * nz.scale;
  return {mean, cov};
}

double relative_l2_error(const Eigen::VectorXd& truth,
                         const Eigen::VectorXd& pred) {
  if (truth.size() != pred.size() || truth.size() < 1)
    throw std::invalid_argument("relative_l2_error: length mismatch");
  const double denom = truth.squaredNorm();
  if (denom == 0.0)
    throw std::invalid_argument("relative_l2_error: zero denominator");
  return std::sqrt((truth - pred).squaredNorm() / denom);
}

}  // namespace sgp
