// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
//
// Command line front end: dataset ingestion, compression benchmarks, GP
// training/prediction, Bayesian optimization runs and artifact export.
#include <CLI11.hpp>
#include <Eigen/Dense>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "sgp/bayesopt.hpp"
#include "sgp/compressor.hpp"
#include "sgp/gp.hpp"
#include "sgp/io.hpp"
#include "sgp/mesh_metrics.hpp"
#include "sgp/test_functions.hpp"

namespace {

using json = nlohmann::json;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string config_path;
  int threads = 1;
  Eigen::Index oracle_cap = 2048;
};

struct KernelOptions {
  double nu = 1.5;
  double ell = 1.0;
  double s2 = 1.0;
  double sigma2 = 1.0;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Equispaced cell-center grid with m^2 points in (0,1)^2.
Eigen::MatrixXd unit_grid_2d(int m) {
  Eigen::MatrixXd pts(2, static_cast<Eigen::Index>(m) * m);
  Eigen::Index c = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      pts.col(c++) << (i + 0.5) / m, (j + 0.5) / m;
  return pts;
}

// Stochastic relative Frobenius error |K^S - K^S_eta|_F / |K|_F via
// Gaussian probes of the residual operator.
double relative_compression_error(const sgp::SampletTree& st,
                                  const sgp::MaternKernel& k,
                                  const sgp::SparseSymMatrix& ks, int probes,
                                  std::uint64_t seed) {
  const Eigen::Index n = st.size();
  const Eigen::MatrixXd& pts = st.cluster_tree().points();
  Eigen::MatrixXd kdense;
  const bool dense_ok = n <= 4096;
  if (dense_ok) {
    kdense.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        kdense(i, j) = k((pts.col(i) - pts.col(j)).norm());
  }
  sgp::RandomSource rng(seed);
  double num = 0.0, den = 0.0;
  const auto& perm = st.cluster_tree().permutation();
  for (int p = 0; p < probes; ++p) {
    const Eigen::VectorXd z = rng.normal_vector(n);
    // K^Sigma z = T K T^T z computed through the transforms.
    const Eigen::VectorXd tz = st.inverse_transform(z);
    Eigen::VectorXd ktz(n);
    if (dense_ok) {
      Eigen::VectorXd tz_tree(n);
      for (Eigen::Index i = 0; i < n; ++i) tz_tree[i] = tz[perm[i]];
      Eigen::VectorXd tmp = kdense * tz_tree;
      for (Eigen::Index i = 0; i < n; ++i) ktz[perm[i]] = tmp[i];
    } else {
      ktz.setZero();
      Eigen::VectorXd tz_tree(n);
      for (Eigen::Index i = 0; i < n; ++i) tz_tree[i] = tz[perm[i]];
      Eigen::VectorXd tmp(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
          acc += k((pts.col(i) - pts.col(j)).norm()) * tz_tree[j];
        tmp[i] = acc;
      }
      for (Eigen::Index i = 0; i < n; ++i) ktz[perm[i]] = tmp[i];
    }
    const Eigen::VectorXd exact = st.forward_transform(ktz);
    const Eigen::VectorXd approx = ks.apply(z);
    num += (exact - approx).squaredNorm();
    den += exact.squaredNorm();
  }
  return std::sqrt(num / den);
}

int cmd_compress(const GlobalOptions& g, const KernelOptions& kopt, int npts,
                 const std::string& grid, const std::string& csv,
                 const std::string& target, int q, double eta, double tau_comp,
                 int ip_order, const std::string& out_path, int error_probes) {
  Eigen::MatrixXd pts;
  if (!csv.empty()) {
    const sgp::Dataset ds = sgp::ingest_csv(csv, target);
    pts = ds.features;
  } else if (grid == "2d") {
    const int m = static_cast<int>(std::lround(std::sqrt(double(npts))));
    pts = unit_grid_2d(m);
  } else {
    sgp::RandomSource rng(g.seed);
    pts = rng.uniform_matrix(2, npts);
  }
  const sgp::PointCloud cloud(pts);
  const int d = static_cast<int>(cloud.dim());
  sgp::CompressionConfig comp;
  comp.q = q;
  comp.eta = eta;
  comp.tau_comp = tau_comp;
  comp.interp_order = ip_order;

  const double t0 = now_seconds();
  sgp::ClusterTree tree =
      sgp::build_cluster_tree(cloud, comp.resolved_leaf_threshold(d));
  sgp::SampletTree st = sgp::build_samplet_tree(std::move(tree), q);
  const double t1 = now_seconds();
  const sgp::MaternKernel kernel(kopt.nu, kopt.ell, kopt.s2);
  sgp::CompressionStats stats;
  sgp::SparseSymMatrix ks =
      sgp::compress(st, [&kernel](double r) { return kernel(r); }, eta,
                    comp.resolved_order(), tau_comp, &stats);
  const double t2 = now_seconds();

  json report{{"n", cloud.size()},
              {"d", d},
              {"q", q},
              {"eta", eta},
              {"tau_comp", tau_comp},
              {"interp_order", comp.resolved_order()},
              {"nnz", stats.nnz},
              {"nnz_lower", sgp::lower_nnz(ks)},
              {"nnz_per_point", double(stats.nnz) / double(cloud.size())},
              {"max_asymmetry", stats.max_asymmetry},
              {"setup_seconds", t1 - t0},
              {"compress_seconds", t2 - t1}};
  if (error_probes > 0) {
    report["rel_frobenius_error"] =
        relative_compression_error(st, kernel, ks, error_probes, g.seed);
  }
  if (cloud.size() <= g.oracle_cap) {
    const Eigen::MatrixXd oracle = sgp::dense_compressed_oracle(
        st, [&kernel](double r) { return kernel(r); }, eta, g.oracle_cap);
    double max_dev = 0.0;
    for (int col = 0; col < ks.matrix().outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(ks.matrix(), col); it;
           ++it)
        max_dev = std::max(max_dev,
                           std::abs(it.value() - oracle(it.row(), it.col())));
    report["max_oracle_deviation"] = max_dev;
  }
  if (!out_path.empty()) {
    sgp::export_sparse(ks, out_path);
    report["exported"] = out_path;
  }
  std::cout << report.dump(2) << std::endl;
  return 0;
}

int cmd_transform(const std::string& csv, const std::string& column,
                  bool inverse, int q, const std::string& out_path) {
  const sgp::Dataset ds = sgp::ingest_csv(csv, column);
  const sgp::PointCloud cloud(ds.features);
  sgp::CompressionConfig comp;
  comp.q = q;
  sgp::ClusterTree tree = sgp::build_cluster_tree(
      cloud, comp.resolved_leaf_threshold(static_cast<int>(cloud.dim())));
  sgp::SampletTree st = sgp::build_samplet_tree(std::move(tree), q);
  const Eigen::VectorXd out = inverse ? st.inverse_transform(ds.targets)
                                      : st.forward_transform(ds.targets);
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("transform: cannot open " + out_path);
  f.precision(17);
  for (const std::string& name : ds.feature_names) f << name << ",";
  f << ds.target_name << "\n";
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    for (Eigen::Index j = 0; j < ds.features.rows(); ++j)
      f << ds.features(j, i) << ",";
    f << out[i] << "\n";
  }
  std::cout << "wrote " << out_path << " (" << out.size() << " rows)"
            << std::endl;
  return 0;
}

int cmd_train(const GlobalOptions& g, const KernelOptions& kopt,
              const std::string& csv, const std::string& target, int q,
              double eta, double tau_comp, int n_steps, int probes,
              const std::string& checkpoint) {
  const sgp::Dataset ds = sgp::ingest_csv(csv, target);
  const sgp::PointCloud cloud(ds.features);
  sgp::CompressionConfig comp;
  comp.q = q;
  comp.eta = eta;
  comp.tau_comp = tau_comp;
  sgp::TrainConfig cfg;
  cfg.n_steps = n_steps;
  cfg.trace_probes = probes;
  cfg.seed = g.seed;
  const sgp::MaternKernel kernel(kopt.nu, kopt.ell, kopt.s2);
  const sgp::GPModel model =
      sgp::train(cloud, ds.targets, kernel, kopt.sigma2, cfg, comp);
  json report{{"n", cloud.size()},
              {"log_likelihood", model.stored_log_likelihood()},
              {"ell", model.hyper().ell},
              {"s2", model.hyper().s2},
              {"sigma2", model.hyper().sigma2},
              {"sigma2_escalations", model.sigma2_escalations()},
              {"dropped_rows", ds.dropped_rows}};
  if (!checkpoint.empty()) {
    sgp::save_checkpoint(model, checkpoint);
    report["checkpoint"] = checkpoint;
  }
  std::cout << report.dump(2) << std::endl;
  return 0;
}

int cmd_predict(const std::string& checkpoint, const std::string& csv,
                const std::string& target, const std::string& out_path,
                bool with_variance) {
  const sgp::GPModel model = sgp::load_checkpoint(checkpoint);
  const sgp::Dataset ds = sgp::ingest_csv(csv, target);
  const sgp::PointCloud points(ds.features);
  const auto [mean, cov] = sgp::predict(model, points);
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("predict: cannot open " + out_path);
  f.precision(17);
  f << "prediction";
  if (with_variance) f << ",variance";
  f << "\n";
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    f << mean[i];
    if (with_variance) f << "," << cov(i, i);
    f << "\n";
  }
  const double err = sgp::relative_l2_error(ds.targets, mean);
  json report{{"n_pred", mean.size()},
              {"relative_l2_error_vs_target", err},
              {"out", out_path}};
  std::cout << report.dump(2) << std::endl;
  return 0;
}

int cmd_bench(const GlobalOptions& g, const KernelOptions& kopt,
              const std::vector<int>& sizes, int q, double eta,
              double tau_comp, const std::string& out_path) {
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("bench: cannot open " + out_path);
  f << "n,nnz,build_seconds,compress_seconds,factor_seconds,solve_seconds,"
       "rel_error\n";
  const sgp::MaternKernel kernel(kopt.nu, kopt.ell, kopt.s2);
  for (int npts : sizes) {
    const int m = static_cast<int>(std::lround(std::sqrt(double(npts))));
    const sgp::PointCloud cloud(unit_grid_2d(m));
    sgp::CompressionConfig comp;
    comp.q = q;
    comp.eta = eta;
    comp.tau_comp = tau_comp;
    const double t0 = now_seconds();
    sgp::ClusterTree tree = sgp::build_cluster_tree(
        cloud, comp.resolved_leaf_threshold(2));
    sgp::SampletTree st = sgp::build_samplet_tree(std::move(tree), q);
    const double t1 = now_seconds();
    sgp::CompressionStats stats;
    sgp::SparseSymMatrix ks =
        sgp::compress(st, [&kernel](double r) { return kernel(r); }, eta,
                      comp.resolved_order(), tau_comp, &stats);
    const double t2 = now_seconds();
    const sgp::CholeskyFactor factor = sgp::sparse_cholesky(ks, kopt.sigma2);
    const double t3 = now_seconds();
    sgp::RandomSource rng(g.seed);
    const Eigen::VectorXd y = rng.normal_vector(cloud.size());
    const Eigen::VectorXd c = sgp::solve_perturbed_system(factor, st, y);
    const double t4 = now_seconds();
    const double err =
        relative_compression_error(st, kernel, ks, 10, g.seed);
    f << cloud.size() << "," << stats.nnz << "," << (t1 - t0) << ","
      << (t2 - t1) << "," << (t3 - t2) << "," << (t4 - t3) << "," << err
      << "\n";
    f.flush();
    std::cout << "n=" << cloud.size() << " nnz=" << stats.nnz
              << " compress=" << (t2 - t1) << "s factor=" << (t3 - t2)
              << "s rel_error=" << err << std::endl;
  }
  return 0;
}

int cmd_bo(const GlobalOptions& g, const KernelOptions& kopt,
           const std::string& function, int n0, double gamma, int batch,
           int candidates, int n_steps, const std::string& history_path) {
  sgp::BOConfig cfg;
  cfg.n0 = n0;
  cfg.gamma = gamma;
  cfg.batch_size = batch;
  cfg.candidates_per_round = candidates;
  cfg.seed = g.seed;
  cfg.nu = kopt.nu;
  cfg.init_hyper.ell = kopt.ell;
  cfg.init_hyper.s2 = kopt.s2;
  cfg.init_hyper.sigma2 = kopt.sigma2;
  cfg.train.n_steps = n_steps;
  cfg.train.seed = g.seed;

  int dim = 2;
  std::function<double(const Eigen::VectorXd&)> f;
  if (function == "ackley2d") {
    dim = 2;
    f = [](const Eigen::VectorXd& u) {
      return sgp::neg_ackley2(10.0 * u[0] - 5.0, 10.0 * u[1] - 5.0);
    };
  } else if (function.rfind("rastrigin", 0) == 0) {
    dim = function.back() == 'd' && function.size() > 9
              ? function[function.size() - 2] - '0'
              : 2;
    f = [dim](const Eigen::VectorXd& u) {
      Eigen::VectorXd x = 10.24 * u.array() - 5.12;
      return -sgp::rastrigin(x);  // maximize the negative
    };
  } else {
    std::cerr << "unknown function '" << function
              << "' (expected ackley2d, rastrigin1d/2d/3d)" << std::endl;
    return 2;
  }

  const sgp::BOResult result = sgp::run_bo(f, dim, cfg);
  if (!history_path.empty()) sgp::write_history(result.history, history_path);
  json report{{"function", function},
              {"n0", n0},
              {"gamma", gamma},
              {"y_best", result.y_best},
              {"x_best", std::vector<double>(
                             result.x_best.data(),
                             result.x_best.data() + result.x_best.size())}};
  if (!history_path.empty()) report["history"] = history_path;
  std::cout << report.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"samplet-based Gaussian process toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--threads", g.threads, "dense linear algebra threads");
  app.add_option("--oracle-cap", g.oracle_cap,
                 "largest N for dense oracle cross-checks");

  KernelOptions kopt;

  // compress
  auto* c = app.add_subcommand("compress",
                               "build tree + basis, compress, report stats");
  int c_n = 10000;
  std::string c_grid = "2d", c_csv, c_target = "y", c_out;
  int c_q = 3, c_ip = 0, c_probes = 0;
  double c_eta = 0.8, c_tau = 0.0;
  c->add_option("--n", c_n, "number of grid points");
  c->add_option("--grid", c_grid, "point generator: 2d|random");
  c->add_option("--csv", c_csv, "CSV input instead of a generated grid");
  c->add_option("--target", c_target, "target column of the CSV");
  c->add_option("--q", c_q, "vanishing moments");
  c->add_option("--eta", c_eta, "admissibility parameter");
  c->add_option("--tau-comp", c_tau, "a-posteriori threshold");
  c->add_option("--ip-order", c_ip, "interpolation order (default q+2)");
  c->add_option("--nu", kopt.nu, "Matern smoothness");
  c->add_option("--ell", kopt.ell, "length scale");
  c->add_option("--s2", kopt.s2, "signal variance");
  c->add_option("--out", c_out, "Matrix Market output path");
  c->add_option("--error-probes", c_probes,
                "stochastic Frobenius error probes (0 = skip)");

  // transform
  auto* t = app.add_subcommand("transform",
                               "forward/inverse samplet transform of a CSV column");
  std::string t_csv, t_col = "y", t_out = "transformed.csv";
  bool t_inv = false;
  int t_q = 3;
  t->add_option("--input", t_csv, "CSV input")->required();
  t->add_option("--column", t_col, "value column");
  t->add_option("--q", t_q, "vanishing moments");
  t->add_flag("--inverse", t_inv, "apply the inverse transform");
  t->add_option("--out", t_out, "output CSV");

  // train
  auto* tr = app.add_subcommand("train", "fit a samplet GP and checkpoint it");
  std::string tr_csv, tr_target = "y", tr_ckpt;
  int tr_q = 3, tr_steps = 10, tr_probes = 50;
  double tr_eta = 0.8, tr_tau = 0.0;
  tr->add_option("--data", tr_csv, "training CSV")->required();
  tr->add_option("--target", tr_target, "target column");
  tr->add_option("--q", tr_q, "vanishing moments");
  tr->add_option("--eta", tr_eta, "admissibility parameter");
  tr->add_option("--tau-comp", tr_tau, "a-posteriori threshold");
  tr->add_option("--steps", tr_steps, "Adam steps");
  tr->add_option("--probes", tr_probes, "Hutchinson probes");
  tr->add_option("--nu", kopt.nu, "Matern smoothness");
  tr->add_option("--ell", kopt.ell, "initial length scale");
  tr->add_option("--s2", kopt.s2, "initial signal variance");
  tr->add_option("--sigma2", kopt.sigma2, "initial noise variance");
  tr->add_option("--checkpoint", tr_ckpt, "checkpoint JSON path");

  // predict
  auto* pr = app.add_subcommand("predict", "posterior mean/variance from a checkpoint");
  std::string pr_ckpt, pr_csv, pr_target = "y", pr_out = "predictions.csv";
  bool pr_var = false;
  pr->add_option("--checkpoint", pr_ckpt, "checkpoint JSON path")->required();
  pr->add_option("--data", pr_csv, "prediction CSV")->required();
  pr->add_option("--target", pr_target, "target column (for error report)");
  pr->add_option("--out", pr_out, "output CSV");
  pr->add_flag("--variance", pr_var, "also write posterior variances");

  // bench
  auto* b = app.add_subcommand("bench", "sweep N, emit timing/nnz/error CSV");
  std::vector<int> b_sizes{1024, 4096, 16384};
  int b_q = 3;
  double b_eta = 0.8, b_tau = 0.0;
  std::string b_out = "bench.csv";
  b->add_option("--sizes", b_sizes, "grid sizes to sweep");
  b->add_option("--q", b_q, "vanishing moments");
  b->add_option("--eta", b_eta, "admissibility parameter");
  b->add_option("--tau-comp", b_tau, "a-posteriori threshold");
  b->add_option("--nu", kopt.nu, "Matern smoothness");
  b->add_option("--ell", kopt.ell, "length scale");
  b->add_option("--s2", kopt.s2, "signal variance");
  b->add_option("--sigma2", kopt.sigma2, "noise shift for the factorization");
  b->add_option("--out", b_out, "output CSV");

  // bo
  auto* bo = app.add_subcommand("bo", "Bayesian optimization of a built-in function");
  std::string bo_fn = "ackley2d", bo_hist;
  int bo_n0 = 600, bo_batch = 100, bo_cand = 0, bo_steps = 2;
  double bo_gamma = 0.1;
  bo->add_option("--function", bo_fn, "ackley2d | rastrigin1d/2d/3d");
  bo->add_option("--n0", bo_n0, "evaluation budget");
  bo->add_option("--gamma", bo_gamma, "stabilization fraction");
  bo->add_option("--batch", bo_batch, "observations per model refresh");
  bo->add_option("--candidates", bo_cand, "candidates per round (default 100 d)");
  bo->add_option("--train-steps", bo_steps, "Adam steps per refresh");
  bo->add_option("--nu", kopt.nu, "Matern smoothness");
  bo->add_option("--history", bo_hist, "JSON-lines history output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message and usage
    return code == 0 ? 0 : 2;
  }

  Eigen::setNbThreads(g.threads);

  // CLI flags override config-file values; the config provides defaults.
  if (!g.config_path.empty()) {
    std::ifstream cf(g.config_path);
    if (!cf) {
      std::cerr << "cannot open config " << g.config_path << std::endl;
      return 2;
    }
    const json j = json::parse(cf, nullptr, false);
    if (j.is_discarded()) {
      std::cerr << "invalid JSON in " << g.config_path << std::endl;
      return 2;
    }
    const auto flag_given = [&](const std::string& name) {
      for (const CLI::App* sub : {c, t, tr, pr, b, bo})
        if (sub->count_all() > 0 && sub->get_option_no_throw(name) &&
            sub->count(name) > 0)
          return true;
      return false;
    };
    if (j.contains("nu") && !flag_given("--nu")) kopt.nu = j["nu"].get<double>();
    if (j.contains("ell") && !flag_given("--ell"))
      kopt.ell = j["ell"].get<double>();
    if (j.contains("s2") && !flag_given("--s2"))
      kopt.s2 = j["s2"].get<double>();
    if (j.contains("sigma2") && !flag_given("--sigma2"))
      kopt.sigma2 = j["sigma2"].get<double>();
    if (j.contains("seed") && !app.count("--seed"))
      g.seed = j["seed"].get<std::uint64_t>();
  }

  try {
    if (app.got_subcommand(c))
      return cmd_compress(g, kopt, c_n, c_grid, c_csv, c_target, c_q, c_eta,
                          c_tau, c_ip, c_out, c_probes);
    if (app.got_subcommand(t))
      return cmd_transform(t_csv, t_col, t_inv, t_q, t_out);
    if (app.got_subcommand(tr))
      return cmd_train(g, kopt, tr_csv, tr_target, tr_q, tr_eta, tr_tau,
                       tr_steps, tr_probes, tr_ckpt);
    if (app.got_subcommand(pr))
      return cmd_predict(pr_ckpt, pr_csv, pr_target, pr_out, pr_var);
    if (app.got_subcommand(b))
      return cmd_bench(g, kopt, b_sizes, b_q, b_eta, b_tau, b_out);
    if (app.got_subcommand(bo))
      return cmd_bo(g, kopt, bo_fn, bo_n0, bo_gamma, bo_batch, bo_cand,
                    bo_steps, bo_hist);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
