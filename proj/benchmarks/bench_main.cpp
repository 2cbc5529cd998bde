// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <cstdint>

#include "sgp/compressor.hpp"
#include "sgp/gp.hpp"
#include "sgp/random.hpp"

namespace {

Eigen::MatrixXd unit_grid_2d(int m) {
  Eigen::MatrixXd pts(2, static_cast<Eigen::Index>(m) * m);
  Eigen::Index c = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) pts.col(c++) << (i + 0.5) / m, (j + 0.5) / m;
  return pts;
}

void bm_cluster_tree(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sgp::RandomSource rng(1);
  const Eigen::MatrixXd pts = rng.uniform_matrix(2, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sgp::build_cluster_tree(sgp::PointCloud(pts), 10));
  state.SetComplexityN(n);
}
BENCHMARK(bm_cluster_tree)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)
    ->Complexity(benchmark::oNLogN)->Unit(benchmark::kMillisecond);

void bm_samplet_basis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sgp::RandomSource rng(2);
  const Eigen::MatrixXd pts = rng.uniform_matrix(2, n);
  for (auto _ : state) {
    sgp::ClusterTree tree = sgp::build_cluster_tree(sgp::PointCloud(pts), 10);
    benchmark::DoNotOptimize(sgp::build_samplet_tree(std::move(tree), 3));
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_samplet_basis)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)
    ->Complexity(benchmark::oNLogN)->Unit(benchmark::kMillisecond);

void bm_forward_transform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sgp::RandomSource rng(3);
  const sgp::SampletTree st = sgp::build_samplet_tree(
      sgp::build_cluster_tree(sgp::PointCloud(rng.uniform_matrix(2, n)), 10),
      3);
  const Eigen::VectorXd f = rng.normal_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(st.forward_transform(f));
  state.SetComplexityN(n);
}
BENCHMARK(bm_forward_transform)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)
    ->Complexity(benchmark::oN)->Unit(benchmark::kMicrosecond);

void bm_compress(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const sgp::SampletTree st = sgp::build_samplet_tree(
      sgp::build_cluster_tree(sgp::PointCloud(unit_grid_2d(m)), 10), 3);
  const sgp::MaternKernel k(1.5, 1.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(sgp::compress(
        st, [&k](double r) { return k(r); }, 0.8, 5, 1e-6));
  state.SetComplexityN(static_cast<std::int64_t>(m) * m);
}
BENCHMARK(bm_compress)->RangeMultiplier(2)->Range(32, 128)
    ->Complexity(benchmark::oNLogN)->Unit(benchmark::kMillisecond);

void bm_factor_solve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = m * m;
  const sgp::SampletTree st = sgp::build_samplet_tree(
      sgp::build_cluster_tree(sgp::PointCloud(unit_grid_2d(m)), 10), 3);
  const sgp::MaternKernel k(1.5, 1.0, 1.0);
  const sgp::SparseSymMatrix ks =
      sgp::compress(st, [&k](double r) { return k(r); }, 0.8, 5, 1e-6);
  sgp::RandomSource rng(4);
  const Eigen::VectorXd y = rng.normal_vector(n);
  for (auto _ : state) {
    const sgp::CholeskyFactor f = sgp::sparse_cholesky(ks, 1.0);
    benchmark::DoNotOptimize(sgp::solve_perturbed_system(f, st, y));
  }
  state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(bm_factor_solve)->RangeMultiplier(2)->Range(32, 128)
    ->Complexity(benchmark::oNLogN)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
