// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "sgp/random.hpp"
#include "sgp/sparse_cholesky.hpp"
#include "sgp/trace.hpp"

using namespace sgp;

namespace {

SparseSymMatrix from_dense(const Eigen::MatrixXd& a, double drop = 0.0) {
  std::vector<Eigen::Triplet<double>> trips;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i == j || std::abs(a(i, j)) > drop)
        trips.emplace_back(i, j, a(i, j));
  Eigen::SparseMatrix<double> m(a.rows(), a.cols());
  m.setFromTriplets(trips.begin(), trips.end());
  return SparseSymMatrix(std::move(m));
}

Eigen::MatrixXd random_spd(Eigen::Index n, RandomSource& rng,
                           double diag_boost = 1.0) {
  const Eigen::MatrixXd b = rng.normal_matrix(n, n);
  Eigen::MatrixXd a = b * b.transpose() / double(n);
  a.diagonal().array() += diag_boost;
  return a;
}

}  // namespace

TEST_CASE("hand 2x2 factorization and solve") {
  Eigen::MatrixXd a(2, 2);
  a << 4, 2, 2, 3;
  const CholeskyFactor f = sparse_cholesky(from_dense(a), 0.0, Ordering::natural);
  // L = [[2, 0], [1, sqrt(2)]]: check via log det and a solve
  CHECK(f.log_det() == doctest::Approx(std::log(8.0)));
  Eigen::VectorXd b(2);
  b << 6, 5;
  const Eigen::VectorXd x = f.solve(b);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("identity factorization") {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(9, 9);
  const CholeskyFactor f = sparse_cholesky(from_dense(eye), 0.0);
  CHECK(f.log_det() == doctest::Approx(0.0));
  RandomSource rng(1);
  const Eigen::VectorXd b = rng.normal_vector(9);
  CHECK((f.solve(b) - b).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero pivot raises a typed error with its index") {
  Eigen::MatrixXd a(1, 1);
  a << 0.0;
  try {
    (void)sparse_cholesky(from_dense(a), 0.0);
    FAIL("expected IndefiniteMatrix");
  } catch (const IndefiniteMatrix& e) {
    CHECK(e.pivot_index == 0);
  }

  // indefinite 3x3: the failing pivot is reported in original indexing
  Eigen::MatrixXd ind = Eigen::MatrixXd::Identity(3, 3);
  ind(2, 2) = -5.0;
  try {
    (void)sparse_cholesky(from_dense(ind), 0.0, Ordering::natural);
    FAIL("expected IndefiniteMatrix");
  } catch (const IndefiniteMatrix& e) {
    CHECK(e.pivot_index == 2);
  }
}

TEST_CASE("shift restores definiteness") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
  a(1, 1) = -0.5;
  CHECK_THROWS_AS((void)sparse_cholesky(from_dense(a), 0.0), IndefiniteMatrix);
  CHECK_NOTHROW((void)sparse_cholesky(from_dense(a), 1.0));
}

TEST_CASE("random SPD systems: residual and determinant oracle") {
  RandomSource rng(2);
  for (Eigen::Index n : {16, 64}) {
    const Eigen::MatrixXd a = random_spd(n, rng);
    const SparseSymMatrix as = from_dense(a);
    const CholeskyFactor f = sparse_cholesky(as, 0.25);
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += 0.25;
    for (int trial = 0; trial < 3; ++trial) {
      const Eigen::VectorXd b = rng.normal_vector(n);
      const Eigen::VectorXd x = f.solve(b);
      CHECK((shifted * x - b).norm() <= 1e-8 * b.norm());
    }
    const double dense_logdet = std::log(shifted.determinant());
    CHECK(f.log_det() == doctest::Approx(dense_logdet).epsilon(1e-8));
    CHECK(std::exp(f.log_det()) ==
          doctest::Approx(shifted.determinant()).epsilon(1e-6));
  }
}

TEST_CASE("log det of a diagonal matrix") {
  Eigen::MatrixXd d = Eigen::Vector3d(4, 3, 2).asDiagonal();
  const CholeskyFactor f = sparse_cholesky(from_dense(d), 0.0);
  CHECK(f.log_det() == doctest::Approx(std::log(24.0)));
}

TEST_CASE("solve results are independent of the ordering") {
  RandomSource rng(3);
  const Eigen::Index n = 80;
  Eigen::MatrixXd a = random_spd(n, rng);
  // sparsify the off-diagonal structure to give AMD something to reorder
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j && std::abs(double(i - j)) > 3 && (i + j) % 7 != 0)
        a(i, j) = 0.0;
  a = ((a + a.transpose()) / 2.0).eval();
  a.diagonal().array() += 5.0;
  const SparseSymMatrix as = from_dense(a);
  const CholeskyFactor amd = sparse_cholesky(as, 0.0, Ordering::amd);
  const CholeskyFactor nat = sparse_cholesky(as, 0.0, Ordering::natural);
  const Eigen::VectorXd b = rng.normal_vector(n);
  CHECK((amd.solve(b) - nat.solve(b)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(amd.log_det() == doctest::Approx(nat.log_det()).epsilon(1e-10));
}

TEST_CASE("amd ordering reduces fill on a 2d grid laplacian") {
  // 5-point stencil on a g x g grid: natural ordering suffers heavy fill,
  // AMD should do clearly better.
  const int g = 24;
  const Eigen::Index n = g * g;
  std::vector<Eigen::Triplet<double>> trips;
  const auto id = [g](int i, int j) { return i * g + j; };
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      trips.emplace_back(id(i, j), id(i, j), 4.0);
      if (i > 0) trips.emplace_back(id(i, j), id(i - 1, j), -1.0);
      if (i < g - 1) trips.emplace_back(id(i, j), id(i + 1, j), -1.0);
      if (j > 0) trips.emplace_back(id(i, j), id(i, j - 1), -1.0);
      if (j < g - 1) trips.emplace_back(id(i, j), id(i, j + 1), -1.0);
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  const SparseSymMatrix a(std::move(m));
  const CholeskyFactor amd = sparse_cholesky(a, 0.1, Ordering::amd);
  const CholeskyFactor nat = sparse_cholesky(a, 0.1, Ordering::natural);
  CHECK(amd.nnz() < nat.nnz());
  RandomSource rng(4);
  const Eigen::VectorXd b = rng.normal_vector(n);
  CHECK((amd.solve(b) - nat.solve(b)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("hutchinson trace: fixed probes and the M = A identity") {
  // diagonal A and M with probe e_k gives m_k / a_k exactly
  const Eigen::MatrixXd a = Eigen::Vector3d(2, 4, 8).asDiagonal();
  const Eigen::MatrixXd m = Eigen::Vector3d(6, 4, 2).asDiagonal();
  const CholeskyFactor f = sparse_cholesky(from_dense(a), 0.0);
  for (int k = 0; k < 3; ++k) {
    Eigen::MatrixXd probe = Eigen::MatrixXd::Zero(3, 1);
    probe(k, 0) = 1.0;
    CHECK(hutchinson_trace_probes(f, from_dense(m), probe) ==
          doctest::Approx(m(k, k) / a(k, k)));
  }

  // M = A: each probe contributes z^T z; the estimate is their average
  RandomSource rng(5);
  const SparseSymMatrix as = from_dense(random_spd(32, rng));
  const CholeskyFactor fa = sparse_cholesky(as, 0.0);
  const Eigen::MatrixXd z = rng.normal_matrix(32, 64);
  double zz = 0.0;
  for (int i = 0; i < 64; ++i) zz += z.col(i).squaredNorm();
  CHECK(hutchinson_trace_probes(fa, as, z) ==
        doctest::Approx(zz / 64.0).epsilon(1e-10));
}

TEST_CASE("hutchinson trace approaches the dense trace") {
  RandomSource rng(6);
  const Eigen::Index n = 256;
  const Eigen::MatrixXd a = random_spd(n, rng);
  const Eigen::MatrixXd m = random_spd(n, rng);
  const CholeskyFactor f = sparse_cholesky(from_dense(a), 0.0);
  const double exact = (a.ldlt().solve(m)).trace();
  const double est = hutchinson_trace(f, from_dense(m), 2000, rng);
  CHECK(std::abs(est - exact) <= 0.05 * std::abs(exact));
}

TEST_CASE("estimator is unbiased across seeds") {
  RandomSource rng(7);
  const Eigen::Index n = 24;
  const Eigen::MatrixXd a = random_spd(n, rng);
  const Eigen::MatrixXd m = random_spd(n, rng);
  const SparseSymMatrix ms = from_dense(m);
  const CholeskyFactor f = sparse_cholesky(from_dense(a), 0.0);
  const double exact = (a.ldlt().solve(m)).trace();
  const int reps = 2000;
  double mean = 0.0, m2 = 0.0;
  for (int s = 1; s <= reps; ++s) {
    RandomSource seed_rng(1000 + s);
    const double est = hutchinson_trace(f, ms, 5, seed_rng);
    const double delta = est - mean;
    mean += delta / s;
    m2 += delta * (est - mean);
  }
  const double stderr_mean = std::sqrt(m2 / (reps - 1) / reps);
  CHECK(std::abs(mean - exact) <= 3.0 * stderr_mean + 1e-12);
}

TEST_CASE("caller-supplied elimination order") {
  RandomSource rng(9);
  const Eigen::Index n = 40;
  const SparseSymMatrix a = from_dense(random_spd(n, rng));
  std::vector<Eigen::Index> perm(n);
  for (Eigen::Index i = 0; i < n; ++i) perm[i] = n - 1 - i;
  const CholeskyFactor f = sparse_cholesky(a, 0.1, perm);
  const CholeskyFactor ref = sparse_cholesky(a, 0.1, Ordering::natural);
  const Eigen::VectorXd b = rng.normal_vector(n);
  CHECK((f.solve(b) - ref.solve(b)).cwiseAbs().maxCoeff() < 1e-10);
  std::vector<Eigen::Index> bad(n - 1);
  CHECK_THROWS_AS((void)sparse_cholesky(a, 0.1, bad), std::invalid_argument);
}

TEST_CASE("input validation") {
  RandomSource rng(8);
  const SparseSymMatrix a = from_dense(random_spd(8, rng));
  CHECK_THROWS_AS((void)sparse_cholesky(a, -1.0), std::invalid_argument);
  const CholeskyFactor f = sparse_cholesky(a, 0.0);
  const Eigen::VectorXd short_vec = Eigen::VectorXd::Zero(7);
  CHECK_THROWS_AS((void)f.solve(short_vec), std::invalid_argument);
  CHECK_THROWS_AS(
      (void)hutchinson_trace_probes(f, a, Eigen::MatrixXd::Zero(8, 0)),
      std::invalid_argument);
}
