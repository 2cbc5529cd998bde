// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include <doctest.h>

#include <cmath>

#include "sgp/random.hpp"
#include "sgp/samplet_tree.hpp"

using namespace sgp;

namespace {

SampletTree make_tree(const Eigen::MatrixXd& pts, int tau, int q,
                      bool augment = false) {
  return build_samplet_tree(build_cluster_tree(PointCloud(pts), tau), q,
                            augment);
}

// Largest deviation from orthonormality of the dense change of basis.
double orthogonality_defect(const SampletTree& st) {
  const Eigen::MatrixXd t = st.dense_basis_matrix();
  const Eigen::Index n = t.rows();
  return (t * t.transpose() - Eigen::MatrixXd::Identity(n, n)).norm();
}

// Raw moment sum_i w_i ((x_i - c)/s)^alpha of basis function `row` of T.
double samplet_moment(const SampletTree& st, const Eigen::MatrixXd& t, int row,
                      const std::vector<int>& alpha,
                      const Eigen::VectorXd& center, double scale,
                      double* max_term = nullptr) {
  double acc = 0.0;
  if (max_term) *max_term = 0.0;
  const auto& perm = st.cluster_tree().permutation();
  const Eigen::MatrixXd& pts = st.cluster_tree().points();
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    double mono = 1.0;
    for (Eigen::Index k = 0; k < pts.rows(); ++k) {
      const double u = (pts(k, i) - center[k]) / scale;
      for (int e = 0; e < alpha[k]; ++e) mono *= u;
    }
    if (max_term) *max_term = std::max(*max_term, std::abs(mono));
    acc += t(row, perm[i]) * mono;
  }
  return acc;
}

}  // namespace

TEST_CASE("four-point line reproduces the worked Haar-like basis") {
  Eigen::MatrixXd pts(1, 4);
  pts << 1, 2, 3, 4;
  const SampletTree st = make_tree(pts, 2, 0);
  const Eigen::MatrixXd t = st.dense_basis_matrix();
  REQUIRE(t.rows() == 4);

  // Expected basis up to sign and within-cluster order: root scaling
  // (1,1,1,1)/2, level-0 samplet (1,1,-1,-1)/2, two level-1 samplets
  // (1,-1,0,0)/sqrt2 and (0,0,1,-1)/sqrt2 (input order of the points).
  const double h = 0.5, r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd expected(4, 4);
  expected << h, h, h, h,
              h, h, -h, -h,
              r, -r, 0, 0,
              0, 0, r, -r;
  for (int e = 0; e < 4; ++e) {
    bool found = false;
    for (int j = 0; j < 4; ++j) {
      const double plus = (t.row(j) - expected.row(e)).norm();
      const double minus = (t.row(j) + expected.row(e)).norm();
      if (std::min(plus, minus) < 1e-12) found = true;
    }
    CHECK_MESSAGE(found, "expected basis row ", e, " not found");
  }

  // The constant vector has exactly one nonzero coefficient: the root
  // scaling function with magnitude 2 (q = 0 annihilates constants).
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  const Eigen::VectorXd coeffs = st.forward_transform(ones);
  CHECK(std::abs(coeffs[0]) == doctest::Approx(2.0));
  CHECK(coeffs.tail(3).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((st.inverse_transform(coeffs) - ones).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("moment matrix on simple configurations") {
  const MultiIndexSet iset(1, 1);
  Eigen::MatrixXd pts(1, 2);
  pts << 0, 1;
  const Eigen::MatrixXd m =
      moment_matrix(pts, iset, Eigen::VectorXd::Zero(1), 1.0);
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 1) == 1.0);
  CHECK(m(1, 0) == 0.0);
  CHECK(m(1, 1) == 1.0);

  const MultiIndexSet iset0(0, 1);
  CHECK(moment_matrix(pts, iset0, Eigen::VectorXd::Zero(1), 1.0)
            .isApprox(Eigen::MatrixXd::Ones(1, 2)));

  // Symmetric points about the center: QR of the moment matrix yields the
  // difference samplet (delta_{-1} - delta_{+1})/sqrt2 up to sign.
  Eigen::MatrixXd sym(1, 2);
  sym << -1, 1;
  const SampletTree st = make_tree(sym, 2, 1);
  const Eigen::MatrixXd t = st.dense_basis_matrix();
  bool found = false;
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::RowVector2d diff(r, -r);
  for (int j = 0; j < 2; ++j)
    if (std::min((t.row(j) - diff).norm(), (t.row(j) + diff).norm()) < 1e-12)
      found = true;
  CHECK(found);
}

TEST_CASE("basis size bookkeeping") {
  RandomSource rng(1);
  for (int q : {0, 1, 2, 3}) {
    for (int d : {1, 2, 3}) {
      const int n = 150 + 13 * d;
      const int mq = monomial_dimension(q, d);
      const SampletTree st =
          make_tree(rng.uniform_matrix(d, n), std::max(2, mq), q);
      int samplets = st.root_scaling_count();
      for (const auto& node : st.nodes()) samplets += node.n_samplets;
      CHECK(samplets == n);
      for (std::size_t i = 0; i < st.nodes().size(); ++i) {
        if (st.cluster_tree().node(static_cast<int>(i)).is_leaf()) continue;
        const auto& sn = st.node(static_cast<int>(i));
        CHECK(sn.n_scaling <= mq);
        CHECK(sn.n_samplets <= mq);
        CHECK(sn.n_scaling + sn.n_samplets ==
              st.Q(static_cast<int>(i)).rows());
        const Eigen::MatrixXd q = st.Q(static_cast<int>(i));
        CHECK((q.transpose() * q -
               Eigen::MatrixXd::Identity(q.cols(), q.cols()))
                  .norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("orthonormality of the change of basis") {
  RandomSource rng(2);
  for (int d : {1, 2, 3}) {
    for (int q : {0, 2}) {
      const SampletTree st = make_tree(
          rng.uniform_matrix(d, 300), std::max(2, monomial_dimension(q, d)),
          q);
      CHECK(orthogonality_defect(st) < 1e-10);
    }
  }
}

TEST_CASE("vanishing moments of every samplet") {
  RandomSource rng(3);
  for (int d : {1, 2}) {
    for (int q : {0, 1, 3}) {
      const int mq = monomial_dimension(q, d);
      const SampletTree st =
          make_tree(rng.uniform_matrix(d, 260), std::max(2, mq), q);
      const Eigen::MatrixXd t = st.dense_basis_matrix();
      const MultiIndexSet iset(q, d);
      const auto& cnodes = st.cluster_tree().nodes();
      for (std::size_t v = 0; v < cnodes.size(); ++v) {
        const auto& sn = st.node(static_cast<int>(v));
        for (int k = 0; k < sn.n_samplets; ++k) {
          const int row = static_cast<int>(sn.start_index) + k;
          for (const auto& alpha : iset.indices) {
            double scale_term = 0.0;
            const double m =
                samplet_moment(st, t, row, alpha, st.center(cnodes[v]),
                               st.scale(cnodes[v]), &scale_term);
            CHECK(std::abs(m) <= 1e-8 * std::max(scale_term, 1e-300));
          }
        }
      }
    }
  }
}

TEST_CASE("support locality and l1 bound") {
  RandomSource rng(4);
  const int d = 2, q = 2;
  const SampletTree st =
      make_tree(rng.uniform_matrix(d, 300), monomial_dimension(q, d), q);
  const Eigen::MatrixXd t = st.dense_basis_matrix();
  const auto& tree = st.cluster_tree();
  const auto& perm = tree.permutation();
  for (std::size_t v = 0; v < tree.nodes().size(); ++v) {
    const auto& cn = tree.node(static_cast<int>(v));
    const auto& sn = st.node(static_cast<int>(v));
    for (int k = 0; k < sn.n_samplets; ++k) {
      const int row = static_cast<int>(sn.start_index) + k;
      double l1 = 0.0;
      for (Eigen::Index i = 0; i < tree.size(); ++i) {
        const double w = t(row, perm[i]);
        const bool inside = i >= cn.begin && i < cn.end;
        if (!inside) CHECK(std::abs(w) < 1e-13);
        l1 += std::abs(w);
      }
      CHECK(l1 <= std::sqrt(double(cn.size())) + 1e-10);
    }
  }
}

TEST_CASE("polynomial data yields vanishing samplet coefficients") {
  RandomSource rng(5);
  const int d = 2;
  for (int q : {1, 2}) {
    const Eigen::MatrixXd pts = rng.uniform_matrix(d, 220);
    const SampletTree st = make_tree(pts, monomial_dimension(q, d), q);
    Eigen::VectorXd f(pts.cols());
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      const double x = pts(0, i), y = pts(1, i);
      f[i] = 1.5 - 2.0 * x + 0.5 * y;
      if (q >= 2) f[i] += 0.25 * x * x - x * y + 2.0 * y * y;
    }
    const Eigen::VectorXd coeffs = st.forward_transform(f);
    const double fscale = f.cwiseAbs().maxCoeff();
    CHECK(coeffs.tail(coeffs.size() - st.root_scaling_count())
              .cwiseAbs()
              .maxCoeff() < 1e-8 * fscale);
  }
}

TEST_CASE("coefficient decay over levels for a smooth function") {
  const int d = 1, q = 2;
  Eigen::MatrixXd pts(1, 1024);
  for (int i = 0; i < 1024; ++i) pts(0, i) = (i + 0.5) / 1024.0;
  const SampletTree st = make_tree(pts, monomial_dimension(q, d) + 1, q);
  Eigen::VectorXd f(1024);
  for (int i = 0; i < 1024; ++i)
    f[i] = std::exp(-pts(0, i)) * std::sin(3.0 * pts(0, i));
  const Eigen::VectorXd coeffs = st.forward_transform(f);
  std::vector<double> level_max(st.cluster_tree().depth() + 1, 0.0);
  const auto& cnodes = st.cluster_tree().nodes();
  for (std::size_t v = 0; v < cnodes.size(); ++v) {
    const auto& sn = st.node(static_cast<int>(v));
    for (int k = 0; k < sn.n_samplets; ++k)
      level_max[cnodes[v].level] = std::max(
          level_max[cnodes[v].level], std::abs(coeffs[sn.start_index + k]));
  }
  double prev = 0.0;
  bool first = true;
  int decreases = 0, comparisons = 0;
  for (double lm : level_max) {
    if (lm == 0.0) continue;
    if (!first) {
      ++comparisons;
      if (lm < prev) ++decreases;
    }
    prev = lm;
    first = false;
  }
  CHECK(comparisons > 3);
  CHECK(decreases == comparisons);  // strict decay for this smooth f
}

TEST_CASE("transforms: round trip, isometry, zero") {
  RandomSource rng(7);
  for (int n : {5, 64, 1000}) {
    const int d = 2, q = 2;
    const Eigen::MatrixXd pts = rng.uniform_matrix(d, n);
    const SampletTree st = make_tree(pts, monomial_dimension(q, d), q);
    const Eigen::VectorXd f = rng.normal_vector(n);
    const Eigen::VectorXd coeffs = st.forward_transform(f);
    CHECK(std::abs(coeffs.norm() - f.norm()) < 1e-10 * f.norm());
    CHECK((st.inverse_transform(coeffs) - f).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(st.forward_transform(Eigen::VectorXd::Zero(n)).norm() == 0.0);
  }
}

TEST_CASE("unit coefficient reproduces a basis row") {
  RandomSource rng(8);
  const Eigen::MatrixXd pts = rng.uniform_matrix(2, 64);
  const SampletTree st = make_tree(pts, 4, 1);
  const Eigen::MatrixXd t = st.dense_basis_matrix();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(64);
  e[17] = 1.0;
  const Eigen::VectorXd w = st.inverse_transform(e);
  CHECK((w.transpose() - t.row(17)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("single point and single-leaf trees") {
  Eigen::MatrixXd single(1, 1);
  single << 0.3;
  const SampletTree st = make_tree(single, 2, 1);
  CHECK(st.dense_basis_matrix() == Eigen::MatrixXd::Identity(1, 1));

  RandomSource rng(9);
  const Eigen::MatrixXd pts = rng.uniform_matrix(2, 10);
  const SampletTree leafy = make_tree(pts, 11, 2);  // tau > N: root is a leaf
  const Eigen::MatrixXd t = leafy.dense_basis_matrix();
  CHECK((t * t.transpose() - Eigen::MatrixXd::Identity(10, 10)).norm() <
        1e-15);
  CHECK(t.cwiseAbs().sum() == doctest::Approx(10.0));  // permutation matrix
}

TEST_CASE("length mismatches are rejected") {
  RandomSource rng(10);
  const SampletTree st = make_tree(rng.uniform_matrix(2, 32), 4, 1);
  CHECK_THROWS_AS((void)st.forward_transform(Eigen::VectorXd::Zero(31)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)st.inverse_transform(Eigen::VectorXd::Zero(33)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)st.dense_basis_matrix(16), std::invalid_argument);
}

TEST_CASE("augmented leaf moments extend deep-level annihilation") {
  RandomSource rng(11);
  // N = 200, d = 3, q = 2, tau = 30: m_q = 10 scaling functions per cluster.
  // Augmentation keeps the same counts but samplets of clusters whose
  // children are leaves gain vanishing moments beyond degree q.
  const int d = 3, q = 2, tau = 30;
  const Eigen::MatrixXd pts = rng.uniform_matrix(d, 200);
  CHECK(monomial_dimension(q, d) == 10);
  const SampletTree plain = make_tree(pts, tau, q, false);
  const SampletTree aug = make_tree(pts, tau, q, true);

  for (std::size_t i = 0; i < plain.nodes().size(); ++i) {
    CHECK(plain.node(static_cast<int>(i)).n_scaling ==
          aug.node(static_cast<int>(i)).n_scaling);
    CHECK(plain.node(static_cast<int>(i)).n_samplets ==
          aug.node(static_cast<int>(i)).n_samplets);
  }
  CHECK(orthogonality_defect(aug) < 1e-10);

  // q_tilde = max degree with m <= 2 tau = 60 is 5 (m_5 = 56). The QR makes
  // the combined moment matrix lower triangular, so samplet k of a level
  // J-1 cluster annihilates the first m_q + k graded monomials: samplets
  // with k >= m_{q+1} - m_q kill all of degree q+1 as well.
  const Eigen::MatrixXd t = aug.dense_basis_matrix();
  const MultiIndexSet higher(q + 1, d);
  const auto& cnodes = aug.cluster_tree().nodes();
  const int extra = monomial_dimension(q + 1, d) - monomial_dimension(q, d);
  int checked = 0;
  for (std::size_t v = 0; v < cnodes.size(); ++v) {
    if (cnodes[v].is_leaf()) continue;
    if (!cnodes[cnodes[v].son1].is_leaf() ||
        !cnodes[cnodes[v].son2].is_leaf())
      continue;
    const auto& sn = aug.node(static_cast<int>(v));
    for (int k = extra; k < sn.n_samplets; ++k) {
      const int row = static_cast<int>(sn.start_index) + k;
      for (const auto& alpha : higher.indices) {
        double scale_term = 0.0;
        const double m =
            samplet_moment(aug, t, row, alpha, aug.center(cnodes[v]),
                           aug.scale(cnodes[v]), &scale_term);
        CHECK(std::abs(m) <= 1e-7 * std::max(scale_term, 1e-300));
      }
      ++checked;
    }
  }
  CHECK(checked > 0);
}
