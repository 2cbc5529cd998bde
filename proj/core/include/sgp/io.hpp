// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_IO_HPP
#define SGP_IO_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sgp/bayesopt.hpp"
#include "sgp/gp.hpp"
#include "sgp/sparse_matrix.hpp"

namespace sgp {

/// Tabular dataset: feature columns (d x N) and a target vector.
struct Dataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd targets;
  std::vector<std::string> feature_names;
  std::string target_name;
  int dropped_rows = 0;  //!< rows removed for non-finite values
};

/// Parse a comma-separated file with a header row. Rows containing
/// non-finite values are dropped and counted; cells that fail to parse as
/// numbers raise an error with their row/column location.
Dataset ingest_csv(const std::string& path, const std::string& target_column);

/// Matrix Market coordinate file, symmetric, 1-based, lower triangle,
/// entries sorted by (column, row), full double precision.
void export_sparse(const SparseSymMatrix& m, const std::string& path);
SparseSymMatrix import_sparse(const std::string& path);

/// Number of unique stored positions (lower triangle) of a symmetric
/// matrix; equals the entry count of its Matrix Market file.
Eigen::Index lower_nnz(const SparseSymMatrix& m);

/// Model checkpoint: JSON metadata (kernel, bounds, compression config,
/// normalizer) next to a binary blob holding the training points and the
/// fitted coefficients. Loading rebuilds tree, compression and factor.
void save_checkpoint(const GPModel& model, const std::string& json_path);
GPModel load_checkpoint(const std::string& json_path);

/// History log as JSON lines {step, x, y, best_so_far, retrained}.
void write_history(const std::vector<BOStep>& history,
                   const std::string& path);

/// Kernel + hyperparameter JSON: {"nu", "ell", "s2", "sigma2", "bounds"}.
std::string hyperparameters_to_json(double nu, const Hyperparameters& h);
void hyperparameters_from_json(const std::string& text, double& nu,
                               Hyperparameters& h);

}  // namespace sgp

#endif  // SGP_IO_HPP
