// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/io.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sgp/cluster_tree.hpp"

namespace sgp {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

json bounds_to_json(const Hyperparameters& h) {
  return json{{"ell", {h.ell_bounds.lower, h.ell_bounds.upper}},
              {"s2", {h.s2_bounds.lower, h.s2_bounds.upper}},
              {"sigma2", {h.sigma2_bounds.lower, h.sigma2_bounds.upper}}};
}

void bounds_from_json(const json& j, Hyperparameters& h) {
  if (!j.contains("bounds")) return;
  const json& b = j.at("bounds");
  if (b.contains("ell"))
    h.ell_bounds = {b["ell"][0].get<double>(), b["ell"][1].get<double>()};
  if (b.contains("s2"))
    h.s2_bounds = {b["s2"][0].get<double>(), b["s2"][1].get<double>()};
  if (b.contains("sigma2"))
    h.sigma2_bounds = {b["sigma2"][0].get<double>(),
                       b["sigma2"][1].get<double>()};
}

}  // namespace

Dataset ingest_csv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("ingest_csv: empty file " + path);
  const std::vector<std::string> header = split_csv_line(line);
  int target_idx = -1;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == target_column) target_idx = static_cast<int>(i);
  if (target_idx < 0)
    throw std::runtime_error("ingest_csv: target column '" + target_column +
                             "' not found in header");

  const int ncols = static_cast<int>(header.size());
  std::vector<std::vector<double>> rows;
  int dropped = 0;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != ncols)
      throw std::runtime_error("ingest_csv: row " + std::to_string(lineno) +
                               " has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(ncols));
    std::vector<double> row(ncols);
    bool finite = true;
    for (int c = 0; c < ncols; ++c) {
      std::size_t consumed = 0;
      double value;
      try {
        value = std::stod(cells[c], &consumed);
      } catch (const std::exception&) {
        throw std::runtime_error("ingest_csv: unparseable cell at row " +
                                 std::to_string(lineno) + ", column '" +
                                 header[c] + "'");
      }
      if (consumed != cells[c].size())
        throw std::runtime_error("ingest_csv: unparseable cell at row " +
                                 std::to_string(lineno) + ", column '" +
                                 header[c] + "'");
      if (!std::isfinite(value)) finite = false;
      row[c] = value;
    }
    if (!finite) {
      ++dropped;
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("ingest_csv: no usable rows");

  Dataset ds;
  const int d = ncols - 1;
  ds.features.resize(d, static_cast<Eigen::Index>(rows.size()));
  ds.targets.resize(static_cast<Eigen::Index>(rows.size()));
  for (int c = 0; c < ncols; ++c)
    if (c != target_idx) ds.feature_names.push_back(header[c]);
  ds.target_name = target_column;
  ds.dropped_rows = dropped;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    int f = 0;
    for (int c = 0; c < ncols; ++c) {
      if (c == target_idx)
        ds.targets[static_cast<Eigen::Index>(r)] = rows[r][c];
      else
        ds.features(f++, static_cast<Eigen::Index>(r)) = rows[r][c];
    }
  }
  return ds;
}

void export_sparse(const SparseSymMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_sparse: cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.dim() << " " << m.dim() << " " << lower_nnz(m) << "\n";
  out.precision(17);
  const auto& mat = m.matrix();
  for (int col = 0; col < mat.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(mat, col); it; ++it)
      if (it.row() >= it.col())
        out << (it.row() + 1) << " " << (it.col() + 1) << " " << it.value()
            << "\n";
}

SparseSymMatrix import_sparse(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("import_sparse: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("%%MatrixMarket", 0) != 0 ||
      line.find("symmetric") == std::string::npos)
    throw std::runtime_error("import_sparse: not a symmetric MatrixMarket file");
  do {
    if (!std::getline(in, line))
      throw std::runtime_error("import_sparse: missing size line");
  } while (!line.empty() && line[0] == '%');
  std::istringstream hdr(line);
  Eigen::Index rows, cols, nnz;
  hdr >> rows >> cols >> nnz;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * nnz);
  for (Eigen::Index k = 0; k < nnz; ++k) {
    Eigen::Index i, j;
    double v;
    in >> i >> j >> v;
    trips.emplace_back(i - 1, j - 1, v);
    if (i != j) trips.emplace_back(j - 1, i - 1, v);
  }
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return SparseSymMatrix(std::move(m));
}

Eigen::Index lower_nnz(const SparseSymMatrix& m) {
  Eigen::Index count = 0;
  const auto& mat = m.matrix();
  for (int col = 0; col < mat.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(mat, col); it; ++it)
      if (it.row() >= it.col()) ++count;
  return count;
}

std::string hyperparameters_to_json(double nu, const Hyperparameters& h) {
  json j{{"nu", nu},
         {"ell", h.ell},
         {"s2", h.s2},
         {"sigma2", h.sigma2},
         {"bounds", bounds_to_json(h)}};
  return j.dump(2);
}

void hyperparameters_from_json(const std::string& text, double& nu,
                               Hyperparameters& h) {
  const json j = json::parse(text);
  if (j.contains("nu")) nu = j["nu"].get<double>();
  if (j.contains("ell")) h.ell = j["ell"].get<double>();
  if (j.contains("s2")) h.s2 = j["s2"].get<double>();
  if (j.contains("sigma2")) h.sigma2 = j["sigma2"].get<double>();
  bounds_from_json(j, h);
}

void save_checkpoint(const GPModel& model, const std::string& json_path) {
  const std::string bin_path = json_path + ".bin";
  const CompressionConfig& comp = model.compression();
  json j{
      {"format", "sgp-checkpoint-v1"},
      {"nu", model.nu()},
      {"ell", model.hyper().ell},
      {"s2", model.hyper().s2},
      {"sigma2", model.hyper().sigma2},
      {"bounds", bounds_to_json(model.hyper())},
      {"compression",
       {{"q", comp.q},
        {"eta", comp.eta},
        {"interp_order", comp.resolved_order()},
        {"tau_comp", comp.tau_comp},
        {"leaf_threshold",
         comp.resolved_leaf_threshold(static_cast<int>(model.train_points().dim()))},
        {"augment_leaf_moments", comp.augment_leaf_moments}}},
      {"normalizer", {{"mean", model.normalizer().mean},
                      {"scale", model.normalizer().scale}}},
      {"n", model.train_points().size()},
      {"d", model.train_points().dim()},
      {"log_likelihood", model.stored_log_likelihood()},
      {"coefficients_file", bin_path},
  };
  std::ofstream out(json_path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + json_path);
  out << j.dump(2) << "\n";

  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("save_checkpoint: cannot open " + bin_path);
  const Eigen::Index n = model.train_points().size();
  const Eigen::Index d = model.train_points().dim();
  bin.write(reinterpret_cast<const char*>(&d), sizeof(d));
  bin.write(reinterpret_cast<const char*>(&n), sizeof(n));
  bin.write(reinterpret_cast<const char*>(model.train_points().points().data()),
            sizeof(double) * d * n);
  bin.write(reinterpret_cast<const char*>(model.ctilde().data()),
            sizeof(double) * n);
}

GPModel load_checkpoint(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + json_path);
  const json j = json::parse(in);
  if (j.value("format", "") != "sgp-checkpoint-v1")
    throw std::runtime_error("load_checkpoint: unknown format");

  Hyperparameters hyper;
  hyper.ell = j["ell"].get<double>();
  hyper.s2 = j["s2"].get<double>();
  hyper.sigma2 = j["sigma2"].get<double>();
  bounds_from_json(j, hyper);
  const double nu = j["nu"].get<double>();
  CompressionConfig comp;
  comp.q = j["compression"]["q"].get<int>();
  comp.eta = j["compression"]["eta"].get<double>();
  comp.interp_order = j["compression"]["interp_order"].get<int>();
  comp.tau_comp = j["compression"]["tau_comp"].get<double>();
  comp.leaf_threshold = j["compression"]["leaf_threshold"].get<int>();
  comp.augment_leaf_moments = j["compression"]["augment_leaf_moments"].get<bool>();
  Normalizer nz{j["normalizer"]["mean"].get<double>(),
                j["normalizer"]["scale"].get<double>()};

  std::ifstream bin(j["coefficients_file"].get<std::string>(),
                    std::ios::binary);
  if (!bin) throw std::runtime_error("load_checkpoint: missing coefficients file");
  Eigen::Index d = 0, n = 0;
  bin.read(reinterpret_cast<char*>(&d), sizeof(d));
  bin.read(reinterpret_cast<char*>(&n), sizeof(n));
  Eigen::MatrixXd pts(d, n);
  bin.read(reinterpret_cast<char*>(pts.data()), sizeof(double) * d * n);
  Eigen::VectorXd ctilde(n);
  bin.read(reinterpret_cast<char*>(ctilde.data()), sizeof(double) * n);
  if (!bin) throw std::runtime_error("load_checkpoint: truncated coefficients file");

  // Rebuild tree, compression and factor deterministically from the stored
  // configuration; only the fitted coefficients are taken from disk.
  PointCloud cloud(pts);
  ClusterTree tree = build_cluster_tree(cloud, comp.leaf_threshold);
  SampletTree st =
      build_samplet_tree(std::move(tree), comp.q, comp.augment_leaf_moments);
  const MaternKernel k(nu, hyper.ell, hyper.s2);
  SparseSymMatrix ks = compress(st, [&k](double r) { return k(r); }, comp.eta,
                                comp.resolved_order(), comp.tau_comp);
  CholeskyFactor factor = sparse_cholesky(ks, hyper.sigma2);
  // the samplet-domain coefficients T c~ follow from the stored c~
  const Eigen::VectorXd w = st.forward_transform(ctilde);
  return GPModel(hyper, nu, std::move(st), std::move(ks), std::move(factor),
                 ctilde, w, nz, cloud, comp,
                 j.value("log_likelihood", 0.0), 0);
}

void write_history(const std::vector<BOStep>& history,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_history: cannot open " + path);
  for (const BOStep& s : history) {
    json j{{"step", s.step},
           {"x", std::vector<double>(s.x.data(), s.x.data() + s.x.size())},
           {"y", s.y},
           {"best_so_far", s.best_so_far},
           {"retrained", s.retrained}};
    out << j.dump() << "\n";
  }
}

}  // namespace sgp
