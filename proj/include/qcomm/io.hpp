#pragma once

#include <json.hpp>

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcomm/closeness.hpp"
#include "qcomm/errors.hpp"
#include "qcomm/hermitian.hpp"
#include "qcomm/partition.hpp"

namespace qcomm {

using Json = nlohmann::json;

namespace detail {

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UserError("cannot write '" + path + "'");
  out << text;
  if (!out) throw UserError("write to '" + path + "' failed");
}

// Reads an n x n numeric matrix field, reporting the offending row on error.
inline Eigen::MatrixXd read_matrix_field(const Json& j, const std::string& field,
                                         Eigen::Index n) {
  const Json& rows = j.at(field);
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw ParseError("field '" + field + "' must be an array of " + std::to_string(n) +
                     " rows");
  }
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("row " + std::to_string(i) + " of '" + field + "' must have " +
                       std::to_string(n) + " entries");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const Json& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_number()) {
        throw ParseError("row " + std::to_string(i) + " of '" + field +
                         "' has a non-numeric entry");
      }
      m(i, k) = cell.get<double>();
    }
  }
  return m;
}

inline Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

// On-disk Hamiltonian: {"n": int, "hermiticity_tol": real, "real": [[...]],
// "imag": [[...]]}. The imaginary part may be omitted when zero. Values
// round-trip exactly (shortest-representation doubles).
inline void save_hamiltonian(const HermitianMatrix& h, const std::string& path,
                             double hermiticity_tol = 1e-9, const Json& metadata = Json()) {
  Json j;
  j["n"] = h.size();
  j["hermiticity_tol"] = hermiticity_tol;
  j["real"] = detail::matrix_to_json(h.entries().real());
  const Eigen::MatrixXd imag = h.entries().imag();
  if (imag.cwiseAbs().maxCoeff() != 0.0) j["imag"] = detail::matrix_to_json(imag);
  if (!metadata.is_null()) j["metadata"] = metadata;
  detail::write_text_file(path, j.dump(2) + "\n");
}

inline HermitianMatrix load_hamiltonian(const std::string& path) {
  const Json j = detail::load_json_file(path);
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
    throw ParseError("'" + path + "' must be an object with an integer field 'n'");
  }
  const auto n = j["n"].get<Eigen::Index>();
  if (n < 1) throw ParseError("'n' must be at least 1");
  if (!j.contains("real")) throw ParseError("'" + path + "' is missing field 'real'");
  const Eigen::MatrixXd re = detail::read_matrix_field(j, "real", n);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(n, n);
  if (j.contains("imag")) im = detail::read_matrix_field(j, "imag", n);
  double tol = 1e-9;
  if (j.contains("hermiticity_tol")) {
    if (!j["hermiticity_tol"].is_number()) throw ParseError("'hermiticity_tol' must be a number");
    tol = j["hermiticity_tol"].get<double>();
    if (tol <= 0.0) throw ParseError("'hermiticity_tol' must be positive");
  }
  Eigen::MatrixXcd m(n, n);
  m.real() = re;
  m.imag() = im;
  try {
    return validate_hermitian(m, tol);
  } catch (const AsymmetryError& e) {
    throw HermiticityError("'" + path + "': " + e.what());
  }
}

// Partition file: labels plus the quality and provenance of the run.
inline void save_partition(const Partition& p, double q, const std::string& measure,
                           const std::string& regime, std::optional<std::int64_t> seed,
                           const std::string& path, const Json& config = Json()) {
  Json j;
  j["labels"] = p.labels();
  j["modularity"] = q;
  j["measure"] = measure;
  j["regime"] = regime;
  j["seed"] = seed.has_value() ? Json(*seed) : Json(nullptr);
  if (!config.is_null()) j["config"] = config;
  detail::write_text_file(path, j.dump(2) + "\n");
}

inline Partition load_partition(const std::string& path) {
  const Json j = detail::load_json_file(path);
  if (!j.is_object() || !j.contains("labels") || !j["labels"].is_array()) {
    throw ParseError("'" + path + "' must be an object with an array field 'labels'");
  }
  std::vector<int> labels;
  labels.reserve(j["labels"].size());
  for (const auto& cell : j["labels"]) {
    if (!cell.is_number_integer()) throw ParseError("'labels' must hold integers");
    labels.push_back(cell.get<int>());
  }
  if (labels.empty()) throw ParseError("'labels' must be non-empty");
  return Partition(std::move(labels));
}

// Dendrogram file: the ordered merge list under "merges"; each record holds
// the closeness at which its listed node sets fused into one community.
inline void save_dendrogram(const Dendrogram& d, const std::string& path,
                            const Json& config = Json()) {
  Json merges = Json::array();
  for (const auto& rec : d.merges) {
    Json r;
    r["closeness"] = rec.closeness;
    r["merged"] = rec.merged;
    merges.push_back(std::move(r));
  }
  Json j;
  j["merges"] = std::move(merges);
  if (!config.is_null()) j["config"] = config;
  detail::write_text_file(path, j.dump(2) + "\n");
}

// Closeness matrix as CSV: '#' comment lines echo the run configuration,
// then a header row and one row per node.
inline void save_closeness_csv(const NodeCloseness& c, const std::string& path,
                               const std::vector<std::string>& config_lines = {}) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& line : config_lines) out << "# " << line << "\n";
  out << "node";
  for (Eigen::Index j = 0; j < c.n(); ++j) out << "," << j;
  out << "\n";
  for (Eigen::Index i = 0; i < c.n(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < c.n(); ++j) out << "," << c.entries(i, j);
    out << "\n";
  }
  detail::write_text_file(path, out.str());
}

}  // namespace qcomm
