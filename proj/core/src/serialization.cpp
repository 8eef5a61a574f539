#include "stochconv/serialization.hpp"

#include <fmt/format.h>

namespace stochconv {

using nlohmann::json;

namespace {

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) {
    throw SchemaError(std::string(what) + ": expected an array of numbers");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw SchemaError(std::string(what) + ": expected an array of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::MatrixXd matrix_from_rows(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) {
    throw SchemaError(std::string(what) + ": expected a non-empty array of rows");
  }
  const auto first = number_array(rows.front(), what);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(first.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = number_array(rows[i], what);
    if (row.size() != first.size()) {
      throw SchemaError(std::string(what) + ": ragged rows");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return m;
}

json rows_of(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(i, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::string& kind_of(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw SchemaError(std::string(what) + ": missing string field \"kind\"");
  }
  return j["kind"].get_ref<const std::string&>();
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

Operator operator_from_json(const json& j) {
  const auto& kind = kind_of(j, "operator");
  if (kind == "diagonal") {
    if (!j.contains("eigenvalues")) {
      throw SchemaError("operator: diagonal kind needs \"eigenvalues\"");
    }
    const auto ev = number_array(j["eigenvalues"], "operator eigenvalues");
    if (ev.empty()) {
      throw SchemaError("operator: empty eigenvalue list");
    }
    return SpectralOperator(HilbertSpec(ev.size()), to_vector(ev));
  }
  if (kind == "dense") {
    if (!j.contains("rows")) {
      throw SchemaError("operator: dense kind needs \"rows\"");
    }
    Eigen::MatrixXd m = matrix_from_rows(j["rows"], "operator rows");
    const auto cols = static_cast<std::size_t>(m.cols());
    const auto rows = static_cast<std::size_t>(m.rows());
    if (cols == 0) {
      throw SchemaError("operator: empty rows");
    }
    return DenseOperator(HilbertSpec(cols, "U"), HilbertSpec(rows, "H"), std::move(m));
  }
  throw SchemaError("operator: unknown kind \"" + kind + "\"");
}

json operator_to_json(const Operator& op) {
  if (const auto* d = std::get_if<SpectralOperator>(&op)) {
    return {{"kind", "diagonal"},
            {"eigenvalues", std::vector<double>(d->eigenvalues().begin(), d->eigenvalues().end())}};
  }
  return {{"kind", "dense"}, {"rows", rows_of(std::get<DenseOperator>(op).entries())}};
}

SemigroupSpec semigroup_from_json(const json& j) {
  const auto& kind = kind_of(j, "semigroup");
  if (kind == "diagonal") {
    if (!j.contains("eigenvalues")) {
      throw SchemaError("semigroup: diagonal kind needs \"eigenvalues\"");
    }
    const auto ev = number_array(j["eigenvalues"], "semigroup eigenvalues");
    if (ev.empty()) {
      throw SchemaError("semigroup: empty spectrum");
    }
    return SemigroupSpec::diagonal(HilbertSpec(ev.size()), to_vector(ev));
  }
  if (kind == "dense") {
    if (!j.contains("rows")) {
      throw SchemaError("semigroup: dense kind needs \"rows\"");
    }
    Eigen::MatrixXd a = matrix_from_rows(j["rows"], "semigroup generator");
    if (a.rows() != a.cols()) {
      throw SchemaError("semigroup: generator must be square");
    }
    const auto n = static_cast<std::size_t>(a.rows());
    return SemigroupSpec::dense(HilbertSpec(n), std::move(a));
  }
  throw SchemaError("semigroup: unknown kind \"" + kind + "\"");
}

json semigroup_to_json(const SemigroupSpec& sg) {
  if (sg.kind() == SemigroupSpec::Kind::diagonal) {
    return {{"kind", "diagonal"},
            {"eigenvalues", std::vector<double>(sg.spectrum().begin(), sg.spectrum().end())}};
  }
  return {{"kind", "dense"}, {"rows", rows_of(sg.generator())}};
}

KernelSpec kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d2_weights") || !j.contains("kernel_masses")) {
    throw SchemaError("kernel: expected {\"d2_weights\":[...], \"kernel_masses\":[[...],...]}");
  }
  auto weights = number_array(j["d2_weights"], "kernel d2_weights");
  const auto& masses = j["kernel_masses"];
  if (!masses.is_array()) {
    throw SchemaError("kernel: kernel_masses must be an array of rows");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : masses) {
    rows.push_back(number_array(row, "kernel kernel_masses"));
  }
  try {
    return KernelSpec(std::move(weights), std::move(rows));
  } catch (const std::exception& e) {
    throw SchemaError(std::string("kernel: ") + e.what());
  }
}

json kernel_to_json(const KernelSpec& k) {
  json masses = json::array();
  for (const auto& fiber : k.per_atom()) {
    masses.push_back(fiber.weights());
  }
  return {{"d2_weights", k.base().weights()}, {"kernel_masses", masses}};
}

json to_json(const NormReport& rep) {
  json j = {{"estimate", rep.estimate}, {"se", rep.standard_error}, {"p", rep.p}, {"q", rep.q}};
  j["r"] = rep.r > 0.0 ? json(rep.r) : json(nullptr);
  j["paths"] = rep.paths;
  j["nodes"] = rep.nodes;
  return j;
}

json to_json(const DiscrepancyReport& rep) {
  return {{"per_node_mean_abs", rep.per_node_mean_abs},
          {"mean_path_sup", rep.mean_path_sup},
          {"max_node_mean_abs", rep.max_node_mean_abs},
          {"ensemble_sup", rep.ensemble_sup},
          {"dt", rep.dt},
          {"seed", rep.seed},
          {"paths", rep.paths},
          {"nodes", rep.nodes},
          {"dim", rep.dim}};
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace stochconv
