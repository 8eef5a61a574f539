#include "scenario.hpp"

#include <stochconv/error.hpp>
#include <stochconv/serialization.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace stochconv::app {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("config: field \"") + key + "\" has the wrong type");
  }
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) {
    throw SchemaError(std::string("config: ") + what + " must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw SchemaError(std::string("config: ") + what + " must be an array of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

FamilyConfig parse_family(const json& j) {
  if (!j.is_object() || !j.contains("weights")) {
    throw SchemaError("config: family needs \"weights\"");
  }
  FamilyConfig fam;
  fam.weights = numbers(j["weights"], "family.weights");
  if (j.contains("atoms")) {
    fam.atoms = numbers(j["atoms"], "family.atoms");
  } else {
    for (std::size_t i = 0; i < fam.weights.size(); ++i) {
      fam.atoms.push_back(static_cast<double>(i));
    }
  }
  if (fam.atoms.size() != fam.weights.size() || fam.weights.empty()) {
    throw SchemaError("config: family atoms and weights must be non-empty and equally long");
  }
  if (j.contains("operators")) {
    for (const auto& op : j["operators"]) {
      fam.operators.push_back(operator_from_json(op));
    }
    if (fam.operators.size() != fam.atoms.size()) {
      throw SchemaError("config: family needs one operator per atom");
    }
  } else if (j.contains("operator")) {
    fam.base_operator = operator_from_json(j["operator"]);
  } else {
    throw SchemaError("config: family needs \"operators\" or \"operator\"");
  }
  return fam;
}

}  // namespace

std::size_t ScenarioConfig::h_dim() const {
  if (semigroup) {
    return semigroup->dim();
  }
  if (family) {
    const Operator& op = family->base_operator ? *family->base_operator : family->operators.front();
    return codomain_dim(op);
  }
  return u_dim();
}

QWienerSpec ScenarioConfig::noise_spec() const {
  return QWienerSpec(HilbertSpec(u_dim(), "U"),
                     Eigen::Map<const Eigen::VectorXd>(q_eigenvalues.data(),
                                                       static_cast<Eigen::Index>(u_dim())));
}

IntegrandSpec ScenarioConfig::build_integrand() const {
  const HilbertSpec u(u_dim(), "U");
  const HilbertSpec h(h_dim(), "H");
  const std::string kind = field<std::string>(integrand, "kind", "identity");
  const auto as_dense = [&](const json& op_json) {
    const Operator op = operator_from_json(op_json);
    if (domain_dim(op) != u.dim() || codomain_dim(op) != h.dim()) {
      throw SchemaError("config: integrand operator must map dim U = " + std::to_string(u.dim()) +
                        " to dim H = " + std::to_string(h.dim()));
    }
    return DenseOperator(u, h, to_matrix(op));
  };

  if (kind == "identity") {
    if (u.dim() != h.dim()) {
      throw SchemaError("config: identity integrand needs dim U == dim H");
    }
    return IntegrandSpec::constant(DenseOperator(u, h, Eigen::MatrixXd::Identity(
                                                           static_cast<Eigen::Index>(h.dim()),
                                                           static_cast<Eigen::Index>(u.dim()))));
  }
  if (kind == "constant") {
    if (!integrand.contains("operator")) {
      throw SchemaError("config: constant integrand needs \"operator\"");
    }
    return IntegrandSpec::constant(as_dense(integrand["operator"]));
  }
  if (kind == "time_varying") {
    if (!integrand.contains("operators") || !integrand["operators"].is_array()) {
      throw SchemaError("config: time_varying integrand needs an \"operators\" array");
    }
    std::vector<DenseOperator> ops;
    for (const auto& op : integrand["operators"]) {
      ops.push_back(as_dense(op));
    }
    if (ops.size() < steps) {
      throw SchemaError("config: time_varying integrand needs one operator per step");
    }
    return IntegrandSpec::time_varying(std::move(ops));
  }
  if (kind == "wiener_feedback") {
    // Phi_t = B (1 + gain sin(<W_t, e_0>)): bounded and adapted.
    const Eigen::MatrixXd base = integrand.contains("operator")
                                     ? as_dense(integrand["operator"]).entries()
                                     : Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(h.dim()),
                                                                 static_cast<Eigen::Index>(u.dim()));
    const double gain = field<double>(integrand, "gain", 0.5);
    return IntegrandSpec::adapted(u, h, [base, gain](std::size_t, const IncrementHistory& past) {
      return Eigen::MatrixXd(base * (1.0 + gain * std::sin(past.wiener(0))));
    });
  }
  throw SchemaError("config: unknown integrand kind \"" + kind + "\"");
}

std::string ScenarioConfig::hash() const { return fnv1a_hex(source.dump()); }

ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) {
    throw SchemaError("config: top level must be an object");
  }
  ScenarioConfig c;
  c.source = j;
  c.experiment = field<std::string>(j, "experiment", "");
  c.seed = field<std::uint64_t>(j, "seed", c.seed);
  c.n_paths = field<std::size_t>(j, "n_paths", c.n_paths);
  if (c.n_paths == 0) {
    throw SchemaError("config: n_paths must be at least 1");
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    c.horizon = field<double>(g, "T", c.horizon);
    c.steps = field<std::size_t>(g, "steps", c.steps);
  }
  if (!(c.horizon > 0.0) || c.steps == 0) {
    throw SchemaError("config: grid needs T > 0 and steps >= 1");
  }
  if (j.contains("q")) {
    c.q_eigenvalues = numbers(j["q"], "q");
  }
  if (c.q_eigenvalues.empty()) {
    throw SchemaError("config: q must list at least one eigenvalue");
  }
  for (double v : c.q_eigenvalues) {
    if (!(v >= 0.0)) {
      throw SchemaError("config: q eigenvalues must be nonnegative");
    }
  }
  if (j.contains("semigroup")) {
    try {
      c.semigroup = semigroup_from_json(j["semigroup"]);
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      throw SchemaError(std::string("config: semigroup: ") + e.what());
    }
  }
  if (j.contains("integrand")) {
    c.integrand = j["integrand"];
  }
  if (j.contains("exponents")) {
    const auto& e = j["exponents"];
    c.p = field<double>(e, "p", c.p);
    c.q = field<double>(e, "q", c.q);
    c.r = field<double>(e, "r", c.r);
  }
  if (!(c.p >= 1.0) || !(c.q >= 1.0) || !(c.r > 1.0)) {
    throw SchemaError("config: exponents need p, q >= 1 and r > 1");
  }
  c.beta = field<double>(j, "beta", c.beta);
  if (!(c.beta > 0.0 && c.beta < 1.0)) {
    throw SchemaError("config: beta must lie in (0, 1)");
  }
  if (j.contains("levels")) {
    c.levels = field<std::vector<std::size_t>>(j, "levels", {});
  }
  if (j.contains("family")) {
    c.family = parse_family(j["family"]);
  }
  if (j.contains("kernel")) {
    c.kernel = kernel_from_json(j["kernel"]);
  }
  c.trials = field<std::size_t>(j, "trials", c.trials);
  c.export_paths = field<std::size_t>(j, "export_paths", c.export_paths);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("config: cannot open " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

std::vector<std::string> write_bundle(const ArtifactBundle& bundle, const std::string& out) {
  namespace fs = std::filesystem;
  const fs::path target(out.empty() ? "." : out);
  const std::string ext = target.extension().string();
  const bool single = ext == ".json" || ext == ".csv";
  const fs::path dir = single ? target.parent_path() : target;
  if (!dir.empty()) {
    fs::create_directories(dir);
  }
  std::vector<std::string> written;
  for (const auto& [name, content] : bundle.files) {
    const fs::path file = single && name == bundle.primary ? target : dir / name;
    std::ofstream f(file, std::ios::binary);
    if (!f) {
      throw std::runtime_error("cannot write " + file.string());
    }
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    written.push_back(file.string());
  }
  return written;
}

}  // namespace stochconv::app
