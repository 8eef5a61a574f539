#pragma once

// Scenario runner behind the stochconv CLI: JSON configs in, CSV/JSON
// artifacts out. Every artifact is a pure function of (config, seed).

#include <stochconv/convolution.hpp>
#include <stochconv/fubini.hpp>
#include <stochconv/hilbert.hpp>
#include <stochconv/integrand.hpp>
#include <stochconv/measure.hpp>
#include <stochconv/noise.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stochconv::app {

inline constexpr const char* kSchemaVersion = "1";

/// Exit codes of the CLI.
enum ExitCode : int { kOk = 0, kSchemaViolation = 1, kInvariantViolation = 2 };

struct FamilyConfig {
  std::vector<double> atoms;
  std::vector<double> weights;
  /// Either one operator per atom, or a base operator B with g(y) = y B.
  std::vector<Operator> operators;
  std::optional<Operator> base_operator;
};

struct ScenarioConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::size_t n_paths = 1000;
  double horizon = 1.0;
  std::size_t steps = 100;
  std::vector<double> q_eigenvalues{1.0};
  std::optional<SemigroupSpec> semigroup;
  nlohmann::json integrand = {{"kind", "identity"}};
  double p = 2.0;
  double q = 2.0;
  double r = 4.0;
  double beta = 0.3;
  /// Grid sizes compared by factorize-compare; each must divide `steps`.
  std::vector<std::size_t> levels;
  std::optional<FamilyConfig> family;
  std::optional<KernelSpec> kernel;
  std::size_t trials = 1000;
  std::size_t export_paths = 10;
  /// Canonical JSON of the config as loaded (seed override applied).
  nlohmann::json source;

  std::size_t u_dim() const noexcept { return q_eigenvalues.size(); }
  std::size_t h_dim() const;
  TimeGrid grid() const { return TimeGrid(horizon, steps); }
  QWienerSpec noise_spec() const;
  /// Builds the configured integrand U -> H.
  IntegrandSpec build_integrand() const;
  std::string hash() const;
};

/// Parses a scenario; throws SchemaError on any violation.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);

struct RunOptions {
  bool check = false;
  std::optional<std::uint64_t> seed;
  /// 0 keeps the current worker setting.
  std::size_t threads = 0;
  /// For `convolve`: direct, factorized or both.
  std::string method = "both";
};

struct ArtifactBundle {
  /// file name -> contents, written verbatim.
  std::map<std::string, std::string> files;
  /// File written to --out when it names a file rather than a directory.
  std::string primary;
  int exit_code = kOk;
  std::vector<std::string> messages;
};

/// Experiments and subcommands understood by run_scenario.
const std::vector<std::string>& experiment_names();

/// Runs `name` (an experiment or the `convolve` subcommand) on `config`.
ArtifactBundle run_scenario(const std::string& name, ScenarioConfig config, const RunOptions& opts);

/// Writes a bundle. An `out` ending in .json or .csv names the file for the
/// primary artifact (the others go next to it); anything else is a directory.
/// Returns the paths written.
std::vector<std::string> write_bundle(const ArtifactBundle& bundle, const std::string& out);

/// Outcome of the randomized Hoelder / Minkowski trials on discrete kernels.
struct MeasurePropertyResult {
  std::size_t trials = 0;
  std::size_t holder_violations = 0;
  std::size_t minkowski_violations = 0;
  std::size_t homogeneity_violations = 0;
  /// l1_integral of the constant 1 differs from product_measure_mass.
  std::size_t mass_violations = 0;
  /// holder_constant(k, 1, 1) != 1.
  std::size_t c11_violations = 0;
  /// max of lhs / rhs over the trials; <= 1 when the inequality holds.
  double max_holder_ratio = 0.0;
  double max_minkowski_ratio = 0.0;

  bool ok() const noexcept {
    return holder_violations == 0 && minkowski_violations == 0 && homogeneity_violations == 0 &&
           mass_violations == 0 && c11_violations == 0;
  }
};

MeasurePropertyResult measure_property_trials(std::uint64_t seed, std::size_t trials);

}  // namespace stochconv::app
