#include "scenario.hpp"

#include <stochconv/error.hpp>
#include <stochconv/ito.hpp>
#include <stochconv/norms.hpp>
#include <stochconv/parallel.hpp>
#include <stochconv/random.hpp>
#include <stochconv/serialization.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace stochconv::app {

using nlohmann::json;

namespace {

json header(const ScenarioConfig& c, const std::string& name) {
  return {{"schema", kSchemaVersion},
          {"experiment", name},
          {"seed", c.seed},
          {"config_hash", c.hash()}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void expect(ArtifactBundle& b, const RunOptions& o, bool ok, const std::string& what) {
  if (ok) {
    return;
  }
  b.messages.push_back("invariant violated: " + what);
  if (o.check) {
    b.exit_code = kInvariantViolation;
  }
}

const SemigroupSpec& require_semigroup(const ScenarioConfig& c, const std::string& name) {
  if (!c.semigroup) {
    throw SchemaError("config: experiment " + name + " needs a \"semigroup\"");
  }
  return *c.semigroup;
}

void require_factorizable(const ScenarioConfig& c, const std::string& name) {
  if (!(c.beta > 1.0 / c.r)) {
    throw SchemaError(fmt::format("config: experiment {} needs 1/r < beta < 1 (beta = {}, r = {})",
                                  name, c.beta, c.r));
  }
}

std::string csv_paths(const PathEnsemble& x, std::size_t max_paths) {
  std::ostringstream out;
  write_paths_csv(x, out, max_paths);
  return out.str();
}

// Var<X(T), e_k> for a constant integrand under a diagonal semigroup.
double mode_variance_oracle(const Eigen::MatrixXd& phi, const Eigen::VectorXd& q, double lambda,
                            double horizon, Eigen::Index k) {
  double weight = 0.0;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    weight += phi(k, j) * phi(k, j) * q(j);
  }
  const double time = lambda > 0.0 ? -std::expm1(-2.0 * lambda * horizon) / (2.0 * lambda) : horizon;
  return weight * time;
}

ArtifactBundle run_mode_variance(const std::string& name, const ScenarioConfig& c,
                                 const RunOptions& o) {
  const SemigroupSpec& sg = require_semigroup(c, name);
  if (sg.kind() != SemigroupSpec::Kind::diagonal) {
    throw SchemaError("config: experiment " + name + " needs a diagonal semigroup");
  }
  const IntegrandSpec phi = c.build_integrand();
  if (phi.kind() != IntegrandSpec::Kind::constant) {
    throw SchemaError("config: experiment " + name + " needs a constant integrand");
  }
  const TimeGrid grid = c.grid();
  const QWienerSpec spec = c.noise_spec();
  const std::size_t h = sg.dim();

  // Paths are processed in batches so memory stays bounded; keyed noise makes
  // the result independent of the batch size.
  const std::size_t per_path = grid.steps() * std::max(h, c.u_dim());
  const std::size_t batch = std::clamp<std::size_t>(std::size_t{4'000'000} / per_path,
                                                    std::min(c.export_paths, c.n_paths) + 1,
                                                    c.n_paths);
  std::vector<double> finals(c.n_paths * h);
  ArtifactBundle b;
  for (std::size_t first = 0; first < c.n_paths; first += batch) {
    const std::size_t count = std::min(batch, c.n_paths - first);
    ConvolutionRequest req{phi, sg,
                           std::make_shared<const NoiseEnsemble>(
                               sample_increments(spec, grid, c.seed, count, first))};
    const PathEnsemble x = direct_convolution(req);
    for (std::size_t m = 0; m < count; ++m) {
      const auto v = x.value(m, grid.steps());
      std::copy(v.begin(), v.end(), finals.begin() + static_cast<std::ptrdiff_t>((first + m) * h));
    }
    if (first == 0 && c.export_paths > 0) {
      b.files["paths.csv"] = csv_paths(x, c.export_paths);
    }
  }

  const Eigen::MatrixXd phi0 = phi.deterministic_value(0);
  const auto n = static_cast<double>(c.n_paths);
  std::string csv = "mode,lambda,q,estimate,se,oracle,tolerance,pass\n";
  json modes = json::array();
  bool all_pass = true;
  for (std::size_t k = 0; k < h; ++k) {
    double mean = 0.0;
    for (std::size_t m = 0; m < c.n_paths; ++m) {
      mean += finals[m * h + k];
    }
    mean /= n;
    double var = 0.0;
    for (std::size_t m = 0; m < c.n_paths; ++m) {
      const double d = finals[m * h + k] - mean;
      var += d * d;
    }
    const double sq_mean = var / n;
    var = c.n_paths > 1 ? var / (n - 1.0) : 0.0;
    // SE of the variance estimate from the spread of the squared deviations.
    double spread = 0.0;
    for (std::size_t m = 0; m < c.n_paths; ++m) {
      const double d = finals[m * h + k] - mean;
      spread += (d * d - sq_mean) * (d * d - sq_mean);
    }
    const double se = c.n_paths > 1 ? std::sqrt(spread / (n - 1.0) / n) : 0.0;

    const auto ki = static_cast<Eigen::Index>(k);
    const double lambda = sg.spectrum()(ki);
    const double q = k < c.u_dim() ? c.q_eigenvalues[k] : 0.0;
    const double oracle = mode_variance_oracle(phi0, spec.q(), lambda, grid.horizon(), ki);
    const double tol = std::max(4.0 * se, 0.02 * oracle);
    const bool pass = std::abs(var - oracle) <= tol;
    all_pass = all_pass && pass;
    csv += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", k, lambda, q, var,
                       se, oracle, tol, pass ? 1 : 0);
    modes.push_back({{"mode", k},
                     {"lambda", lambda},
                     {"q", q},
                     {"estimate", var},
                     {"se", se},
                     {"oracle", oracle},
                     {"tolerance", tol},
                     {"pass", pass}});
    expect(b, o, pass,
           fmt::format("mode {} variance {:.6g} vs oracle {:.6g} (tolerance {:.3g})", k, var,
                       oracle, tol));
  }

  json rep = header(c, name);
  rep["T"] = grid.horizon();
  rep["steps"] = grid.steps();
  rep["dt"] = grid.dt();
  rep["paths"] = c.n_paths;
  rep["modes"] = modes;
  rep["all_pass"] = all_pass;
  b.files["variance.csv"] = std::move(csv);
  b.files["report.json"] = dump(rep);
  b.primary = "report.json";
  return b;
}

ArtifactBundle run_constants(const ScenarioConfig& c, const RunOptions& o) {
  ArtifactBundle b;
  std::string csv = "beta,c_beta,closed_form,abs_error,symmetry_error\n";
  json table = json::array();
  double max_err = 0.0;
  double max_sym = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double beta = i / 10.0;
    const double cb = c_beta(beta);
    const double closed = std::sin(std::numbers::pi * beta) / std::numbers::pi;
    const double err = std::abs(cb - closed);
    const double sym = std::abs(cb - c_beta(1.0 - beta));
    max_err = std::max(max_err, err);
    max_sym = std::max(max_sym, sym);
    csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", beta, cb, closed, err, sym);
    table.push_back({{"beta", beta}, {"c_beta", cb}, {"closed_form", closed}, {"abs_error", err},
                     {"symmetry_error", sym}});
  }
  expect(b, o, max_err <= 1e-8, fmt::format("c_beta vs sin(pi beta)/pi error {:.3g}", max_err));
  expect(b, o, max_sym <= 1e-10, fmt::format("c_beta symmetry error {:.3g}", max_sym));

  const double m = c.semigroup ? semigroup_grid_bound(*c.semigroup, c.grid()) : 1.0;
  json rep = header(c, "constants");
  rep["beta"] = c.beta;
  rep["c_beta"] = c_beta(c.beta);
  rep["c_beta_closed_form"] = std::sin(std::numbers::pi * c.beta) / std::numbers::pi;
  rep["table"] = table;
  rep["max_abs_error"] = max_err;
  rep["max_symmetry_error"] = max_sym;
  rep["M"] = m;
  rep["r"] = c.r;
  rep["holder_constant"] =
      c.beta > 1.0 / c.r ? json(holder_bound_constant(c.beta, c.r, c.horizon, m)) : json(nullptr);
  if (c.kernel) {
    rep["kernel_constant"] = {{"p", c.p}, {"q", c.q}, {"C", holder_constant(*c.kernel, c.p, c.q)},
                              {"C11", holder_constant(*c.kernel, 1.0, 1.0)}};
  }
  b.files["c_beta.csv"] = std::move(csv);
  b.files["constants.json"] = dump(rep);
  b.primary = "constants.json";
  return b;
}

FubiniFamily build_family(const ScenarioConfig& c) {
  if (!c.family) {
    throw SchemaError("config: experiment fubini needs a \"family\"");
  }
  const FamilyConfig& f = *c.family;
  const HilbertSpec u(c.u_dim(), "U");
  const HilbertSpec h(c.h_dim(), "H");
  const auto check = [&](const Operator& op) {
    if (domain_dim(op) != u.dim() || codomain_dim(op) != h.dim()) {
      throw SchemaError("config: family operators must map dim U = " + std::to_string(u.dim()) +
                        " to dim H = " + std::to_string(h.dim()));
    }
  };
  for (double w : f.weights) {
    if (!(w >= 0.0)) {
      throw SchemaError("config: family weights must be nonnegative");
    }
  }
  if (f.base_operator) {
    check(*f.base_operator);
    const Eigen::MatrixXd base = to_matrix(*f.base_operator);
    return FubiniFamily::from_factory(f.atoms, f.weights, [&](double y) {
      return IntegrandSpec::constant(DenseOperator(u, h, y * base));
    });
  }
  std::vector<IntegrandSpec> terms;
  for (const Operator& op : f.operators) {
    check(op);
    terms.push_back(IntegrandSpec::constant(op, u, h));
  }
  return FubiniFamily(f.atoms, f.weights, std::move(terms));
}

ArtifactBundle run_fubini(const ScenarioConfig& c, const RunOptions& o) {
  const FubiniFamily family = build_family(c);
  const NoiseEnsemble noise = sample_increments(c.noise_spec(), c.grid(), c.seed, c.n_paths);
  const FubiniReport rep = fubini_report(family, noise);

  ArtifactBundle b;
  expect(b, o, rep.relative() <= 1e-10,
         fmt::format("fubini relative discrepancy {:.3g} > 1e-10", rep.relative()));
  json j = header(c, "fubini");
  j["headline"] = rep.headline;
  j["relative"] = rep.relative();
  j["scale"] = rep.scale;
  j["per_node"] = rep.discrepancy.per_node_mean_abs;
  j["atoms"] = family.size();
  j["paths"] = c.n_paths;
  j["nodes"] = c.grid().nodes();
  b.files["fubini.json"] = dump(j);
  b.primary = "fubini.json";
  return b;
}

ArtifactBundle run_factorize_compare(const ScenarioConfig& c, const RunOptions& o) {
  const std::string name = "factorize-compare";
  const SemigroupSpec& sg = require_semigroup(c, name);
  require_factorizable(c, name);
  std::vector<std::size_t> levels = c.levels;
  if (levels.empty()) {
    if (c.steps % 4 != 0) {
      throw SchemaError("config: without \"levels\" the step count must be divisible by 4");
    }
    levels = {c.steps / 4, c.steps / 2, c.steps};
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::size_t finest = levels.back();
  for (std::size_t l : levels) {
    if (l == 0 || finest % l != 0) {
      throw SchemaError("config: every level must divide the finest level");
    }
  }

  const IntegrandSpec phi = c.build_integrand();
  const auto fine = std::make_shared<const NoiseEnsemble>(
      sample_increments(c.noise_spec(), TimeGrid(c.horizon, finest), c.seed, c.n_paths));
  const double exponent = c.beta - 1.0 / c.r - 0.01;

  ArtifactBundle b;
  std::string csv =
      "steps,dt,mean_path_sup,max_node_mean_abs,ensemble_sup,mean_abs_at_T,holder_violations,"
      "holder_max_ratio,empirical_modulus\n";
  json rows = json::array();
  std::vector<DiscrepancyReport> reports;
  std::size_t holder_total = 0;
  for (std::size_t l : levels) {
    ConvolutionRequest req{phi, sg,
                           l == finest ? fine
                                       : std::make_shared<const NoiseEnsemble>(
                                             coarsen(*fine, finest / l)),
                           c.beta, c.r, c.p, c.q};
    req.validate(true);
    const PathEnsemble direct = direct_convolution(req);
    const PathEnsemble y = kernel_convolution(req);
    const PathEnsemble smoothed = factorization_smoothing(y, sg, c.beta, c.r);
    DiscrepancyReport rep = compare(direct, smoothed, c.seed);
    const HolderCheck hc = check_holder_bound(smoothed, y, sg, c.beta, c.r);
    const double modulus = empirical_modulus(smoothed, exponent);
    holder_total += hc.violations;
    csv += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g}\n", l, rep.dt,
                       rep.mean_path_sup, rep.max_node_mean_abs, rep.ensemble_sup,
                       rep.per_node_mean_abs.back(), hc.violations, hc.max_ratio, modulus);
    rows.push_back({{"steps", l},
                    {"dt", rep.dt},
                    {"mean_path_sup", rep.mean_path_sup},
                    {"max_node_mean_abs", rep.max_node_mean_abs},
                    {"ensemble_sup", rep.ensemble_sup},
                    {"mean_abs_at_T", rep.per_node_mean_abs.back()},
                    {"holder_constant", hc.constant},
                    {"M", hc.bound_m},
                    {"holder_violations", hc.violations},
                    {"holder_max_ratio", hc.max_ratio},
                    {"modulus_exponent", exponent},
                    {"empirical_modulus", modulus}});
    reports.push_back(std::move(rep));
  }

  bool monotone_sup = true;
  bool monotone_node = true;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    monotone_sup = monotone_sup && reports[i].mean_path_sup < reports[i - 1].mean_path_sup;
    monotone_node = monotone_node && reports[i].max_node_mean_abs < reports[i - 1].max_node_mean_abs;
  }
  const double finest_err = reports.back().max_node_mean_abs;
  expect(b, o, monotone_sup, "mean pathwise sup discrepancy does not decrease under refinement");
  expect(b, o, monotone_node, "max per-node mean discrepancy does not decrease under refinement");
  expect(b, o, finest_err < 0.05,
         fmt::format("finest-level max per-node mean discrepancy {:.4g} >= 0.05", finest_err));
  expect(b, o, holder_total == 0, fmt::format("{} pathwise Hoelder bound violations", holder_total));

  json j = header(c, name);
  j["beta"] = c.beta;
  j["r"] = c.r;
  j["c_beta"] = c_beta(c.beta);
  j["paths"] = c.n_paths;
  j["levels"] = rows;
  j["monotone_mean_path_sup"] = monotone_sup;
  j["monotone_max_node_mean_abs"] = monotone_node;
  j["finest_max_node_mean_abs"] = finest_err;
  j["holder_violations"] = holder_total;
  j["per_node_finest"] = reports.back().per_node_mean_abs;
  b.files["convergence.csv"] = std::move(csv);
  b.files["report.json"] = dump(j);
  b.primary = "report.json";
  return b;
}

// Integrands used to probe the operator norm of the Ito map.
std::vector<std::pair<std::string, IntegrandSpec>> ito_battery(const IntegrandSpec& phi,
                                                              const SemigroupSpec& sg,
                                                              const TimeGrid& grid) {
  std::vector<std::pair<std::string, IntegrandSpec>> out;
  out.emplace_back("configured", phi);
  out.emplace_back("semigroup_half", compose(semigroup_eval(sg, grid.horizon() / 2.0), phi));
  if (phi.deterministic()) {
    const Eigen::MatrixXd base = phi.deterministic_value(0);
    std::vector<DenseOperator> ramp;
    for (std::size_t i = 0; i < grid.steps(); ++i) {
      ramp.emplace_back(phi.domain(), phi.codomain(), base * (grid.node(i) / grid.horizon()));
    }
    out.emplace_back("ramp", IntegrandSpec::time_varying(std::move(ramp)));
    out.emplace_back("feedback", IntegrandSpec::adapted(phi.domain(), phi.codomain(),
                                                        [base](std::size_t, const IncrementHistory& p) {
                                                          return Eigen::MatrixXd(
                                                              base * (1.0 + 0.5 * std::sin(p.wiener(0))));
                                                        }));
  }
  return out;
}

ArtifactBundle run_norms(const ScenarioConfig& c, const RunOptions& o) {
  const std::string name = "norms";
  const SemigroupSpec& sg = require_semigroup(c, name);
  require_factorizable(c, name);
  const IntegrandSpec phi = c.build_integrand();
  const TimeGrid grid = c.grid();
  const BootstrapOptions boot{200, c.seed ^ 0xb007};

  auto noise = std::make_shared<const NoiseEnsemble>(
      sample_increments(c.noise_spec(), grid, c.seed, c.n_paths));
  ConvolutionRequest req{phi, sg, noise, c.beta, c.r, c.p, c.q};
  req.validate(true);
  const NormReport lpq = estimate_lpq(factorized_convolution(req), c.p, c.q, boot);

  // Phi_{S,beta} is deterministic for deterministic Phi, so one path suffices.
  const std::size_t field_paths = phi.deterministic() ? 1 : std::min<std::size_t>(c.n_paths, 32);
  const NoiseEnsemble field_noise = sample_increments(c.noise_spec(), grid, c.seed, field_paths);
  const NormReport lpqr =
      estimate_lpqr(singular_kernel_field(phi, sg, c.beta, field_noise), c.p, c.q, c.r, boot);

  json battery = json::array();
  double jnorm = 0.0;
  for (const auto& [label, psi] : ito_battery(phi, sg, grid)) {
    const PathNormEstimate num = lr_path_norm(ito_integrate(psi, *noise), c.r);
    const NormReport den = estimate_lpq(integrand_field(psi, *noise), c.p, c.q, boot);
    const double ratio = den.estimate > 0.0 ? num.estimate / den.estimate : 0.0;
    jnorm = std::max(jnorm, ratio);
    battery.push_back({{"integrand", label},
                       {"lr_path_norm", num.estimate},
                       {"lr_path_norm_se", num.standard_error},
                       {"lpq", den.estimate},
                       {"ratio", ratio}});
  }

  const double m = semigroup_grid_bound(sg, grid);
  const double hconst = holder_bound_constant(c.beta, c.r, grid.horizon(), m);
  const double constant = std::pow(grid.horizon(), 1.0 / c.q) * hconst * jnorm;
  const double ratio = lpqr.estimate > 0.0 ? lpq.estimate / lpqr.estimate : 0.0;
  const bool finite = std::isfinite(lpq.estimate) && std::isfinite(lpqr.estimate);

  ArtifactBundle b;
  expect(b, o, finite, "norm estimates are not finite");
  expect(b, o, ratio <= constant,
         fmt::format("|C(Phi)|_pq / |Phi_S,beta|_pqr = {:.4g} exceeds the reported constant {:.4g}",
                     ratio, constant));

  json j = header(c, name);
  j["lpq_factorized"] = to_json(lpq);
  j["lpqr_kernel_field"] = to_json(lpqr);
  j["ratio"] = ratio;
  j["ito_battery"] = battery;
  j["ito_operator_norm_estimate"] = jnorm;
  j["M"] = m;
  j["holder_constant"] = hconst;
  j["constant"] = constant;
  j["ratio_below_constant"] = ratio <= constant;
  b.files["norms.json"] = dump(j);
  b.primary = "norms.json";
  return b;
}

ArtifactBundle run_measure_props(const ScenarioConfig& c, const RunOptions& o) {
  const MeasurePropertyResult res = measure_property_trials(c.seed, c.trials);
  ArtifactBundle b;
  expect(b, o, res.ok(),
         fmt::format("measure-kernel properties: {} Hoelder, {} Minkowski, {} homogeneity, {} mass, "
                     "{} C(1,1) violations",
                     res.holder_violations, res.minkowski_violations, res.homogeneity_violations,
                     res.mass_violations, res.c11_violations));
  json j = header(c, "measure-kernel-props");
  j["trials"] = res.trials;
  j["holder_violations"] = res.holder_violations;
  j["minkowski_violations"] = res.minkowski_violations;
  j["homogeneity_violations"] = res.homogeneity_violations;
  j["mass_violations"] = res.mass_violations;
  j["c11_violations"] = res.c11_violations;
  j["max_holder_ratio"] = res.max_holder_ratio;
  j["max_minkowski_ratio"] = res.max_minkowski_ratio;
  j["pass"] = res.ok();
  if (c.kernel) {
    j["kernel_constant"] = {{"p", c.p}, {"q", c.q}, {"C", holder_constant(*c.kernel, c.p, c.q)}};
  }
  b.files["measure.json"] = dump(j);
  b.primary = "measure.json";
  return b;
}

ArtifactBundle run_convolve(const ScenarioConfig& c, const RunOptions& o) {
  const std::string& method = o.method;
  if (method != "direct" && method != "factorized" && method != "both") {
    throw SchemaError("convolve: --method must be direct, factorized or both");
  }
  const SemigroupSpec& sg = require_semigroup(c, "convolve");
  const bool factorized = method != "direct";
  if (factorized) {
    require_factorizable(c, "convolve");
  }
  ConvolutionRequest req{c.build_integrand(), sg,
                         std::make_shared<const NoiseEnsemble>(
                             sample_increments(c.noise_spec(), c.grid(), c.seed, c.n_paths)),
                         c.beta, c.r, c.p, c.q};
  req.validate(factorized);
  const std::size_t export_paths = c.export_paths == 0 ? c.n_paths : c.export_paths;

  ArtifactBundle b;
  std::optional<PathEnsemble> direct;
  if (method != "factorized") {
    direct = direct_convolution(req);
    b.files["direct.csv"] = csv_paths(*direct, export_paths);
    b.primary = "direct.csv";
  }
  if (factorized) {
    const PathEnsemble y = kernel_convolution(req);
    const PathEnsemble smoothed = factorization_smoothing(y, sg, c.beta, c.r);
    const HolderCheck hc = check_holder_bound(smoothed, y, sg, c.beta, c.r);
    expect(b, o, hc.violations == 0,
           fmt::format("{} pathwise Hoelder bound violations", hc.violations));
    b.files["factorized.csv"] = csv_paths(smoothed, export_paths);
    b.primary = "factorized.csv";
    if (direct) {
      json j = header(c, "convolve");
      j["discrepancy"] = to_json(compare(*direct, smoothed, c.seed));
      j["holder_constant"] = hc.constant;
      j["holder_violations"] = hc.violations;
      j["holder_max_ratio"] = hc.max_ratio;
      b.files["discrepancy.json"] = dump(j);
    }
  }
  return b;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "ou-check", "heat-spde", "fubini", "factorize-compare", "constants", "norms",
      "measure-kernel-props", "convolve"};
  return names;
}

ArtifactBundle run_scenario(const std::string& name, ScenarioConfig config, const RunOptions& opts) {
  if (opts.seed) {
    config.seed = *opts.seed;
    config.source["seed"] = *opts.seed;
  }
  if (opts.threads > 0) {
    set_worker_threads(opts.threads);
  }
  if (name == "ou-check" || name == "heat-spde") {
    return run_mode_variance(name, config, opts);
  }
  if (name == "fubini") {
    return run_fubini(config, opts);
  }
  if (name == "factorize-compare") {
    return run_factorize_compare(config, opts);
  }
  if (name == "constants") {
    return run_constants(config, opts);
  }
  if (name == "norms") {
    return run_norms(config, opts);
  }
  if (name == "measure-kernel-props") {
    return run_measure_props(config, opts);
  }
  if (name == "convolve") {
    return run_convolve(config, opts);
  }
  throw SchemaError("unknown experiment \"" + name + "\"");
}

MeasurePropertyResult measure_property_trials(std::uint64_t seed, std::size_t trials) {
  constexpr double slack = 1e-12;
  MeasurePropertyResult res;
  res.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterStream rng(seed, static_cast<std::uint32_t>(t));
    const std::size_t d1 = rng.integer(1, 6);
    const std::size_t d2 = rng.integer(1, 6);
    const std::size_t dim = rng.integer(1, 3);
    const auto mass = [&] { return rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, 2.0); };
    const auto exponent = [&] { return rng.uniform() < 0.2 ? 1.0 : rng.uniform(1.0, 4.0); };

    std::vector<double> w2(d2);
    std::vector<std::vector<double>> masses(d2, std::vector<double>(d1));
    for (std::size_t x = 0; x < d2; ++x) {
      w2[x] = mass();
      for (double& v : masses[x]) {
        v = mass();
      }
    }
    const KernelSpec k(w2, masses);
    std::vector<double> fv(d1 * d2 * dim);
    std::vector<double> gv(d1 * d2 * dim);
    for (std::size_t i = 0; i < fv.size(); ++i) {
      fv[i] = rng.uniform() < 0.1 ? 0.0 : rng.normal() * 3.0;
      gv[i] = rng.normal();
    }
    const DiscreteFunction f(d1, d2, dim, fv);
    const DiscreteFunction g(d1, d2, dim, gv);
    const double p = exponent();
    const double q = exponent();
    const double a = rng.uniform(-5.0, 5.0);

    const double nf = lpq_norm(f, k, p, q);
    const double holder_rhs = holder_constant(k, p, q) * nf;
    const double holder_lhs = l1_integral(f, k);
    if (holder_lhs > holder_rhs + slack * std::max(1.0, holder_rhs)) {
      ++res.holder_violations;
    }
    if (holder_rhs > 0.0) {
      res.max_holder_ratio = std::max(res.max_holder_ratio, holder_lhs / holder_rhs);
    }

    std::vector<double> sum(fv.size());
    std::vector<double> scaled(fv.size());
    for (std::size_t i = 0; i < fv.size(); ++i) {
      sum[i] = fv[i] + gv[i];
      scaled[i] = a * fv[i];
    }
    const double mink_lhs = lpq_norm(DiscreteFunction(d1, d2, dim, sum), k, p, q);
    const double mink_rhs = nf + lpq_norm(g, k, p, q);
    if (mink_lhs > mink_rhs + slack * std::max(1.0, mink_rhs)) {
      ++res.minkowski_violations;
    }
    if (mink_rhs > 0.0) {
      res.max_minkowski_ratio = std::max(res.max_minkowski_ratio, mink_lhs / mink_rhs);
    }

    const double hom = lpq_norm(DiscreteFunction(d1, d2, dim, scaled), k, p, q);
    if (std::abs(hom - std::abs(a) * nf) > slack * std::max(1.0, std::abs(a) * nf)) {
      ++res.homogeneity_violations;
    }

    const double total = product_measure_mass(k);
    const double ones = l1_integral(DiscreteFunction::constant(d1, d2, 1.0), k);
    if (std::abs(total - ones) > slack * std::max(1.0, total)) {
      ++res.mass_violations;
    }
    if (holder_constant(k, 1.0, 1.0) != 1.0) {
      ++res.c11_violations;
    }
  }
  return res;
}

}  // namespace stochconv::app
