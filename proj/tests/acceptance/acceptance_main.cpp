// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include "scenario.hpp"

#include <stochconv/convolution.hpp>
#include <stochconv/fubini.hpp>
#include <stochconv/ito.hpp>
#include <stochconv/parallel.hpp>

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#ifndef STOCHCONV_CONFIG_DIR
#error "STOCHCONV_CONFIG_DIR must point at configs/"
#endif

using namespace stochconv;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0.0 && secs > limit_s) {
    o.pass = false;
    o.detail += fmt::format("; runtime {:.1f}s over {:.0f}s limit", secs, limit_s);
  }
  failures += o.pass ? 0 : 1;
  fmt::print("{} criterion {:2d} {}: {} [{:.2f}s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail, secs);
  std::fflush(stdout);
}

app::ScenarioConfig config(const std::string& name) {
  return app::load_config(std::string(STOCHCONV_CONFIG_DIR) + "/" + name + ".json");
}

// Threads = 1 bundles, reused by criterion 10.
std::map<std::string, app::ArtifactBundle> baseline;

const app::ArtifactBundle& run_once(const std::string& name) {
  auto it = baseline.find(name);
  if (it == baseline.end()) {
    it = baseline.emplace(name, app::run_scenario(name, config(name), {.check = true, .threads = 1})).first;
  }
  return it->second;
}

Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = n(rng);
  }
  return m;
}

QWienerSpec random_q(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::VectorXd q(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    q(i) = u(rng);
  }
  return QWienerSpec(HilbertSpec(dim, "U"), q);
}

// B (1 + y sin(W_0(t))): adapted, depends on the atom.
IntegrandSpec feedback(const Eigen::MatrixXd& b, double y) {
  return IntegrandSpec::adapted(HilbertSpec(static_cast<std::size_t>(b.cols()), "U"),
                                HilbertSpec(static_cast<std::size_t>(b.rows())),
                                [b, y](std::size_t, const IncrementHistory& past) {
                                  return Eigen::MatrixXd(b * (1.0 + y * std::sin(past.wiener(0))));
                                });
}

Outcome fubini_families() {
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<std::size_t> atoms_d(1, 64);
  std::uniform_int_distribution<std::size_t> dim_d(1, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int f = 0; f < 50; ++f) {
    const std::size_t atoms = atoms_d(rng);
    const std::size_t udim = dim_d(rng);
    const std::size_t hdim = dim_d(rng);
    const Eigen::MatrixXd b = gaussian(rng, static_cast<Eigen::Index>(hdim), static_cast<Eigen::Index>(udim));
    std::vector<double> y(atoms);
    std::vector<double> w(atoms);
    for (std::size_t j = 0; j < atoms; ++j) {
      y[j] = u(rng);
      w[j] = u(rng);
    }
    const auto fam = FubiniFamily::from_factory(y, w, [&](double a) { return feedback(b, a); });
    const auto noise = sample_increments(random_q(rng, udim), TimeGrid(1.0, 500), 1000 + f, 100);
    worst = std::max(worst, fubini_report(fam, noise).relative());
  }
  return {worst <= 1e-10, fmt::format("worst relative headline {:.3e} over 50 families (tol 1e-10)", worst)};
}

Outcome commutation() {
  std::mt19937_64 rng(20240102);
  std::uniform_int_distribution<std::size_t> dim_d(1, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t udim = dim_d(rng);
    const std::size_t hdim = dim_d(rng);
    const std::size_t kdim = dim_d(rng);
    const Eigen::MatrixXd b = gaussian(rng, static_cast<Eigen::Index>(hdim), static_cast<Eigen::Index>(udim));
    const DenseOperator q(HilbertSpec(hdim), HilbertSpec(kdim, "K"),
                          gaussian(rng, static_cast<Eigen::Index>(kdim), static_cast<Eigen::Index>(hdim)));
    const auto phi = feedback(b, 0.5);
    const auto noise = sample_increments(random_q(rng, udim), TimeGrid(1.0, 100), 2000 + trial, 20);
    const auto lhs = ito_integrate(phi, noise).mapped(q);
    const auto rhs = ito_integrate(compose(q, phi), noise);
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < lhs.data().size(); ++i) {
      scale = std::max(scale, std::abs(lhs.data()[i]));
      diff = std::max(diff, std::abs(lhs.data()[i] - rhs.data()[i]));
    }
    worst = std::max(worst, scale > 0.0 ? diff / scale : diff);
  }
  return {worst <= 1e-10, fmt::format("worst relative gap {:.3e} over 100 operators (tol 1e-10)", worst)};
}

Outcome factorization_identity() {
  const json j = json::parse(run_once("factorize-compare").files.at("report.json"));
  std::string levels;
  for (const auto& l : j["levels"]) {
    levels += fmt::format(" N={}: max_node_mean={:.4f} mean_path_sup={:.4f};", l["steps"].get<std::size_t>(),
                          l["max_node_mean_abs"].get<double>(), l["mean_path_sup"].get<double>());
  }
  const bool monotone = j["monotone_max_node_mean_abs"].get<bool>();
  const double finest = j["finest_max_node_mean_abs"].get<double>();
  return {monotone && finest < 0.05,
          fmt::format("decreasing={} finest={:.4f} (< 0.05);{}", monotone, finest, levels)};
}

Outcome holder_bound() {
  const json j = json::parse(run_once("factorize-compare").files.at("report.json"));
  double ratio = 0.0;
  for (const auto& l : j["levels"]) {
    ratio = std::max(ratio, l["holder_max_ratio"].get<double>());
  }
  const auto violations = j["holder_violations"].get<std::size_t>();
  return {violations == 0, fmt::format("{} violations, max sup|C|/bound {:.4f}", violations, ratio)};
}

Outcome c_beta_values() {
  double err = 0.0;
  double sym = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double beta = i / 10.0;
    err = std::max(err, std::abs(c_beta(beta) - std::sin(std::numbers::pi * beta) / std::numbers::pi));
    sym = std::max(sym, std::abs(c_beta(beta) - c_beta(1.0 - beta)));
  }
  return {err <= 1e-8 && sym <= 1e-10, fmt::format("max error {:.2e} (1e-8), symmetry {:.2e} (1e-10)", err, sym)};
}

Outcome mode_variance(const std::string& name) {
  const auto& b = run_once(name);
  const json j = json::parse(b.files.at("report.json"));
  std::string detail;
  for (const auto& m : j["modes"]) {
    detail += fmt::format(" k={} est={:.5f} oracle={:.5f} tol={:.5f};", m["mode"].get<std::size_t>(),
                          m["estimate"].get<double>(), m["oracle"].get<double>(), m["tolerance"].get<double>());
  }
  return {j["all_pass"].get<bool>() && b.exit_code == app::kOk,
          fmt::format("dt={} paths={};{}", j["dt"].get<double>(), j["paths"].get<std::size_t>(), detail)};
}

Outcome isometry_battery() {
  std::mt19937_64 rng(20240108);
  std::uniform_int_distribution<std::size_t> dim_d(1, 4);
  const std::size_t paths = 10000;
  const std::size_t steps = 50;
  int passed = 0;
  double worst_z = 0.0;
  for (int c = 0; c < 10; ++c) {
    const std::size_t udim = dim_d(rng);
    const std::size_t hdim = dim_d(rng);
    const auto q = random_q(rng, udim);
    std::vector<DenseOperator> ops;
    double oracle = 0.0;
    const TimeGrid grid(1.0, steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const Eigen::MatrixXd m = gaussian(rng, static_cast<Eigen::Index>(hdim), static_cast<Eigen::Index>(udim));
      oracle += (m * q.q().cwiseSqrt().asDiagonal()).squaredNorm() * grid.dt();
      ops.emplace_back(HilbertSpec(udim, "U"), HilbertSpec(hdim), m);
    }
    const auto noise = sample_increments(q, grid, 3000 + c, paths);
    const auto x = ito_integrate(IntegrandSpec::time_varying(std::move(ops)), noise);
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t m = 0; m < paths; ++m) {
      double v = 0.0;
      for (double e : x.value(m, steps)) {
        v += e * e;
      }
      s += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(paths);
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / (n - 1.0));
    const double z = std::abs(mean - oracle) / se;
    worst_z = std::max(worst_z, z);
    passed += z <= 4.0 ? 1 : 0;
  }
  return {passed == 10, fmt::format("{}/10 cases within 4 SE, worst |z| {:.2f}", passed, worst_z)};
}

Outcome measure_kernels() {
  const auto r = app::measure_property_trials(9, 1000);
  return {r.ok(), fmt::format("holder {} minkowski {} homogeneity {} mass {} C(1,1) {} violations; "
                              "max ratios {:.6f} / {:.6f}",
                              r.holder_violations, r.minkowski_violations, r.homogeneity_violations,
                              r.mass_violations, r.c11_violations, r.max_holder_ratio, r.max_minkowski_ratio)};
}

Outcome determinism() {
  std::string mismatched;
  for (const auto& name : app::experiment_names()) {
    const auto& one = run_once(name);
    for (std::size_t t : {4u, 8u}) {
      const auto again = app::run_scenario(name, config(name), {.check = true, .threads = t});
      if (again.files != one.files) {
        mismatched += fmt::format(" {}@{}", name, t);
      }
    }
  }
  set_worker_threads(1);
  return {mismatched.empty(), mismatched.empty()
                                  ? fmt::format("{} experiments byte-identical at 1, 4, 8 threads",
                                                app::experiment_names().size())
                                  : "mismatch:" + mismatched};
}

}  // namespace

int main() {
  set_worker_threads(1);
  report(1, "stochastic Fubini", 30.0, fubini_families);
  report(2, "commutation Q(I phi) = I(Q phi)", 10.0, commutation);
  report(3, "factorization identity", 120.0, factorization_identity);
  report(4, "pathwise Hoelder bound", 0.0, holder_bound);
  report(5, "c_beta", 1.0, c_beta_values);
  report(6, "OU variance", 60.0, [] { return mode_variance("ou-check"); });
  report(7, "heat-SPDE mode variances", 120.0, [] { return mode_variance("heat-spde"); });
  report(8, "Ito isometry battery", 0.0, isometry_battery);
  report(9, "measure-kernel properties", 5.0, measure_kernels);
  report(10, "determinism across threads", 0.0, determinism);
  fmt::print("{} of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
