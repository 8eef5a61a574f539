#include <stochconv/error.hpp>
#include <stochconv/integrand.hpp>
#include <stochconv/ito.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace stochconv;

namespace {

QWienerSpec scalar_noise() { return QWienerSpec(HilbertSpec(1, "U"), Eigen::VectorXd::Ones(1)); }

IntegrandSpec constant(const Eigen::MatrixXd& m) {
  return IntegrandSpec::constant(DenseOperator(HilbertSpec(m.cols(), "U"), HilbertSpec(m.rows()), m));
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = n(rng);
  }
  return m;
}

double max_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) {
    s = std::max(s, std::abs(x));
  }
  return s;
}

double max_abs_diff(const PathEnsemble& a, const PathEnsemble& b) {
  return max_abs((a - b).data());
}

// Mean and standard error of |X_m(T)|^2 over the paths.
std::pair<double, double> second_moment_at_end(const PathEnsemble& x) {
  const auto n = static_cast<double>(x.paths());
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t m = 0; m < x.paths(); ++m) {
    const double v = x.norm_at(m, x.nodes() - 1) * x.norm_at(m, x.nodes() - 1);
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  return {mean, std::sqrt((s2 / n - mean * mean) / n)};
}

}  // namespace

TEST(ItoIntegrate, ZeroIntegrandGivesZero) {
  const auto noise = sample_increments(scalar_noise(), TimeGrid(1.0, 20), 1, 5);
  const auto x = ito_integrate(constant(Eigen::MatrixXd::Zero(2, 1)), noise);
  EXPECT_EQ(max_abs(x.data()), 0.0);
}

TEST(ItoIntegrate, UnitIntegrandIsTheWienerPath) {
  const auto noise = sample_increments(scalar_noise(), TimeGrid(1.0, 50), 2, 4);
  const auto x = ito_integrate(constant(Eigen::MatrixXd::Ones(1, 1)), noise);
  for (std::size_t m = 0; m < 4; ++m) {
    const auto w = wiener_values(noise, m);
    for (std::size_t k = 0; k < x.nodes(); ++k) {
      EXPECT_EQ(x.value(m, k)[0], w[k]);
    }
  }
}

TEST(ItoIntegrate, UnitIntegrandIsometry) {
  const auto noise = sample_increments(scalar_noise(), TimeGrid(1.0, 100), 3, 10000);
  const auto [mean, se] = second_moment_at_end(ito_integrate(constant(Eigen::MatrixXd::Ones(1, 1)), noise));
  EXPECT_NEAR(mean, 1.0, 4.0 * se);
}

TEST(ItoIntegrate, DimensionMismatchThrows) {
  const auto noise = sample_increments(scalar_noise(), TimeGrid(1.0, 10), 1, 2);
  EXPECT_THROW(ito_integrate(constant(Eigen::MatrixXd::Ones(2, 2)), noise), DimensionError);
  std::vector<DenseOperator> short_ops(5, DenseOperator(HilbertSpec(1), Eigen::MatrixXd::Ones(1, 1)));
  EXPECT_THROW(ito_integrate(IntegrandSpec::time_varying(short_ops), noise), DimensionError);
}

TEST(ItoIntegrate, Linearity) {
  std::mt19937_64 rng(12);
  const QWienerSpec spec(HilbertSpec(3, "U"), Eigen::Vector3d(1.0, 0.5, 0.2));
  const auto noise = sample_increments(spec, TimeGrid(1.0, 64), 4, 50);
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = constant(random_matrix(rng, 2, 3));
    std::vector<DenseOperator> ops;
    for (int i = 0; i < 64; ++i) {
      ops.emplace_back(HilbertSpec(3), HilbertSpec(2), random_matrix(rng, 2, 3));
    }
    const auto psi = IntegrandSpec::time_varying(ops);
    const double a = 1.7;
    const double b = -0.4;
    const auto lhs = ito_integrate(combine(a, phi, b, psi), noise);
    const auto rhs = ito_integrate(phi, noise).scaled(a) + ito_integrate(psi, noise).scaled(b);
    EXPECT_LE(max_abs_diff(lhs, rhs), 1e-10 * std::max(1.0, max_abs(lhs.data())));
  }
}

TEST(ItoIntegrate, CommutesWithBoundedOperators) {
  std::mt19937_64 rng(13);
  const QWienerSpec spec(HilbertSpec(2, "U"), Eigen::Vector2d(1.0, 0.3));
  const auto noise = sample_increments(spec, TimeGrid(1.0, 100), 5, 30);
  const IntegrandSpec phi = IntegrandSpec::adapted(
      HilbertSpec(2, "U"), HilbertSpec(3), [](std::size_t, const IncrementHistory& p) {
        Eigen::MatrixXd m(3, 2);
        m << 1.0, std::cos(p.wiener(0)), 0.0, 0.5, std::tanh(p.wiener(1)), -1.0;
        return m;
      });
  const auto base = ito_integrate(phi, noise);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator q = DenseOperator(HilbertSpec(3), random_matrix(rng, 3, 3));
    const auto lhs = base.mapped(q);
    const auto rhs = ito_integrate(compose(q, phi), noise);
    EXPECT_LE(max_abs_diff(lhs, rhs), 1e-10 * std::max(1.0, max_abs(lhs.data())));
  }
}

TEST(ItoIntegrate, IsometryForDeterministicSteps) {
  const QWienerSpec spec(HilbertSpec(2, "U"), Eigen::Vector2d(1.0, 0.25));
  const TimeGrid grid(1.0, 50);
  const auto noise = sample_increments(spec, grid, 6, 10000);
  std::vector<DenseOperator> ops;
  double want = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    Eigen::MatrixXd m(2, 2);
    const double t = grid.node(i);
    m << 1.0 + t, 0.5, -t, std::sin(3.0 * t);
    ops.emplace_back(HilbertSpec(2), HilbertSpec(2), m);
    want += hs_norm(m, &spec.q()) * hs_norm(m, &spec.q()) * grid.dt();
  }
  const auto [mean, se] = second_moment_at_end(ito_integrate(IntegrandSpec::time_varying(ops), noise));
  EXPECT_NEAR(mean, want, 4.0 * se);
}

TEST(Predictability, AdaptedRuleReadingPastPasses) {
  const auto noise = sample_increments(scalar_noise(), TimeGrid(1.0, 20), 7, 3);
  const auto phi = IntegrandSpec::adapted(HilbertSpec(1), HilbertSpec(1),
                                          [](std::size_t, const IncrementHistory& p) {
                                            return Eigen::MatrixXd::Constant(1, 1, p.wiener(0));
                                          });
  for (std::size_t node = 0; node < 20; ++node) {
    EXPECT_TRUE(probe_predictability(phi, noise, 1, node));
  }
}

TEST(Predictability, RuleReadingCurrentIncrementIsCaught) {
  const auto noise = sample_increments(scalar_noise(), TimeGrid(1.0, 20), 7, 3);
  const auto cheat = IntegrandSpec::adapted(HilbertSpec(1), HilbertSpec(1),
                                            [](std::size_t node, const IncrementHistory& p) {
                                              return Eigen::MatrixXd::Constant(1, 1, p.at(node, 0));
                                            });
  EXPECT_FALSE(probe_predictability(cheat, noise, 0, 4));
  EXPECT_THROW(ito_integrate(cheat, noise), PredictabilityError);
}

TEST(SupNorm, Examples) {
  PathEnsemble x(TimeGrid(1.0, 2), 2, 1, {0.0, 0.0, 0.0, 0.0, 1.0, 3.0});
  EXPECT_EQ(sup_norm(x, 0), 0.0);
  EXPECT_EQ(sup_norm(x, 1), 3.0);
  EXPECT_EQ(sup_norm(x.scaled(-2.5), 1), 7.5);
}

TEST(Interpolate, LinearBetweenNodes) {
  PathEnsemble x(TimeGrid(1.0, 2), 1, 1, {0.0, 1.0, 3.0});
  EXPECT_DOUBLE_EQ(x.interpolate(0, 0.75)(0), 2.0);
  EXPECT_EQ(x.interpolate(0, 1.0)(0), 3.0);
  EXPECT_THROW(x.interpolate(0, 1.5), DomainError);
}

TEST(LrPathNorm, ConstantAndZero) {
  PathEnsemble c(TimeGrid(1.0, 3), 4, 1, std::vector<double>(16, 2.5));
  EXPECT_NEAR(lr_path_norm(c, 3.0).estimate, 2.5, 1e-15);
  EXPECT_EQ(lr_path_norm(c, 3.0).standard_error, 0.0);
  EXPECT_EQ(lr_path_norm(PathEnsemble(TimeGrid(1.0, 3), 4, 2), 2.0).estimate, 0.0);
  EXPECT_THROW(lr_path_norm(c, 0.5), DomainError);
}

TEST(LrPathNorm, BrownianSupAgainstReflectionOracle) {
  // The series oracle and the closed form 2G agree.
  const double oracle_sq = oracle::brownian_sup_second_moment();
  ASSERT_NEAR(oracle_sq, oracle::kTwoCatalan, 1e-9);
  const double target = std::sqrt(oracle_sq);

  const TimeGrid grid(1.0, 2000);
  const auto noise = sample_increments(scalar_noise(), grid, 8, 20000);
  const auto est = lr_path_norm(ito_integrate(constant(Eigen::MatrixXd::Ones(1, 1)), noise), 2.0);
  // Node sampling misses excursions between nodes: the bias is negative and
  // of order sqrt(dt) (about 0.58 sqrt(dt) for the scalar sup).
  const double bias = 0.5826 * std::sqrt(grid.dt());
  EXPECT_LE(est.estimate, target + 4.0 * est.standard_error);
  EXPECT_NEAR(est.estimate, target - bias, 4.0 * est.standard_error + 0.5 * bias);
}

TEST(WritePathsCsv, HeaderAndRows) {
  PathEnsemble x(TimeGrid(1.0, 1), 2, 2, {0.0, 0.0, 0.1, 0.2, 0.0, 0.0, 1.0, -1.0});
  std::ostringstream out;
  write_paths_csv(x, out, 1);
  EXPECT_EQ(out.str(), "path_id,t,coord_0,coord_1\n0,0,0,0\n0,1,0.10000000000000001,0.20000000000000001\n");
}

TEST(IncrementHistory, CachedWienerMatchesSummed) {
  const std::vector<double> inc{0.1, -0.2, 0.3, 0.4, -0.5, 0.6};
  const IncrementHistory summed(inc, 2, 2, 0.1);
  const std::vector<double> w{summed.wiener(0), summed.wiener(1)};
  const IncrementHistory cached(inc, 2, 2, 0.1, w);
  EXPECT_EQ(cached.wiener(0), 0.1 + 0.3);
  EXPECT_EQ(cached.wiener(1), -0.2 + 0.4);
  EXPECT_THROW(cached.step(2), PredictabilityError);
  EXPECT_THROW(IncrementHistory(inc, 2, 2, 0.1, std::span<const double>(w).first(1)), DimensionError);
}
