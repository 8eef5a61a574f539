#include <stochconv/error.hpp>
#include <stochconv/noise.hpp>
#include <stochconv/parallel.hpp>
#include <stochconv/random.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace stochconv;

namespace {

QWienerSpec spec_of(std::initializer_list<double> q) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(q.size()));
  Eigen::Index i = 0;
  for (double x : q) {
    v(i++) = x;
  }
  return QWienerSpec(HilbertSpec(v.size(), "U"), v);
}

struct Moments {
  double var;
  double se;
};

Moments variance_of(const std::vector<double>& x) {
  const auto n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) {
    mean += v;
  }
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return {m2 * n / (n - 1.0), std::sqrt((m4 - m2 * m2) / n)};
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  for (const auto& kat : oracle::philox_kat()) {
    EXPECT_EQ(Philox4x32::apply(kat.counter, kat.key), kat.expected);
  }
}

TEST(CounterStream, ReproducibleAndInRange) {
  CounterStream a(42, 7);
  CounterStream b(42, 7);
  CounterStream c(42, 8);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
    differs = differs || x != c.uniform();
    const std::size_t k = a.integer(3, 5);
    EXPECT_EQ(k, b.integer(3, 5));
    EXPECT_GE(k, 3u);
    EXPECT_LE(k, 5u);
  }
  EXPECT_TRUE(differs);
}

TEST(TimeGrid, NodesAndLastNode) {
  const TimeGrid g(0.7, 3);
  EXPECT_EQ(g.nodes(), 4u);
  EXPECT_EQ(g.node(0), 0.0);
  EXPECT_EQ(g.node(3), 0.7);
  EXPECT_THROW(TimeGrid(0.0, 3), DomainError);
  EXPECT_THROW(TimeGrid(1.0, 0), DomainError);
}

TEST(SampleIncrements, ZeroCovarianceGivesExactZeros) {
  const auto e = sample_increments(spec_of({0.0, 0.0}), TimeGrid(1.0, 50), 9, 20);
  for (double v : e.data()) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(SampleIncrements, DeterministicAcrossRunsAndThreads) {
  const auto spec = spec_of({1.0, 0.5, 0.1});
  const TimeGrid grid(1.0, 64);
  const std::size_t saved = worker_threads();
  set_worker_threads(1);
  const auto a = sample_increments(spec, grid, 123, 37);
  set_worker_threads(4);
  const auto b = sample_increments(spec, grid, 123, 37);
  set_worker_threads(8);
  const auto c = sample_increments(spec, grid, 123, 37);
  set_worker_threads(saved);
  EXPECT_EQ(a.data(), b.data());
  EXPECT_EQ(a.data(), c.data());
  EXPECT_NE(a.data(), sample_increments(spec, grid, 124, 37).data());
}

TEST(SampleIncrements, BatchesConcatenate) {
  const auto spec = spec_of({1.0, 2.0});
  const TimeGrid grid(1.0, 10);
  const auto full = sample_increments(spec, grid, 5, 9);
  const auto tail = sample_increments(spec, grid, 5, 4, 5);
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_EQ(tail.at(m, i, k), full.at(m + 5, i, k));
      }
    }
  }
}

TEST(SampleIncrements, SingleIncrementVariance) {
  const auto e = sample_increments(spec_of({1.0}), TimeGrid(0.01, 1), 2718, 100000);
  const auto mom = variance_of(e.data());
  EXPECT_NEAR(mom.var, 0.01, 4.0 * mom.se);
}

TEST(SampleIncrements, KeyedNormalMatchesEnsemble) {
  const auto e = sample_increments(spec_of({4.0}), TimeGrid(1.0, 4), 31, 3);
  EXPECT_EQ(e.at(2, 3, 0), 2.0 * std::sqrt(0.25) * keyed_normal(31, 2, 3, 0));
}

TEST(SampleIncrements, RejectsZeroPaths) {
  EXPECT_THROW(sample_increments(spec_of({1.0}), TimeGrid(1.0, 4), 1, 0), DomainError);
}

TEST(WienerValues, StartsAtZeroAndTelescopes) {
  const auto e = sample_increments(spec_of({1.0, 0.3}), TimeGrid(1.0, 8), 77, 2);
  const auto w = wiener_values(e, 1);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_EQ(w[1], 0.0);
  EXPECT_EQ(w[2], e.at(1, 0, 0));
  EXPECT_EQ(w[3], e.at(1, 0, 1));
}

TEST(WienerValues, CovarianceProperty) {
  // Var <W_t, e_k> = q_k t at every node, cross covariance 0.
  const auto spec = spec_of({1.0, 0.25, 0.04});
  const TimeGrid grid(2.0, 8);
  const std::size_t paths = 10000;
  const auto e = sample_increments(spec, grid, 4242, paths);
  std::vector<std::vector<double>> w(paths);
  for (std::size_t m = 0; m < paths; ++m) {
    w[m] = wiener_values(e, m);
  }
  for (std::size_t node : {2u, 5u, 8u}) {
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<double> x(paths);
      for (std::size_t m = 0; m < paths; ++m) {
        x[m] = w[m][node * 3 + k];
      }
      const auto mom = variance_of(x);
      EXPECT_NEAR(mom.var, spec.q()(static_cast<Eigen::Index>(k)) * grid.node(node), 4.0 * mom.se)
          << "node " << node << " mode " << k;
    }
    std::vector<double> prod(paths);
    for (std::size_t m = 0; m < paths; ++m) {
      prod[m] = w[m][node * 3 + 0] * w[m][node * 3 + 1];
    }
    double mean = 0.0;
    double sq = 0.0;
    for (double v : prod) {
      mean += v;
      sq += v * v;
    }
    mean /= paths;
    const double se = std::sqrt((sq / paths - mean * mean) / paths);
    EXPECT_NEAR(mean, 0.0, 4.0 * se);
  }
}

TEST(Coarsen, SumsConsecutiveIncrements) {
  const auto fine = sample_increments(spec_of({1.0, 2.0}), TimeGrid(1.0, 12), 8, 3);
  const auto coarse = coarsen(fine, 4);
  EXPECT_EQ(coarse.steps(), 3u);
  EXPECT_EQ(coarse.grid().horizon(), 1.0);
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < 2; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
          s += fine.at(m, 4 * i + j, k);
        }
        EXPECT_EQ(coarse.at(m, i, k), s);
      }
    }
  }
  // Final Wiener values agree up to summation order.
  const auto wf = wiener_values(fine, 1);
  const auto wc = wiener_values(coarse, 1);
  EXPECT_NEAR(wf[12 * 2], wc[3 * 2], 1e-14);
  EXPECT_THROW(coarsen(fine, 5), DomainError);
}

TEST(NoiseBinary, RoundTrip) {
  const auto e = sample_increments(spec_of({1.0, 0.5}), TimeGrid(1.0, 7), 99, 3);
  const auto file = std::filesystem::temp_directory_path() / "stochconv_noise_roundtrip.bin";
  write_noise_binary(e, file);
  {
    std::ifstream in(file, std::ios::binary);
    char magic[8];
    in.read(magic, 8);
    EXPECT_EQ(std::string(magic, 8), "QWIENER1");
  }
  EXPECT_EQ(std::filesystem::file_size(file), 8u + 24u + 8u * 3u * 7u * 2u);
  const auto dump = read_noise_binary(file);
  EXPECT_EQ(dump.paths, 3u);
  EXPECT_EQ(dump.steps, 7u);
  EXPECT_EQ(dump.dim, 2u);
  EXPECT_EQ(dump.increments, e.data());
  std::filesystem::remove(file);
}
