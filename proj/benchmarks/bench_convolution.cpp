#include <stochconv/convolution.hpp>
#include <stochconv/norms.hpp>

#include <benchmark/benchmark.h>

#include <memory>

using namespace stochconv;

namespace {

ConvolutionRequest ou_request(std::size_t steps, std::size_t paths) {
  const HilbertSpec u(1, "U");
  return ConvolutionRequest{
      IntegrandSpec::constant(DenseOperator(u, HilbertSpec(1), Eigen::MatrixXd::Ones(1, 1))),
      SemigroupSpec::diagonal(HilbertSpec(1), Eigen::VectorXd::Ones(1)),
      std::make_shared<const NoiseEnsemble>(
          sample_increments(QWienerSpec(u, Eigen::VectorXd::Ones(1)), TimeGrid(1.0, steps), 1, paths)),
      0.3, 4.0};
}

void BM_SampleIncrements(benchmark::State& state) {
  const auto steps = static_cast<std::size_t>(state.range(0));
  const QWienerSpec q(HilbertSpec(8, "U"), Eigen::VectorXd::Ones(8));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_increments(q, TimeGrid(1.0, steps), 1, 100));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(steps) * 800);
}
BENCHMARK(BM_SampleIncrements)->Arg(500)->Arg(2000);

void BM_Direct(benchmark::State& state) {
  const auto req = ou_request(static_cast<std::size_t>(state.range(0)), 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(direct_convolution(req));
  }
}
BENCHMARK(BM_Direct)->Arg(200)->Arg(800);

void BM_Factorized(benchmark::State& state) {
  const auto req = ou_request(static_cast<std::size_t>(state.range(0)), 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(factorized_convolution(req));
  }
}
BENCHMARK(BM_Factorized)->Arg(200)->Arg(800);

void BM_CBeta(benchmark::State& state) {
  double beta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(c_beta(beta));
    beta = beta > 0.8 ? 0.1 : beta + 0.1;
  }
}
BENCHMARK(BM_CBeta);

void BM_Lpq(benchmark::State& state) {
  const auto req = ou_request(400, 1000);
  const auto x = direct_convolution(req);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_lpq(x, 2.0, 2.0));
  }
}
BENCHMARK(BM_Lpq);

}  // namespace
BENCHMARK_MAIN();
