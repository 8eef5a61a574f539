#include "stochconv/norms.hpp"

#include "stochconv/error.hpp"
#include "stochconv/parallel.hpp"
#include "stochconv/random.hpp"

#include <cmath>
#include <numeric>

namespace stochconv {

namespace {

void check_exponents(std::initializer_list<double> es) {
  for (double e : es) {
    if (!(e >= 1.0) || !std::isfinite(e)) {
      throw DomainError("norm exponents must lie in [1, inf)");
    }
  }
}

/// Trapezoid over nodes of values[k] with spacing dt.
double trapezoid(const std::vector<double>& values, double dt) {
  if (values.size() < 2) {
    return 0.0;
  }
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t k = 1; k + 1 < values.size(); ++k) {
    s += values[k];
  }
  return s * dt;
}

/// Path indices for bootstrap replicate b (b = resamples means identity).
std::vector<std::size_t> resample(std::size_t n, std::size_t b, const BootstrapOptions& opts) {
  std::vector<std::size_t> idx(n);
  const auto key = Philox4x32::key_from_seed(opts.seed);
  for (std::size_t m = 0; m < n; ++m) {
    idx[m] = static_cast<std::size_t>(counter_index(
        {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(m),
         static_cast<std::uint32_t>(static_cast<std::uint64_t>(m) >> 32), 0x6e6f726du},
        key, n));
  }
  return idx;
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) {
    return 0.0;
  }
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) {
    v += (x - mean) * (x - mean);
  }
  return std::sqrt(v / static_cast<double>(xs.size() - 1));
}

/// Estimate and bootstrap SE for a functional of per-path samples: `eval`
/// receives the list of path indices to average over.
template <typename Eval>
std::pair<double, double> with_bootstrap(std::size_t paths, const BootstrapOptions& opts, Eval eval) {
  std::vector<std::size_t> all(paths);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double estimate = eval(all);
  if (paths < 2 || opts.resamples < 2) {
    return {estimate, 0.0};
  }
  std::vector<double> reps(opts.resamples);
  parallel_for(opts.resamples, [&](std::size_t b) { reps[b] = eval(resample(paths, b, opts)); });
  return {estimate, sample_sd(reps)};
}

}  // namespace

NormReport estimate_lpq(const PathEnsemble& x, double p, double q, const BootstrapOptions& opts) {
  check_exponents({p, q});
  const std::size_t paths = x.paths();
  const std::size_t nodes = x.nodes();
  // powered[m * nodes + k] = |X_m(t_k)|^p
  std::vector<double> powered(paths * nodes);
  for (std::size_t m = 0; m < paths; ++m) {
    for (std::size_t k = 0; k < nodes; ++k) {
      powered[m * nodes + k] = std::pow(x.norm_at(m, k), p);
    }
  }
  const double dt = x.grid().dt();
  const auto eval = [&](const std::vector<std::size_t>& idx) {
    std::vector<double> moment(nodes, 0.0);
    for (std::size_t m : idx) {
      for (std::size_t k = 0; k < nodes; ++k) {
        moment[k] += powered[m * nodes + k];
      }
    }
    for (double& v : moment) {
      v = std::pow(v / static_cast<double>(idx.size()), q / p);
    }
    return std::pow(trapezoid(moment, dt), 1.0 / q);
  };
  const auto [est, se] = with_bootstrap(paths, opts, eval);
  NormReport rep;
  rep.estimate = est;
  rep.standard_error = se;
  rep.p = p;
  rep.q = q;
  rep.paths = paths;
  rep.nodes = nodes;
  return rep;
}

TwoParameterEnsemble::TwoParameterEnsemble(TimeGrid grid, std::size_t paths, std::size_t dim)
    : TwoParameterEnsemble(grid, paths, dim,
                           std::vector<double>(grid.nodes() * paths * grid.nodes() * dim, 0.0)) {}

TwoParameterEnsemble::TwoParameterEnsemble(TimeGrid grid, std::size_t paths, std::size_t dim,
                                           std::vector<double> values)
    : grid_(grid), paths_(paths), dim_(dim), values_(std::move(values)) {
  if (paths_ == 0 || dim_ == 0) {
    throw DimensionError("TwoParameterEnsemble: paths and dim must be positive");
  }
  detail::require_dim(values_.size(), grid_.nodes() * paths_ * grid_.nodes() * dim_,
                      "TwoParameterEnsemble values (ragged ensemble)");
}

double TwoParameterEnsemble::norm_at(std::size_t t, std::size_t m, std::size_t s) const {
  const auto v = value(t, m, s);
  double acc = 0.0;
  for (double c : v) {
    acc += c * c;
  }
  return std::sqrt(acc);
}

NormReport estimate_lpqr(const TwoParameterEnsemble& zeta, double p, double q, double r,
                         const BootstrapOptions& opts) {
  check_exponents({p, q, r});
  const std::size_t paths = zeta.paths();
  const std::size_t nodes = zeta.nodes();
  // powered[(m * nodes + t) * nodes + s] = |zeta_m(s, t)|^p
  std::vector<double> powered(paths * nodes * nodes);
  for (std::size_t t = 0; t < nodes; ++t) {
    for (std::size_t m = 0; m < paths; ++m) {
      for (std::size_t s = 0; s < nodes; ++s) {
        powered[(m * nodes + t) * nodes + s] = std::pow(zeta.norm_at(t, m, s), p);
      }
    }
  }
  const double dt = zeta.grid().dt();
  const auto eval = [&](const std::vector<std::size_t>& idx) {
    std::vector<double> outer(nodes);
    std::vector<double> inner(nodes);
    for (std::size_t t = 0; t < nodes; ++t) {
      std::fill(inner.begin(), inner.end(), 0.0);
      for (std::size_t m : idx) {
        const double* row = powered.data() + (m * nodes + t) * nodes;
        for (std::size_t s = 0; s < nodes; ++s) {
          inner[s] += row[s];
        }
      }
      for (double& v : inner) {
        v = std::pow(v / static_cast<double>(idx.size()), q / p);
      }
      outer[t] = std::pow(trapezoid(inner, dt), r / q);
    }
    return std::pow(trapezoid(outer, dt), 1.0 / r);
  };
  const auto [est, se] = with_bootstrap(paths, opts, eval);
  NormReport rep;
  rep.estimate = est;
  rep.standard_error = se;
  rep.p = p;
  rep.q = q;
  rep.r = r;
  rep.paths = paths;
  rep.nodes = nodes;
  return rep;
}

namespace {

Eigen::VectorXd sqrt_q(const NoiseEnsemble& noise) { return noise.spec().q().cwiseSqrt(); }

}  // namespace

PathEnsemble integrand_field(const IntegrandSpec& phi, const NoiseEnsemble& noise) {
  phi.check_compatible(noise);
  const std::size_t hdim = phi.codomain().dim();
  const std::size_t udim = phi.domain().dim();
  const Eigen::VectorXd root = sqrt_q(noise);
  PathEnsemble out(noise.grid(), noise.paths(), hdim * udim);
  parallel_for(noise.paths(), [&](std::size_t m) {
    for (std::size_t k = 0; k < out.nodes(); ++k) {
      const std::size_t node = std::min(k, noise.steps() - 1);
      const Eigen::MatrixXd v = integrand_value(phi, noise, m, node) * root.asDiagonal();
      auto dst = out.value(m, k);
      std::copy(v.data(), v.data() + v.size(), dst.begin());
    }
  });
  return out;
}

TwoParameterEnsemble singular_kernel_field(const IntegrandSpec& phi, const SemigroupSpec& semigroup,
                                           double beta, const NoiseEnsemble& noise) {
  phi.check_compatible(noise);
  detail::require_dim(phi.codomain().dim(), semigroup.dim(), "singular_kernel_field");
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw DomainError("singular_kernel_field: beta must lie in [0, 1)");
  }
  const std::size_t hdim = phi.codomain().dim();
  const std::size_t udim = phi.domain().dim();
  const std::size_t nodes = noise.grid().nodes();
  const double dt = noise.grid().dt();
  const Eigen::VectorXd root = sqrt_q(noise);

  std::vector<Eigen::MatrixXd> lag(nodes);
  for (std::size_t l = 1; l < nodes; ++l) {
    const double h = static_cast<double>(l) * dt;
    lag[l] = std::pow(h, -beta) * to_matrix(semigroup_eval(semigroup, h));
  }

  TwoParameterEnsemble out(noise.grid(), noise.paths(), hdim * udim);
  parallel_for(noise.paths(), [&](std::size_t m) {
    for (std::size_t s = 0; s + 1 < nodes; ++s) {
      const Eigen::MatrixXd base = integrand_value(phi, noise, m, s) * root.asDiagonal();
      for (std::size_t t = s + 1; t < nodes; ++t) {
        const Eigen::MatrixXd v = lag[t - s] * base;
        auto dst = out.value(t, m, s);
        std::copy(v.data(), v.data() + v.size(), dst.begin());
      }
    }
  });
  return out;
}

}  // namespace stochconv
