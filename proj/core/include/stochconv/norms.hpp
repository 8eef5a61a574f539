#pragma once

// Monte Carlo estimators of the mixed process norms
//   |X|_{p,q}    = ( int_0^T (E|X_t|^p)^{q/p} dt )^{1/q}
//   |z|_{p,q,r}  = ( int_0^T ( int_0^T (E|z(s,t)|^p)^{q/p} ds )^{r/q} dt )^{1/r}
// with node-trapezoid time quadrature and bootstrap standard errors.

#include "stochconv/hilbert.hpp"
#include "stochconv/integrand.hpp"
#include "stochconv/ito.hpp"
#include "stochconv/noise.hpp"

#include <cstdint>
#include <vector>

namespace stochconv {

struct NormReport {
  double estimate = 0.0;
  double standard_error = 0.0;
  double p = 1.0;
  double q = 1.0;
  double r = 0.0;  // 0 when not applicable
  std::size_t paths = 0;
  std::size_t nodes = 0;
};

struct BootstrapOptions {
  std::size_t resamples = 200;
  std::uint64_t seed = 0xb007;
};

NormReport estimate_lpq(const PathEnsemble& x, double p, double q, const BootstrapOptions& opts = {});

/// zeta((omega, s), t) sampled on grid x grid: for every t-node an ensemble
/// indexed by s, stored [t][path][s][coord].
class TwoParameterEnsemble {
 public:
  TwoParameterEnsemble(TimeGrid grid, std::size_t paths, std::size_t dim);
  TwoParameterEnsemble(TimeGrid grid, std::size_t paths, std::size_t dim, std::vector<double> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t paths() const noexcept { return paths_; }
  std::size_t nodes() const noexcept { return grid_.nodes(); }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> value(std::size_t t, std::size_t m, std::size_t s) const {
    return {values_.data() + index(t, m, s), dim_};
  }
  std::span<double> value(std::size_t t, std::size_t m, std::size_t s) {
    return {values_.data() + index(t, m, s), dim_};
  }
  double norm_at(std::size_t t, std::size_t m, std::size_t s) const;
  const std::vector<double>& data() const noexcept { return values_; }

 private:
  std::size_t index(std::size_t t, std::size_t m, std::size_t s) const noexcept {
    return ((t * paths_ + m) * nodes() + s) * dim_;
  }

  TimeGrid grid_;
  std::size_t paths_;
  std::size_t dim_;
  std::vector<double> values_;
};

NormReport estimate_lpqr(const TwoParameterEnsemble& zeta, double p, double q, double r,
                         const BootstrapOptions& opts = {});

/// Phi_{t_k} Q^{1/2} as a flattened (column-major) H x U vector per node, so
/// the Euclidean norm of a node value is |Phi Q^{1/2}|_HS. Node t_N repeats
/// the last step value.
PathEnsemble integrand_field(const IntegrandSpec& phi, const NoiseEnsemble& noise);

/// 1_{s<t} (t-s)^{-beta} S(t-s) Phi_s Q^{1/2}, flattened like integrand_field.
TwoParameterEnsemble singular_kernel_field(const IntegrandSpec& phi, const SemigroupSpec& semigroup,
                                           double beta, const NoiseEnsemble& noise);

}  // namespace stochconv
