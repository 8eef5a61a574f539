#pragma once

// Stochastic convolutions  X(t) = int_0^t S(t-s) Phi_s dW_s  computed
// directly and through the factorization
//   X(t) = c_beta int_0^t (t-s)^{beta-1} S(t-s) Y(s) ds,
//   Y(s) = int_0^s (s-u)^{-beta} S(s-u) Phi_u dW_u.

#include "stochconv/hilbert.hpp"
#include "stochconv/integrand.hpp"
#include "stochconv/ito.hpp"
#include "stochconv/noise.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace stochconv {

/// int_0^1 (1-w)^{beta-1} w^{-beta} dw by adaptive Gauss-Kronrod after
/// substitutions that remove both endpoint singularities.
double beta_kernel_integral(double beta);

/// c_beta = 1 / beta_kernel_integral(beta), for 0 < beta < 1.
double c_beta(double beta);

struct ConvolutionRequest {
  IntegrandSpec phi;
  SemigroupSpec semigroup;
  std::shared_ptr<const NoiseEnsemble> noise;
  double beta = 0.3;
  double r = 4.0;
  double p = 2.0;
  double q = 2.0;

  /// Dimensions, exponents and, when `factorization` is set, 1/r < beta < 1.
  void validate(bool factorization) const;
};

/// Node t_k value sum_{i<k} S(t_k - t_i) Phi_{t_i} dW_i; t_0 value 0.
PathEnsemble direct_convolution(const ConvolutionRequest& req);

/// Node t_k value sum_{i<k} (t_k - t_i)^{-beta} S(t_k - t_i) Phi_{t_i} dW_i,
/// 0 <= beta < 1. The singular factor only ever sees lags >= dt.
PathEnsemble kernel_convolution(const ConvolutionRequest& req);

/// Product-integration of the Riemann-Liouville smoothing step:
///   c_beta sum_{j<k} ((t_k-t_j)^beta - (t_k-t_{j+1})^beta)/beta S(t_k-t_j) Y(t_j).
/// Requires 1/r < beta < 1.
PathEnsemble factorization_smoothing(const PathEnsemble& y, const SemigroupSpec& semigroup,
                                     double beta, double r);

/// factorization_smoothing(kernel_convolution(req)).
PathEnsemble factorized_convolution(const ConvolutionRequest& req);

/// M = sup |S(t)| over the lags of `grid` (1 for diagonal semigroups).
double semigroup_grid_bound(const SemigroupSpec& semigroup, const TimeGrid& grid);

/// c_beta M (int_0^T w^{(beta-1)r/(r-1)} dw)^{(r-1)/r}.
double holder_bound_constant(double beta, double r, double horizon, double bound_m);

/// (sum_{j<N} |Y(t_j)|^r dt)^{1/r}: the L^r norm of the left-node step
/// interpolant of one path.
double discrete_lr_norm(const PathEnsemble& y, std::size_t path, double r);

struct HolderCheck {
  double constant = 0.0;
  double bound_m = 1.0;
  std::size_t violations = 0;
  /// max over paths of sup|C| / (constant * |Y|_r); <= 1 when the bound holds.
  double max_ratio = 0.0;
  std::vector<double> sup_smoothed;
  std::vector<double> bound;
};

/// Checks sup_t |C(t)| <= constant * |Y|_{L^r} + slack for every path.
HolderCheck check_holder_bound(const PathEnsemble& smoothed, const PathEnsemble& y,
                               const SemigroupSpec& semigroup, double beta, double r,
                               double slack = 1e-10);

struct DiscrepancyReport {
  std::vector<double> per_node_mean_abs;
  std::vector<double> per_path_sup;
  /// Mean over paths of the pathwise sup over nodes.
  double mean_path_sup = 0.0;
  /// max over nodes of per_node_mean_abs.
  double max_node_mean_abs = 0.0;
  /// max over paths and nodes.
  double ensemble_sup = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::size_t paths = 0;
  std::size_t nodes = 0;
  std::size_t dim = 0;
};

DiscrepancyReport compare(const PathEnsemble& a, const PathEnsemble& b, std::uint64_t seed = 0);

/// max over paths and steps of |X(t_{k+1}) - X(t_k)| / dt^exponent.
double empirical_modulus(const PathEnsemble& x, double exponent);

}  // namespace stochconv
