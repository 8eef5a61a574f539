#include "stochconv/convolution.hpp"

#include "stochconv/error.hpp"
#include "stochconv/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace stochconv {

namespace {

void check_open_unit(double beta, const char* who) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError(std::string(who) + ": beta must lie in (0, 1)");
  }
}

void check_factorization_beta(double beta, double r, const char* who) {
  if (!(r > 1.0) || !std::isfinite(r)) {
    throw DomainError(std::string(who) + ": r must exceed 1");
  }
  if (!(beta > 1.0 / r && beta < 1.0)) {
    throw DomainError(std::string(who) + ": beta must lie in (1/r, 1)");
  }
}

/// Operators L_m, m = 1..N, applied as out_k = sum_{m=1}^{k} L_m u_{k-m}.
/// Diagonal semigroups keep only the diagonals.
struct LagKernel {
  bool diagonal = true;
  std::size_t dim = 0;
  Eigen::MatrixXd diag;                 // dim x (N+1), column m
  std::vector<Eigen::MatrixXd> dense;   // index m

  static LagKernel build(const SemigroupSpec& sg, const TimeGrid& grid,
                         const std::function<double(std::size_t)>& scalar) {
    LagKernel k;
    k.dim = sg.dim();
    const std::size_t n = grid.steps();
    const double dt = grid.dt();
    if (sg.kind() == SemigroupSpec::Kind::diagonal) {
      k.diagonal = true;
      k.diag.setZero(static_cast<Eigen::Index>(k.dim), static_cast<Eigen::Index>(n + 1));
      for (std::size_t m = 1; m <= n; ++m) {
        const double s = scalar(m);
        for (std::size_t h = 0; h < k.dim; ++h) {
          k.diag(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(m)) =
              s * std::exp(-sg.spectrum()(static_cast<Eigen::Index>(h)) * (static_cast<double>(m) * dt));
        }
      }
    } else {
      k.diagonal = false;
      k.dense.resize(n + 1);
      for (std::size_t m = 1; m <= n; ++m) {
        k.dense[m] = scalar(m) * expm((static_cast<double>(m) * dt) * sg.generator());
      }
    }
    return k;
  }

  /// input: dim x N columns u_0..u_{N-1}; output span: (N+1) x dim row-major.
  void convolve(const Eigen::MatrixXd& input, std::span<double> out) const {
    const auto n = static_cast<std::size_t>(input.cols());
    std::fill(out.begin(), out.end(), 0.0);
    if (diagonal) {
      for (std::size_t h = 0; h < dim; ++h) {
        const auto hh = static_cast<Eigen::Index>(h);
        for (std::size_t k = 1; k <= n; ++k) {
          double acc = 0.0;
          for (std::size_t m = 1; m <= k; ++m) {
            acc += diag(hh, static_cast<Eigen::Index>(m)) * input(hh, static_cast<Eigen::Index>(k - m));
          }
          out[k * dim + h] = acc;
        }
      }
      return;
    }
    Eigen::VectorXd acc(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 1; k <= n; ++k) {
      acc.setZero();
      for (std::size_t m = 1; m <= k; ++m) {
        acc.noalias() += dense[m] * input.col(static_cast<Eigen::Index>(k - m));
      }
      std::copy(acc.data(), acc.data() + dim, out.begin() + static_cast<std::ptrdiff_t>(k * dim));
    }
  }
};

}  // namespace

double beta_kernel_integral(double beta) {
  check_open_unit(beta, "beta_kernel_integral");
  using boost::math::quadrature::gauss_kronrod;
  constexpr unsigned depth = 15;
  constexpr double tol = 1e-12;
  // [0, 1/2]:  w = u^{1/(1-beta)} absorbs w^{-beta}.
  const double a = 1.0 / (1.0 - beta);
  const auto left = [beta, a](double u) { return a * std::pow(1.0 - std::pow(u, a), beta - 1.0); };
  // [1/2, 1]:  1 - w = u^{1/beta} absorbs (1-w)^{beta-1}.
  const double b = 1.0 / beta;
  const auto right = [beta, b](double u) { return b * std::pow(1.0 - std::pow(u, b), -beta); };
  const double i1 = gauss_kronrod<double, 31>::integrate(left, 0.0, std::pow(0.5, 1.0 - beta), depth, tol);
  const double i2 = gauss_kronrod<double, 31>::integrate(right, 0.0, std::pow(0.5, beta), depth, tol);
  return i1 + i2;
}

double c_beta(double beta) {
  check_open_unit(beta, "c_beta");
  return 1.0 / beta_kernel_integral(beta);
}

void ConvolutionRequest::validate(bool factorization) const {
  if (!noise) {
    throw std::invalid_argument("ConvolutionRequest: missing noise ensemble");
  }
  phi.check_compatible(*noise);
  detail::require_dim(phi.codomain().dim(), semigroup.dim(), "integrand codomain vs semigroup");
  if (!(p >= 1.0) || !(q >= 1.0)) {
    throw DomainError("ConvolutionRequest: p and q must be at least 1");
  }
  if (factorization) {
    check_factorization_beta(beta, r, "ConvolutionRequest");
  } else if (!(beta >= 0.0 && beta < 1.0)) {
    throw DomainError("ConvolutionRequest: beta must lie in [0, 1)");
  }
}

PathEnsemble direct_convolution(const ConvolutionRequest& req) {
  req.validate(false);
  const NoiseEnsemble& noise = *req.noise;
  const std::size_t dim = req.semigroup.dim();
  const std::size_t n = noise.steps();
  const Eigen::MatrixXd step = to_matrix(semigroup_eval(req.semigroup, noise.grid().dt()));
  const bool diagonal = req.semigroup.kind() == SemigroupSpec::Kind::diagonal;
  const Eigen::VectorXd step_diag = step.diagonal();

  PathEnsemble out(noise.grid(), noise.paths(), dim);
  // X_{k+1} = S(dt) (X_k + Phi_k dW_k), which by the semigroup law equals
  // sum_{i<=k} S(t_{k+1} - t_i) Phi_i dW_i.
  parallel_for(noise.paths(), [&](std::size_t m) {
    const Eigen::MatrixXd v = integrand_increments(req.phi, noise, m);
    auto dst = out.path(m);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < n; ++k) {
      x += v.col(static_cast<Eigen::Index>(k));
      if (diagonal) {
        x = step_diag.cwiseProduct(x);
      } else {
        x = step * x;
      }
      std::copy(x.data(), x.data() + dim, dst.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim));
    }
  });
  return out;
}

PathEnsemble kernel_convolution(const ConvolutionRequest& req) {
  req.validate(false);
  const NoiseEnsemble& noise = *req.noise;
  const double dt = noise.grid().dt();
  const double beta = req.beta;
  const LagKernel kernel = LagKernel::build(req.semigroup, noise.grid(), [dt, beta](std::size_t m) {
    return beta == 0.0 ? 1.0 : std::pow(static_cast<double>(m) * dt, -beta);
  });
  PathEnsemble out(noise.grid(), noise.paths(), req.semigroup.dim());
  parallel_for(noise.paths(), [&](std::size_t m) {
    kernel.convolve(integrand_increments(req.phi, noise, m), out.path(m));
  });
  return out;
}

PathEnsemble factorization_smoothing(const PathEnsemble& y, const SemigroupSpec& semigroup,
                                     double beta, double r) {
  check_factorization_beta(beta, r, "factorization_smoothing");
  detail::require_dim(y.dim(), semigroup.dim(), "factorization_smoothing");
  const TimeGrid& grid = y.grid();
  const double dt = grid.dt();
  const double cb = c_beta(beta);
  // Exact integral of (t_k - s)^{beta-1} over [t_j, t_{j+1}], lag m = k - j.
  const LagKernel kernel = LagKernel::build(semigroup, grid, [dt, beta, cb](std::size_t m) {
    const double outer = std::pow(static_cast<double>(m) * dt, beta);
    const double inner = m == 1 ? 0.0 : std::pow(static_cast<double>(m - 1) * dt, beta);
    return cb * (outer - inner) / beta;
  });
  PathEnsemble out(grid, y.paths(), y.dim());
  const auto dim = static_cast<Eigen::Index>(y.dim());
  const auto n = static_cast<Eigen::Index>(grid.steps());
  parallel_for(y.paths(), [&](std::size_t m) {
    const auto src = y.path(m);
    // Columns Y(t_0) .. Y(t_{N-1}); node values are stored row-major per node.
    const Eigen::Map<const Eigen::MatrixXd> nodes(src.data(), dim, n);
    kernel.convolve(nodes, out.path(m));
  });
  return out;
}

PathEnsemble factorized_convolution(const ConvolutionRequest& req) {
  req.validate(true);
  return factorization_smoothing(kernel_convolution(req), req.semigroup, req.beta, req.r);
}

double semigroup_grid_bound(const SemigroupSpec& semigroup, const TimeGrid& grid) {
  return semigroup.bound(grid.horizon(), grid.steps());
}

double holder_bound_constant(double beta, double r, double horizon, double bound_m) {
  check_factorization_beta(beta, r, "holder_bound_constant");
  const double e = (beta - 1.0) * r / (r - 1.0);
  const double integral = std::pow(horizon, e + 1.0) / (e + 1.0);
  return c_beta(beta) * bound_m * std::pow(integral, (r - 1.0) / r);
}

double discrete_lr_norm(const PathEnsemble& y, std::size_t path, double r) {
  if (!(r >= 1.0)) {
    throw DomainError("discrete_lr_norm: r must be at least 1");
  }
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < y.nodes(); ++j) {
    s += std::pow(y.norm_at(path, j), r);
  }
  return std::pow(s * y.grid().dt(), 1.0 / r);
}

HolderCheck check_holder_bound(const PathEnsemble& smoothed, const PathEnsemble& y,
                               const SemigroupSpec& semigroup, double beta, double r,
                               double slack) {
  require_same_shape(smoothed, y, "check_holder_bound");
  HolderCheck check;
  check.bound_m = semigroup_grid_bound(semigroup, y.grid());
  check.constant = holder_bound_constant(beta, r, y.grid().horizon(), check.bound_m);
  check.sup_smoothed.resize(y.paths());
  check.bound.resize(y.paths());
  for (std::size_t m = 0; m < y.paths(); ++m) {
    const double lhs = sup_norm(smoothed, m);
    const double rhs = check.constant * discrete_lr_norm(y, m, r);
    check.sup_smoothed[m] = lhs;
    check.bound[m] = rhs;
    if (lhs > rhs + slack) {
      ++check.violations;
    }
    if (rhs > 0.0) {
      check.max_ratio = std::max(check.max_ratio, lhs / rhs);
    }
  }
  return check;
}

DiscrepancyReport compare(const PathEnsemble& a, const PathEnsemble& b, std::uint64_t seed) {
  require_same_shape(a, b, "compare");
  DiscrepancyReport rep;
  rep.paths = a.paths();
  rep.nodes = a.nodes();
  rep.dim = a.dim();
  rep.dt = a.grid().dt();
  rep.seed = seed;
  rep.per_node_mean_abs.assign(rep.nodes, 0.0);
  rep.per_path_sup.assign(rep.paths, 0.0);
  for (std::size_t m = 0; m < rep.paths; ++m) {
    for (std::size_t k = 0; k < rep.nodes; ++k) {
      const auto x = a.value(m, k);
      const auto z = b.value(m, k);
      double d2 = 0.0;
      for (std::size_t c = 0; c < rep.dim; ++c) {
        d2 += (x[c] - z[c]) * (x[c] - z[c]);
      }
      const double d = std::sqrt(d2);
      rep.per_node_mean_abs[k] += d;
      rep.per_path_sup[m] = std::max(rep.per_path_sup[m], d);
    }
  }
  for (double& v : rep.per_node_mean_abs) {
    v /= static_cast<double>(rep.paths);
    rep.max_node_mean_abs = std::max(rep.max_node_mean_abs, v);
  }
  for (double s : rep.per_path_sup) {
    rep.mean_path_sup += s;
    rep.ensemble_sup = std::max(rep.ensemble_sup, s);
  }
  rep.mean_path_sup /= static_cast<double>(rep.paths);
  return rep;
}

double empirical_modulus(const PathEnsemble& x, double exponent) {
  const double scale = std::pow(x.grid().dt(), exponent);
  double worst = 0.0;
  for (std::size_t m = 0; m < x.paths(); ++m) {
    for (std::size_t k = 0; k + 1 < x.nodes(); ++k) {
      const auto a = x.value(m, k);
      const auto b = x.value(m, k + 1);
      double d2 = 0.0;
      for (std::size_t c = 0; c < x.dim(); ++c) {
        d2 += (b[c] - a[c]) * (b[c] - a[c]);
      }
      worst = std::max(worst, std::sqrt(d2) / scale);
    }
  }
  return worst;
}

}  // namespace stochconv
