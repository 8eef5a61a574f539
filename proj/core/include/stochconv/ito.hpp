#pragma once

// Left-point Euler-Ito integration against Q-Wiener increments and the
// grid-sampled path ensembles it produces.

#include "stochconv/integrand.hpp"
#include "stochconv/noise.hpp"

#include <filesystem>
#include <ostream>
#include <span>
#include <vector>

namespace stochconv {

/// H-valued processes sampled at the grid nodes, [path][node][coord].
/// Between nodes a path is read as the linear interpolant.
class PathEnsemble {
 public:
  PathEnsemble(TimeGrid grid, std::size_t paths, std::size_t dim);
  PathEnsemble(TimeGrid grid, std::size_t paths, std::size_t dim, std::vector<double> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t paths() const noexcept { return paths_; }
  std::size_t nodes() const noexcept { return grid_.nodes(); }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> path(std::size_t m) const {
    return {values_.data() + m * nodes() * dim_, nodes() * dim_};
  }
  std::span<double> path(std::size_t m) { return {values_.data() + m * nodes() * dim_, nodes() * dim_}; }
  std::span<const double> value(std::size_t m, std::size_t node) const {
    return path(m).subspan(node * dim_, dim_);
  }
  std::span<double> value(std::size_t m, std::size_t node) { return path(m).subspan(node * dim_, dim_); }
  /// |X_m(t_node)|_H.
  double norm_at(std::size_t m, std::size_t node) const;
  /// Linear interpolation between the nodes bracketing t.
  Eigen::VectorXd interpolate(std::size_t m, double t) const;

  const std::vector<double>& data() const noexcept { return values_; }

  PathEnsemble scaled(double a) const;
  /// Pointwise application of a bounded operator on H.
  PathEnsemble mapped(const Operator& op) const;

  friend PathEnsemble operator+(const PathEnsemble& a, const PathEnsemble& b);
  friend PathEnsemble operator-(const PathEnsemble& a, const PathEnsemble& b);

 private:
  TimeGrid grid_;
  std::size_t paths_;
  std::size_t dim_;
  std::vector<double> values_;
};

void require_same_shape(const PathEnsemble& a, const PathEnsemble& b, const char* what);

/// Columns v_i = Phi_{t_i} dW_i, i = 0..N-1, for one path (dim H x N).
Eigen::MatrixXd integrand_increments(const IntegrandSpec& phi, const NoiseEnsemble& noise,
                                     std::size_t path);

/// I(t_k) = sum_{i<k} Phi_{t_i} dW_i for every path; I(t_0) = 0.
PathEnsemble ito_integrate(const IntegrandSpec& phi, const NoiseEnsemble& noise);

/// max over nodes of |X_m(t_k)|_H.
double sup_norm(const PathEnsemble& x, std::size_t path);

struct PathNormEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double r = 1.0;
  std::size_t paths = 0;
};

/// Monte Carlo estimate of (E sup_t |X_t|^r)^{1/r} with a delta-method
/// standard error.
PathNormEstimate lr_path_norm(const PathEnsemble& x, double r);

/// CSV with header path_id,t,coord_0..coord_{d-1}; values printed with 17
/// significant digits. `max_paths` limits how many paths are written.
void write_paths_csv(const PathEnsemble& x, std::ostream& out,
                     std::size_t max_paths = static_cast<std::size_t>(-1));
void write_paths_csv(const PathEnsemble& x, const std::filesystem::path& file,
                     std::size_t max_paths = static_cast<std::size_t>(-1));

}  // namespace stochconv
