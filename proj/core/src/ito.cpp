#include "stochconv/ito.hpp"

#include "stochconv/error.hpp"
#include "stochconv/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace stochconv {

PathEnsemble::PathEnsemble(TimeGrid grid, std::size_t paths, std::size_t dim)
    : PathEnsemble(grid, paths, dim, std::vector<double>(paths * grid.nodes() * dim, 0.0)) {}

PathEnsemble::PathEnsemble(TimeGrid grid, std::size_t paths, std::size_t dim,
                           std::vector<double> values)
    : grid_(grid), paths_(paths), dim_(dim), values_(std::move(values)) {
  if (paths_ == 0 || dim_ == 0) {
    throw DimensionError("PathEnsemble: paths and dim must be positive");
  }
  detail::require_dim(values_.size(), paths_ * grid_.nodes() * dim_, "PathEnsemble values");
}

double PathEnsemble::norm_at(std::size_t m, std::size_t node) const {
  const auto v = value(m, node);
  if (dim_ == 1) {
    return std::abs(v[0]);
  }
  double s = 0.0;
  for (double c : v) {
    s += c * c;
  }
  return std::sqrt(s);
}

Eigen::VectorXd PathEnsemble::interpolate(std::size_t m, double t) const {
  if (m >= paths_) {
    throw std::out_of_range("PathEnsemble::interpolate: path index out of range");
  }
  if (t < 0.0 || t > grid_.horizon()) {
    throw DomainError("PathEnsemble::interpolate: t outside [0, T]");
  }
  const double pos = t / grid_.dt();
  const std::size_t left = std::min(static_cast<std::size_t>(pos), grid_.steps() - 1);
  const double w = pos - static_cast<double>(left);
  const auto a = value(m, left);
  const auto b = value(m, left + 1);
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim_));
  for (std::size_t c = 0; c < dim_; ++c) {
    out(static_cast<Eigen::Index>(c)) = (1.0 - w) * a[c] + w * b[c];
  }
  return out;
}

PathEnsemble PathEnsemble::scaled(double a) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [a](double x) { return a * x; });
  return PathEnsemble(grid_, paths_, dim_, std::move(v));
}

PathEnsemble PathEnsemble::mapped(const Operator& op) const {
  detail::require_dim(domain_dim(op), dim_, "PathEnsemble::mapped");
  const std::size_t out_dim = codomain_dim(op);
  PathEnsemble out(grid_, paths_, out_dim);
  const Eigen::MatrixXd m = to_matrix(op);
  parallel_for(paths_, [&](std::size_t p) {
    for (std::size_t k = 0; k < nodes(); ++k) {
      const auto in = value(p, k);
      Eigen::Map<const Eigen::VectorXd> x(in.data(), static_cast<Eigen::Index>(dim_));
      auto dst = out.value(p, k);
      Eigen::Map<Eigen::VectorXd>(dst.data(), static_cast<Eigen::Index>(out_dim)) = m * x;
    }
  });
  return out;
}

void require_same_shape(const PathEnsemble& a, const PathEnsemble& b, const char* what) {
  if (!(a.grid() == b.grid()) || a.paths() != b.paths() || a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": ensembles differ in grid, path count or dim");
  }
}

PathEnsemble operator+(const PathEnsemble& a, const PathEnsemble& b) {
  require_same_shape(a, b, "PathEnsemble +");
  std::vector<double> v(a.values_.size());
  std::transform(a.values_.begin(), a.values_.end(), b.values_.begin(), v.begin(), std::plus<>{});
  return PathEnsemble(a.grid_, a.paths_, a.dim_, std::move(v));
}

PathEnsemble operator-(const PathEnsemble& a, const PathEnsemble& b) {
  require_same_shape(a, b, "PathEnsemble -");
  std::vector<double> v(a.values_.size());
  std::transform(a.values_.begin(), a.values_.end(), b.values_.begin(), v.begin(), std::minus<>{});
  return PathEnsemble(a.grid_, a.paths_, a.dim_, std::move(v));
}

Eigen::MatrixXd integrand_increments(const IntegrandSpec& phi, const NoiseEnsemble& noise,
                                     std::size_t path) {
  phi.check_compatible(noise);
  const std::size_t steps = noise.steps();
  const std::size_t udim = noise.dim();
  const auto inc = noise.path(path);
  Eigen::MatrixXd v(static_cast<Eigen::Index>(phi.codomain().dim()),
                    static_cast<Eigen::Index>(steps));
  // running W(t_i) so adapted rules read it in O(1)
  std::vector<double> w(udim, 0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    Eigen::Map<const Eigen::VectorXd> dw(inc.data() + i * udim, static_cast<Eigen::Index>(udim));
    if (phi.deterministic()) {
      v.col(static_cast<Eigen::Index>(i)).noalias() = phi.deterministic_value(i) * dw;
    } else {
      const IncrementHistory past(inc, i, udim, noise.grid().dt(), w);
      v.col(static_cast<Eigen::Index>(i)).noalias() = phi.value(i, past) * dw;
      for (std::size_t d = 0; d < udim; ++d) {
        w[d] += dw(static_cast<Eigen::Index>(d));
      }
    }
  }
  return v;
}

PathEnsemble ito_integrate(const IntegrandSpec& phi, const NoiseEnsemble& noise) {
  phi.check_compatible(noise);
  const std::size_t hdim = phi.codomain().dim();
  PathEnsemble out(noise.grid(), noise.paths(), hdim);
  parallel_for(noise.paths(), [&](std::size_t m) {
    const Eigen::MatrixXd v = integrand_increments(phi, noise, m);
    auto dst = out.path(m);
    for (std::size_t k = 0; k < noise.steps(); ++k) {
      for (std::size_t h = 0; h < hdim; ++h) {
        dst[(k + 1) * hdim + h] =
            dst[k * hdim + h] + v(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(k));
      }
    }
  });
  return out;
}

double sup_norm(const PathEnsemble& x, std::size_t path) {
  if (path >= x.paths()) {
    throw std::out_of_range("sup_norm: path index out of range");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < x.nodes(); ++k) {
    s = std::max(s, x.norm_at(path, k));
  }
  return s;
}

PathNormEstimate lr_path_norm(const PathEnsemble& x, double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) {
    throw DomainError("lr_path_norm: r must lie in [1, inf)");
  }
  const std::size_t n = x.paths();
  std::vector<double> samples(n);
  for (std::size_t m = 0; m < n; ++m) {
    samples[m] = std::pow(sup_norm(x, m), r);
  }
  double mean = 0.0;
  for (double s : samples) {
    mean += s;
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double s : samples) {
    var += (s - mean) * (s - mean);
  }
  var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
  const double se_mean = std::sqrt(var / static_cast<double>(n));

  PathNormEstimate est;
  est.r = r;
  est.paths = n;
  est.estimate = std::pow(mean, 1.0 / r);
  // d/dm m^{1/r} = m^{1/r - 1} / r
  est.standard_error = mean > 0.0 ? std::pow(mean, 1.0 / r - 1.0) / r * se_mean : 0.0;
  return est;
}

void write_paths_csv(const PathEnsemble& x, std::ostream& out, std::size_t max_paths) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "path_id,t");
  for (std::size_t c = 0; c < x.dim(); ++c) {
    fmt::format_to(std::back_inserter(buf), ",coord_{}", c);
  }
  buf.push_back('\n');
  const std::size_t paths = std::min(max_paths, x.paths());
  for (std::size_t m = 0; m < paths; ++m) {
    for (std::size_t k = 0; k < x.nodes(); ++k) {
      fmt::format_to(std::back_inserter(buf), "{},{:.17g}", m, x.grid().node(k));
      for (double v : x.value(m, k)) {
        fmt::format_to(std::back_inserter(buf), ",{:.17g}", v);
      }
      buf.push_back('\n');
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.clear();
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_paths_csv(const PathEnsemble& x, const std::filesystem::path& file,
                     std::size_t max_paths) {
  std::ofstream out(file, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_paths_csv: cannot open " + file.string());
  }
  write_paths_csv(x, out, max_paths);
}

}  // namespace stochconv
