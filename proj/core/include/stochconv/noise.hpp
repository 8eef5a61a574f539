#pragma once

// Q-Wiener increments on uniform time grids.

#include "stochconv/hilbert.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace stochconv {

/// Uniform grid t_i = i T / N, i = 0..N.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t nodes() const noexcept { return steps_ + 1; }
  double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }
  double node(std::size_t i) const noexcept {
    return i == steps_ ? horizon_ : static_cast<double>(i) * dt();
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  std::size_t steps_;
};

/// Covariance of a Q-Wiener process on the truncated space U: Q is diagonal
/// in the basis with eigenvalues q_k >= 0.
class QWienerSpec {
 public:
  QWienerSpec(HilbertSpec space, Eigen::VectorXd q_eigenvalues);

  const HilbertSpec& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return space_.dim(); }
  const Eigen::VectorXd& q() const noexcept { return q_; }
  SpectralOperator covariance() const { return SpectralOperator(space_, q_); }

 private:
  HilbertSpec space_;
  Eigen::VectorXd q_;
};

/// Increments dW(m, i, k) ~ N(0, q_k dt), stored path-major as
/// [path][step][mode].
class NoiseEnsemble {
 public:
  NoiseEnsemble(QWienerSpec spec, TimeGrid grid, std::uint64_t master_seed, std::size_t paths,
                std::vector<double> increments);

  const QWienerSpec& spec() const noexcept { return spec_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  std::uint64_t master_seed() const noexcept { return seed_; }
  std::size_t paths() const noexcept { return paths_; }
  std::size_t steps() const noexcept { return grid_.steps(); }
  std::size_t dim() const noexcept { return spec_.dim(); }

  /// All increments of one path, steps() x dim() row-major.
  std::span<const double> path(std::size_t m) const;
  std::span<const double> increment(std::size_t m, std::size_t step) const {
    return path(m).subspan(step * dim(), dim());
  }
  double at(std::size_t m, std::size_t step, std::size_t mode) const {
    return increments_[(m * steps() + step) * dim() + mode];
  }
  const std::vector<double>& data() const noexcept { return increments_; }

 private:
  QWienerSpec spec_;
  TimeGrid grid_;
  std::uint64_t seed_;
  std::size_t paths_;
  std::vector<double> increments_;
};

/// Standard normal keyed by (seed, path, step, mode); the building block of
/// sample_increments, exposed so single variates can be regenerated.
double keyed_normal(std::uint64_t master_seed, std::uint64_t path, std::uint32_t step,
                    std::uint32_t mode) noexcept;

/// Paths first_path .. first_path+paths-1 of the keyed ensemble; batches
/// drawn with different offsets concatenate to the full ensemble.
NoiseEnsemble sample_increments(const QWienerSpec& spec, const TimeGrid& grid,
                                std::uint64_t master_seed, std::size_t paths,
                                std::uint64_t first_path = 0);

/// W at the grid nodes of one path, (steps+1) x dim row-major, W(t_0) = 0.
std::vector<double> wiener_values(const NoiseEnsemble& noise, std::size_t path);

/// Increments on the grid with steps/factor steps: exact partial sums of
/// `factor` consecutive fine increments.
NoiseEnsemble coarsen(const NoiseEnsemble& fine, std::size_t factor);

/// Binary dump: magic "QWIENER1", then paths, steps, dim as little-endian
/// uint64, then the increments as little-endian float64.
void write_noise_binary(const NoiseEnsemble& noise, const std::filesystem::path& file);

/// Raw increment block read from a binary dump.
struct NoiseDump {
  std::uint64_t paths = 0;
  std::uint64_t steps = 0;
  std::uint64_t dim = 0;
  std::vector<double> increments;
};
NoiseDump read_noise_binary(const std::filesystem::path& file);

}  // namespace stochconv
