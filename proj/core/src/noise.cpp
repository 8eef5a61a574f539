#include "stochconv/noise.hpp"

#include "stochconv/error.hpp"
#include "stochconv/parallel.hpp"
#include "stochconv/random.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace stochconv {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw DomainError("TimeGrid: horizon must be positive and finite");
  }
  if (steps_ == 0) {
    throw DomainError("TimeGrid: steps must be positive");
  }
}

QWienerSpec::QWienerSpec(HilbertSpec space, Eigen::VectorXd q_eigenvalues)
    : space_(std::move(space)), q_(std::move(q_eigenvalues)) {
  detail::require_dim(static_cast<std::size_t>(q_.size()), space_.dim(), "QWienerSpec");
  if ((q_.array() < 0.0).any() || !q_.allFinite()) {
    throw DomainError("QWienerSpec: covariance eigenvalues must be finite and nonnegative");
  }
}

NoiseEnsemble::NoiseEnsemble(QWienerSpec spec, TimeGrid grid, std::uint64_t master_seed,
                             std::size_t paths, std::vector<double> increments)
    : spec_(std::move(spec)),
      grid_(grid),
      seed_(master_seed),
      paths_(paths),
      increments_(std::move(increments)) {
  if (paths_ == 0) {
    throw DomainError("NoiseEnsemble: at least one path is required");
  }
  detail::require_dim(increments_.size(), paths_ * grid_.steps() * spec_.dim(),
                      "NoiseEnsemble increments");
}

std::span<const double> NoiseEnsemble::path(std::size_t m) const {
  if (m >= paths_) {
    throw std::out_of_range("NoiseEnsemble: path index out of range");
  }
  const std::size_t stride = steps() * dim();
  return {increments_.data() + m * stride, stride};
}

double keyed_normal(std::uint64_t master_seed, std::uint64_t path, std::uint32_t step,
                    std::uint32_t mode) noexcept {
  const Philox4x32::counter_type ctr = {step, mode, static_cast<std::uint32_t>(path),
                                        static_cast<std::uint32_t>(path >> 32)};
  return counter_normal(ctr, Philox4x32::key_from_seed(master_seed));
}

NoiseEnsemble sample_increments(const QWienerSpec& spec, const TimeGrid& grid,
                                std::uint64_t master_seed, std::size_t paths,
                                std::uint64_t first_path) {
  if (paths == 0) {
    throw DomainError("sample_increments: n_paths must be at least 1");
  }
  const std::size_t steps = grid.steps();
  const std::size_t dim = spec.dim();
  Eigen::VectorXd scale(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    scale(static_cast<Eigen::Index>(k)) = std::sqrt(spec.q()(static_cast<Eigen::Index>(k)) * grid.dt());
  }

  std::vector<double> data(paths * steps * dim);
  parallel_for(paths, [&](std::size_t m) {
    double* out = data.data() + m * steps * dim;
    for (std::size_t i = 0; i < steps; ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        const double s = scale(static_cast<Eigen::Index>(k));
        out[i * dim + k] =
            s == 0.0 ? 0.0
                     : s * keyed_normal(master_seed, first_path + m, static_cast<std::uint32_t>(i),
                                        static_cast<std::uint32_t>(k));
      }
    }
  });
  return NoiseEnsemble(spec, grid, master_seed, paths, std::move(data));
}

std::vector<double> wiener_values(const NoiseEnsemble& noise, std::size_t path) {
  const auto inc = noise.path(path);
  const std::size_t dim = noise.dim();
  std::vector<double> w((noise.steps() + 1) * dim, 0.0);
  for (std::size_t i = 0; i < noise.steps(); ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      w[(i + 1) * dim + k] = w[i * dim + k] + inc[i * dim + k];
    }
  }
  return w;
}

NoiseEnsemble coarsen(const NoiseEnsemble& fine, std::size_t factor) {
  if (factor == 0 || fine.steps() % factor != 0) {
    throw DomainError("coarsen: factor must divide the number of fine steps");
  }
  const TimeGrid grid(fine.grid().horizon(), fine.steps() / factor);
  const std::size_t dim = fine.dim();
  std::vector<double> data(fine.paths() * grid.steps() * dim, 0.0);
  for (std::size_t m = 0; m < fine.paths(); ++m) {
    const auto src = fine.path(m);
    double* out = data.data() + m * grid.steps() * dim;
    for (std::size_t i = 0; i < grid.steps(); ++i) {
      for (std::size_t j = 0; j < factor; ++j) {
        for (std::size_t k = 0; k < dim; ++k) {
          out[i * dim + k] += src[(i * factor + j) * dim + k];
        }
      }
    }
  }
  return NoiseEnsemble(fine.spec(), grid, fine.master_seed(), fine.paths(), std::move(data));
}

namespace {

constexpr char kMagic[8] = {'Q', 'W', 'I', 'E', 'N', 'E', 'R', '1'};

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits = std::bit_cast<std::uint64_t>(value);
  char bytes[8];
  for (int b = 0; b < 8; ++b) {
    bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  }
  out.write(bytes, 8);
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) {
    throw std::runtime_error("read_noise_binary: truncated file");
  }
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) {
    bits |= std::uint64_t{bytes[b]} << (8 * b);
  }
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_noise_binary(const NoiseEnsemble& noise, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_noise_binary: cannot open " + file.string());
  }
  out.write(kMagic, sizeof(kMagic));
  write_le<std::uint64_t>(out, noise.paths());
  write_le<std::uint64_t>(out, noise.steps());
  write_le<std::uint64_t>(out, noise.dim());
  for (double v : noise.data()) {
    write_le(out, v);
  }
}

NoiseDump read_noise_binary(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_noise_binary: cannot open " + file.string());
  }
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw std::runtime_error("read_noise_binary: bad magic header");
  }
  NoiseDump dump;
  dump.paths = read_le<std::uint64_t>(in);
  dump.steps = read_le<std::uint64_t>(in);
  dump.dim = read_le<std::uint64_t>(in);
  dump.increments.resize(dump.paths * dump.steps * dump.dim);
  for (double& v : dump.increments) {
    v = read_le<double>(in);
  }
  return dump;
}

}  // namespace stochconv
