#include "stochconv/hilbert.hpp"

#include "stochconv/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace stochconv {

HilbertSpec::HilbertSpec(std::size_t dim, std::string label) : dim_(dim), label_(std::move(label)) {
  if (dim_ == 0) {
    throw DomainError("HilbertSpec: dim must be at least 1");
  }
}

SpectralOperator::SpectralOperator(HilbertSpec space, Eigen::VectorXd eigenvalues)
    : space_(std::move(space)), eigenvalues_(std::move(eigenvalues)) {
  detail::require_dim(static_cast<std::size_t>(eigenvalues_.size()), space_.dim(),
                      "SpectralOperator eigenvalues");
}

SpectralOperator SpectralOperator::identity(const HilbertSpec& space) {
  return SpectralOperator(space, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(space.dim())));
}

DenseOperator::DenseOperator(HilbertSpec domain, HilbertSpec codomain, Eigen::MatrixXd entries)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), entries_(std::move(entries)) {
  detail::require_dim(static_cast<std::size_t>(entries_.rows()), codomain_.dim(),
                      "DenseOperator rows");
  detail::require_dim(static_cast<std::size_t>(entries_.cols()), domain_.dim(),
                      "DenseOperator cols");
}

DenseOperator::DenseOperator(const HilbertSpec& space, Eigen::MatrixXd entries)
    : DenseOperator(space, space, std::move(entries)) {}

std::size_t domain_dim(const Operator& op) noexcept {
  return std::visit(
      [](const auto& o) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(o)>, SpectralOperator>) {
          return o.dim();
        } else {
          return o.domain().dim();
        }
      },
      op);
}

std::size_t codomain_dim(const Operator& op) noexcept {
  return std::visit(
      [](const auto& o) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(o)>, SpectralOperator>) {
          return o.dim();
        } else {
          return o.codomain().dim();
        }
      },
      op);
}

Eigen::MatrixXd to_matrix(const Operator& op) {
  return std::visit(
      [](const auto& o) -> Eigen::MatrixXd {
        if constexpr (std::is_same_v<std::decay_t<decltype(o)>, SpectralOperator>) {
          return o.to_matrix();
        } else {
          return o.entries();
        }
      },
      op);
}

Eigen::VectorXd apply_operator(const Operator& op, const Eigen::VectorXd& v) {
  detail::require_dim(static_cast<std::size_t>(v.size()), domain_dim(op), "apply_operator");
  return std::visit(
      [&v](const auto& o) -> Eigen::VectorXd {
        if constexpr (std::is_same_v<std::decay_t<decltype(o)>, SpectralOperator>) {
          return o.eigenvalues().cwiseProduct(v);
        } else {
          return o.entries() * v;
        }
      },
      op);
}

double hs_norm(const Eigen::MatrixXd& op, const Eigen::VectorXd* weight) {
  if (weight == nullptr) {
    return std::sqrt(op.squaredNorm());
  }
  detail::require_dim(static_cast<std::size_t>(weight->size()),
                      static_cast<std::size_t>(op.cols()), "hs_norm weight");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < op.cols(); ++j) {
    const double w = (*weight)(j);
    if (w < 0.0) {
      throw DomainError("hs_norm: weight eigenvalues must be nonnegative");
    }
    sum += w * op.col(j).squaredNorm();
  }
  return std::sqrt(sum);
}

double hs_norm(const Operator& op, const std::optional<SpectralOperator>& weight) {
  if (weight) {
    detail::require_dim(weight->dim(), domain_dim(op), "hs_norm weight");
  }
  if (const auto* diag = std::get_if<SpectralOperator>(&op)) {
    // Diagonal case: column j has a single entry eigenvalue_j.
    double sum = 0.0;
    for (Eigen::Index j = 0; j < diag->eigenvalues().size(); ++j) {
      const double w = weight ? weight->eigenvalues()(j) : 1.0;
      if (w < 0.0) {
        throw DomainError("hs_norm: weight eigenvalues must be nonnegative");
      }
      sum += w * diag->eigenvalues()(j) * diag->eigenvalues()(j);
    }
    return std::sqrt(sum);
  }
  const auto& dense = std::get<DenseOperator>(op);
  return hs_norm(dense.entries(), weight ? &weight->eigenvalues() : nullptr);
}

double operator_norm(const Eigen::MatrixXd& op) {
  if (op.size() == 0) {
    return 0.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(op);
  return svd.singularValues()(0);
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("expm: matrix must be square");
  }
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);

  // Higham (2005) degree-13 coefficients; theta_13 bounds the 1-norm for
  // which the approximant is accurate to unit roundoff.
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) {
    return ident;
  }
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  }
  const Eigen::MatrixXd as = a / std::ldexp(1.0, squarings);

  const Eigen::MatrixXd a2 = as * as;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
            b[1] * ident);
  const Eigen::MatrixXd v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

  Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) {
    r = r * r;
  }
  return r;
}

SemigroupSpec SemigroupSpec::diagonal(HilbertSpec space, Eigen::VectorXd spectrum) {
  detail::require_dim(static_cast<std::size_t>(spectrum.size()), space.dim(),
                      "SemigroupSpec spectrum");
  if ((spectrum.array() < 0.0).any()) {
    throw DomainError("SemigroupSpec: diagonal spectrum must be nonnegative");
  }
  SemigroupSpec sg(Kind::diagonal, std::move(space));
  sg.spectrum_ = std::move(spectrum);
  return sg;
}

SemigroupSpec SemigroupSpec::dense(HilbertSpec space, Eigen::MatrixXd generator) {
  detail::require_dim(static_cast<std::size_t>(generator.rows()), space.dim(),
                      "SemigroupSpec generator rows");
  detail::require_dim(static_cast<std::size_t>(generator.cols()), space.dim(),
                      "SemigroupSpec generator cols");
  SemigroupSpec sg(Kind::dense, std::move(space));
  sg.generator_ = std::move(generator);
  return sg;
}

SemigroupSpec SemigroupSpec::identity(HilbertSpec space) {
  const auto n = static_cast<Eigen::Index>(space.dim());
  return diagonal(std::move(space), Eigen::VectorXd::Zero(n));
}

double SemigroupSpec::bound(double horizon, std::size_t samples) const {
  if (horizon < 0.0) {
    throw DomainError("SemigroupSpec::bound: horizon must be nonnegative");
  }
  if (kind_ == Kind::diagonal) {
    return 1.0;
  }
  samples = std::max<std::size_t>(samples, 1);
  const double h = horizon / static_cast<double>(samples);
  const Eigen::MatrixXd step = expm(h * generator_);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(generator_.rows(), generator_.cols());
  double m = 1.0;
  for (std::size_t j = 1; j <= samples; ++j) {
    power = power * step;
    m = std::max(m, operator_norm(power));
  }
  return m;
}

Operator semigroup_eval(const SemigroupSpec& sg, double t) {
  if (!(t >= 0.0)) {
    throw DomainError("semigroup_eval: t must be nonnegative");
  }
  if (sg.kind() == SemigroupSpec::Kind::diagonal) {
    Eigen::VectorXd d(sg.spectrum().size());
    for (Eigen::Index k = 0; k < d.size(); ++k) {
      d(k) = std::exp(-sg.spectrum()(k) * t);
    }
    return SpectralOperator(sg.space(), std::move(d));
  }
  return DenseOperator(sg.space(), expm(t * sg.generator()));
}

}  // namespace stochconv
