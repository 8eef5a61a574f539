#pragma once

// Galerkin-truncated Hilbert spaces, operators between them and the
// semigroups driving stochastic convolutions.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <variant>

namespace stochconv {

/// A separable Hilbert space represented by its first `dim` orthonormal modes.
class HilbertSpec {
 public:
  explicit HilbertSpec(std::size_t dim, std::string label = "H");

  std::size_t dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }

  friend bool operator==(const HilbertSpec& a, const HilbertSpec& b) noexcept {
    return a.dim_ == b.dim_;
  }

 private:
  std::size_t dim_;
  std::string label_;
};

/// Operator acting by coordinatewise multiplication on a shared basis.
class SpectralOperator {
 public:
  SpectralOperator(HilbertSpec space, Eigen::VectorXd eigenvalues);

  static SpectralOperator identity(const HilbertSpec& space);

  const HilbertSpec& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return space_.dim(); }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  Eigen::MatrixXd to_matrix() const { return eigenvalues_.asDiagonal(); }

 private:
  HilbertSpec space_;
  Eigen::VectorXd eigenvalues_;
};

/// General bounded operator domain -> codomain stored as a
/// codomain.dim x domain.dim matrix.
class DenseOperator {
 public:
  DenseOperator(HilbertSpec domain, HilbertSpec codomain, Eigen::MatrixXd entries);
  /// Square operator on a single space.
  DenseOperator(const HilbertSpec& space, Eigen::MatrixXd entries);

  const HilbertSpec& domain() const noexcept { return domain_; }
  const HilbertSpec& codomain() const noexcept { return codomain_; }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }

 private:
  HilbertSpec domain_;
  HilbertSpec codomain_;
  Eigen::MatrixXd entries_;
};

using Operator = std::variant<SpectralOperator, DenseOperator>;

std::size_t domain_dim(const Operator& op) noexcept;
std::size_t codomain_dim(const Operator& op) noexcept;
Eigen::MatrixXd to_matrix(const Operator& op);

/// Linear action of `op` on `v`. Throws DimensionError on mismatch.
Eigen::VectorXd apply_operator(const Operator& op, const Eigen::VectorXd& v);

/// Hilbert-Schmidt norm (sum_j |op(sqrt(w_j) e_j)|^2)^{1/2}. Unweighted when
/// `weight` is empty; a weight must have nonnegative eigenvalues.
double hs_norm(const Operator& op, const std::optional<SpectralOperator>& weight = std::nullopt);
double hs_norm(const Eigen::MatrixXd& op, const Eigen::VectorXd* weight = nullptr);

/// Spectral (largest singular value) norm.
double operator_norm(const Eigen::MatrixXd& op);

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

/// Strongly continuous semigroup on a truncated space: either multiplication
/// by exp(-lambda_k t) (lambda_k >= 0) or exp(tA) for a dense generator A.
class SemigroupSpec {
 public:
  enum class Kind { diagonal, dense };

  static SemigroupSpec diagonal(HilbertSpec space, Eigen::VectorXd spectrum);
  static SemigroupSpec dense(HilbertSpec space, Eigen::MatrixXd generator);
  /// S(t) = I for all t.
  static SemigroupSpec identity(HilbertSpec space);

  Kind kind() const noexcept { return kind_; }
  const HilbertSpec& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return space_.dim(); }
  const Eigen::VectorXd& spectrum() const noexcept { return spectrum_; }
  const Eigen::MatrixXd& generator() const noexcept { return generator_; }

  /// sup of |S(t)| over t = jT/samples, j = 0..samples. Exactly 1 for the
  /// diagonal kind.
  double bound(double horizon, std::size_t samples) const;

 private:
  SemigroupSpec(Kind kind, HilbertSpec space) : kind_(kind), space_(std::move(space)) {}

  Kind kind_;
  HilbertSpec space_;
  Eigen::VectorXd spectrum_;
  Eigen::MatrixXd generator_;
};

/// S(t) for t >= 0. Diagonal semigroups return a SpectralOperator.
Operator semigroup_eval(const SemigroupSpec& sg, double t);

}  // namespace stochconv
