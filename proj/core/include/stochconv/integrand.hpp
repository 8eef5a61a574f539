#pragma once

// Predictable operator-valued integrands Phi_{t_i}(omega) in L(U, H).

#include "stochconv/hilbert.hpp"
#include "stochconv/noise.hpp"

#include <functional>
#include <span>
#include <vector>

namespace stochconv {

/// Read-only view of the increments strictly before a node. Reading step j
/// at or after the node throws PredictabilityError.
class IncrementHistory {
 public:
  IncrementHistory(std::span<const double> path_increments, std::size_t available,
                   std::size_t dim, double dt);
  /// `wiener_at_node` holds W(t_node) - W(0) per mode, summed in step order.
  IncrementHistory(std::span<const double> path_increments, std::size_t available,
                   std::size_t dim, double dt, std::span<const double> wiener_at_node);

  std::size_t steps() const noexcept { return available_; }
  std::size_t dim() const noexcept { return dim_; }
  double dt() const noexcept { return dt_; }

  std::span<const double> step(std::size_t j) const;
  double at(std::size_t j, std::size_t mode) const { return step(j)[mode]; }
  /// W(t_node) - W(0) for one mode.
  double wiener(std::size_t mode) const;

 private:
  std::span<const double> data_;
  std::size_t available_;
  std::size_t dim_;
  double dt_;
  std::span<const double> wiener_;
};

/// Value of an adapted integrand at `node`, given the increments before it.
using AdaptedRule = std::function<Eigen::MatrixXd(std::size_t node, const IncrementHistory& past)>;

class IntegrandSpec {
 public:
  enum class Kind { constant, time_varying, adapted };

  static IntegrandSpec constant(DenseOperator op);
  static IntegrandSpec constant(const Operator& op, const HilbertSpec& domain,
                                const HilbertSpec& codomain);
  /// One operator per node t_0 .. t_{n-1}; must cover every step of the grid
  /// it is integrated on.
  static IntegrandSpec time_varying(std::vector<DenseOperator> per_node);
  static IntegrandSpec adapted(HilbertSpec domain, HilbertSpec codomain, AdaptedRule rule);

  Kind kind() const noexcept { return kind_; }
  bool deterministic() const noexcept { return kind_ != Kind::adapted; }
  const HilbertSpec& domain() const noexcept { return domain_; }
  const HilbertSpec& codomain() const noexcept { return codomain_; }
  /// Number of nodes carrying a value; 0 means "every node" (constant or adapted).
  std::size_t node_count() const noexcept {
    return kind_ == Kind::time_varying ? values_.size() : 0;
  }

  /// Phi at `node` for the path whose history is `past`.
  Eigen::MatrixXd value(std::size_t node, const IncrementHistory& past) const;
  /// Phi at `node` for deterministic integrands; throws for adapted ones.
  const Eigen::MatrixXd& deterministic_value(std::size_t node) const;

  /// Throws DimensionError unless Phi maps noise.dim() into codomain and covers
  /// every step of the noise grid.
  void check_compatible(const NoiseEnsemble& noise) const;

 private:
  IntegrandSpec(Kind kind, HilbertSpec domain, HilbertSpec codomain)
      : kind_(kind), domain_(std::move(domain)), codomain_(std::move(codomain)) {}

  Kind kind_;
  HilbertSpec domain_;
  HilbertSpec codomain_;
  std::vector<Eigen::MatrixXd> values_;
  AdaptedRule rule_;
};

/// sum_j coeffs[j] * terms[j], accumulated in index order. Deterministic
/// terms stay deterministic.
IntegrandSpec linear_combination(std::span<const double> coeffs,
                                 std::span<const IntegrandSpec> terms);

/// a * phi + b * psi.
IntegrandSpec combine(double a, const IntegrandSpec& phi, double b, const IntegrandSpec& psi);

/// left o Phi, with `left` a bounded operator on the codomain.
IntegrandSpec compose(const Operator& left, const IntegrandSpec& phi);

/// Evaluates Phi on one path of `noise` at `node`.
Eigen::MatrixXd integrand_value(const IntegrandSpec& phi, const NoiseEnsemble& noise,
                                std::size_t path, std::size_t node);

/// Perturbs every increment at steps >= node and re-evaluates Phi at node.
/// Returns false if the value changes or the rule reads a future increment.
bool probe_predictability(const IntegrandSpec& phi, const NoiseEnsemble& noise, std::size_t path,
                          std::size_t node, std::uint64_t perturbation_seed = 0x5eed);

}  // namespace stochconv
