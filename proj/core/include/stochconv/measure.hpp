#pragma once

// Finite discrete measure spaces, measure kernels and the mixed L^{p,q}
// machinery built on them. Everything is an exact finite sum.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace stochconv {

/// Pairwise (cascade) summation; error grows like O(log n) ulps.
double pairwise_sum(std::span<const double> values);

/// Finite measure space: atoms with nonnegative weights.
class DiscreteMeasureSpace {
 public:
  DiscreteMeasureSpace(std::vector<std::string> points, std::vector<double> weights);
  /// Atoms named "0", "1", ... .
  explicit DiscreteMeasureSpace(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<std::string>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double total_mass() const { return pairwise_sum(weights_); }

 private:
  std::vector<std::string> points_;
  std::vector<double> weights_;
};

/// Kernel nu_1(., x) on D_1 indexed by the atoms x of D_2, together with the
/// measure nu_2 on D_2. Defines the product measure
/// nu(A x B) = sum_{x in B} nu_1(A, x) nu_2({x}).
class KernelSpec {
 public:
  /// `per_atom[x]` is the measure nu_1(., x); all must share the same D_1 atoms.
  KernelSpec(DiscreteMeasureSpace base, std::vector<DiscreteMeasureSpace> per_atom);
  /// kernel_masses[x][x1] = nu_1({x1}, x).
  KernelSpec(std::vector<double> d2_weights, std::vector<std::vector<double>> kernel_masses);

  std::size_t d1_size() const noexcept { return d1_size_; }
  std::size_t d2_size() const noexcept { return base_.size(); }
  const DiscreteMeasureSpace& base() const noexcept { return base_; }
  const std::vector<DiscreteMeasureSpace>& per_atom() const noexcept { return per_atom_; }

  double d2_weight(std::size_t x) const { return base_.weights()[x]; }
  double kernel_mass(std::size_t x1, std::size_t x) const { return per_atom_[x].weights()[x1]; }
  /// nu_1(D_1, x).
  double fiber_mass(std::size_t x) const { return per_atom_[x].total_mass(); }

 private:
  DiscreteMeasureSpace base_;
  std::vector<DiscreteMeasureSpace> per_atom_;
  std::size_t d1_size_ = 0;
};

/// Real- or vector-valued function on D_1 x D_2, values[(x1 * d2 + x) * dim + c].
class DiscreteFunction {
 public:
  DiscreteFunction(std::size_t d1, std::size_t d2, std::size_t dim, std::vector<double> values);
  /// Scalar function from a d1 x d2 table.
  static DiscreteFunction scalar(const std::vector<std::vector<double>>& table);
  static DiscreteFunction constant(std::size_t d1, std::size_t d2, double c);

  std::size_t d1() const noexcept { return d1_; }
  std::size_t d2() const noexcept { return d2_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> at(std::size_t x1, std::size_t x) const {
    return {values_.data() + (x1 * d2_ + x) * dim_, dim_};
  }
  /// Euclidean norm of the value at (x1, x).
  double abs(std::size_t x1, std::size_t x) const;
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t d1_, d2_, dim_;
  std::vector<double> values_;
};

/// nu(D_1 x D_2) = sum_x nu_1(D_1, x) nu_2({x}).
double product_measure_mass(const KernelSpec& k);

/// (sum_x (sum_{x1} |f(x1,x)|^p nu_1({x1},x))^{q/p} nu_2({x}))^{1/q}.
double lpq_norm(const DiscreteFunction& f, const KernelSpec& k, double p, double q);

/// Integral of |f| against the product measure.
double l1_integral(const DiscreteFunction& f, const KernelSpec& k);

/// Constant C(p,q) with  int |f| dnu <= C(p,q) |f|_{p,q}.
double holder_constant(const KernelSpec& k, double p, double q);

}  // namespace stochconv
