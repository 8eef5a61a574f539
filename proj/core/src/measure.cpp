#include "stochconv/measure.hpp"

#include "stochconv/error.hpp"

#include <algorithm>
#include <cmath>

namespace stochconv {

namespace {

double pairwise_sum_impl(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += x[i];
    }
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(x, half) + pairwise_sum_impl(x + half, n - half);
}

void check_exponent(double e, const char* name) {
  if (!(e >= 1.0) || !std::isfinite(e)) {
    throw DomainError(std::string("exponent ") + name + " must lie in [1, inf)");
  }
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

DiscreteMeasureSpace::DiscreteMeasureSpace(std::vector<std::string> points,
                                           std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  detail::require_dim(points_.size(), weights_.size(), "DiscreteMeasureSpace");
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("DiscreteMeasureSpace: weights must be finite and nonnegative");
    }
  }
}

DiscreteMeasureSpace::DiscreteMeasureSpace(std::vector<double> weights)
    : DiscreteMeasureSpace(std::vector<std::string>(weights.size()), weights) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    points_[i] = std::to_string(i);
  }
}

KernelSpec::KernelSpec(DiscreteMeasureSpace base, std::vector<DiscreteMeasureSpace> per_atom)
    : base_(std::move(base)), per_atom_(std::move(per_atom)) {
  detail::require_dim(per_atom_.size(), base_.size(), "KernelSpec per-atom measures");
  if (per_atom_.empty()) {
    throw DimensionError("KernelSpec: D_2 must contain at least one atom");
  }
  d1_size_ = per_atom_.front().size();
  for (const auto& m : per_atom_) {
    if (m.points() != per_atom_.front().points()) {
      throw DimensionError("KernelSpec: per-atom measures must share the D_1 atoms");
    }
  }
}

KernelSpec::KernelSpec(std::vector<double> d2_weights,
                       std::vector<std::vector<double>> kernel_masses)
    : KernelSpec(DiscreteMeasureSpace(std::move(d2_weights)), [&kernel_masses] {
        std::vector<DiscreteMeasureSpace> fibers;
        fibers.reserve(kernel_masses.size());
        for (auto& row : kernel_masses) {
          fibers.emplace_back(std::move(row));
        }
        return fibers;
      }()) {}

DiscreteFunction::DiscreteFunction(std::size_t d1, std::size_t d2, std::size_t dim,
                                   std::vector<double> values)
    : d1_(d1), d2_(d2), dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) {
    throw DimensionError("DiscreteFunction: value dimension must be positive");
  }
  detail::require_dim(values_.size(), d1_ * d2_ * dim_, "DiscreteFunction values");
}

DiscreteFunction DiscreteFunction::scalar(const std::vector<std::vector<double>>& table) {
  const std::size_t d1 = table.size();
  const std::size_t d2 = d1 == 0 ? 0 : table.front().size();
  std::vector<double> values;
  values.reserve(d1 * d2);
  for (const auto& row : table) {
    detail::require_dim(row.size(), d2, "DiscreteFunction row");
    values.insert(values.end(), row.begin(), row.end());
  }
  return DiscreteFunction(d1, d2, 1, std::move(values));
}

DiscreteFunction DiscreteFunction::constant(std::size_t d1, std::size_t d2, double c) {
  return DiscreteFunction(d1, d2, 1, std::vector<double>(d1 * d2, c));
}

double DiscreteFunction::abs(std::size_t x1, std::size_t x) const {
  const auto v = at(x1, x);
  if (dim_ == 1) {
    return std::abs(v[0]);
  }
  double s = 0.0;
  for (double c : v) {
    s += c * c;
  }
  return std::sqrt(s);
}

double product_measure_mass(const KernelSpec& k) {
  std::vector<double> terms(k.d2_size());
  for (std::size_t x = 0; x < k.d2_size(); ++x) {
    terms[x] = k.fiber_mass(x) * k.d2_weight(x);
  }
  return pairwise_sum(terms);
}

namespace {

void check_shape(const DiscreteFunction& f, const KernelSpec& k) {
  detail::require_dim(f.d1(), k.d1_size(), "DiscreteFunction D_1");
  detail::require_dim(f.d2(), k.d2_size(), "DiscreteFunction D_2");
}

}  // namespace

double lpq_norm(const DiscreteFunction& f, const KernelSpec& k, double p, double q) {
  check_exponent(p, "p");
  check_exponent(q, "q");
  check_shape(f, k);
  std::vector<double> inner(k.d1_size());
  std::vector<double> outer(k.d2_size());
  for (std::size_t x = 0; x < k.d2_size(); ++x) {
    for (std::size_t x1 = 0; x1 < k.d1_size(); ++x1) {
      inner[x1] = std::pow(f.abs(x1, x), p) * k.kernel_mass(x1, x);
    }
    outer[x] = std::pow(pairwise_sum(inner), q / p) * k.d2_weight(x);
  }
  return std::pow(pairwise_sum(outer), 1.0 / q);
}

double l1_integral(const DiscreteFunction& f, const KernelSpec& k) {
  check_shape(f, k);
  std::vector<double> inner(k.d1_size());
  std::vector<double> outer(k.d2_size());
  for (std::size_t x = 0; x < k.d2_size(); ++x) {
    for (std::size_t x1 = 0; x1 < k.d1_size(); ++x1) {
      inner[x1] = f.abs(x1, x) * k.kernel_mass(x1, x);
    }
    outer[x] = pairwise_sum(inner) * k.d2_weight(x);
  }
  return pairwise_sum(outer);
}

double holder_constant(const KernelSpec& k, double p, double q) {
  check_exponent(p, "p");
  check_exponent(q, "q");
  if (q > 1.0) {
    // p = 1 gives exponent 0, i.e. C(1,q) = nu_2(D_2)^{(q-1)/q}.
    const double e = q * (p - 1.0) / (p * (q - 1.0));
    std::vector<double> terms(k.d2_size());
    for (std::size_t x = 0; x < k.d2_size(); ++x) {
      terms[x] = std::pow(k.fiber_mass(x), e) * k.d2_weight(x);
    }
    return std::pow(pairwise_sum(terms), (q - 1.0) / q);
  }
  if (p > 1.0) {
    // Supremum over atoms of positive nu_2 weight.
    double m = 0.0;
    for (std::size_t x = 0; x < k.d2_size(); ++x) {
      if (k.d2_weight(x) > 0.0) {
        m = std::max(m, std::pow(k.fiber_mass(x), (p - 1.0) / p));
      }
    }
    return m;
  }
  return 1.0;
}

}  // namespace stochconv
