#include "stochconv/integrand.hpp"

#include "stochconv/error.hpp"

#include <algorithm>
#include <string>

namespace stochconv {

IncrementHistory::IncrementHistory(std::span<const double> path_increments, std::size_t available,
                                   std::size_t dim, double dt)
    : data_(path_increments), available_(available), dim_(dim), dt_(dt) {
  if (available_ * dim_ > data_.size()) {
    throw DimensionError("IncrementHistory: history longer than the increment buffer");
  }
}

std::span<const double> IncrementHistory::step(std::size_t j) const {
  if (j >= available_) {
    throw PredictabilityError("adapted integrand at node " + std::to_string(available_) +
                              " read increment of step " + std::to_string(j));
  }
  return data_.subspan(j * dim_, dim_);
}

IncrementHistory::IncrementHistory(std::span<const double> path_increments, std::size_t available,
                                   std::size_t dim, double dt, std::span<const double> wiener_at_node)
    : IncrementHistory(path_increments, available, dim, dt) {
  detail::require_dim(wiener_at_node.size(), dim_, "IncrementHistory wiener values");
  wiener_ = wiener_at_node;
}

double IncrementHistory::wiener(std::size_t mode) const {
  if (!wiener_.empty()) {
    return wiener_[mode];
  }
  double w = 0.0;
  for (std::size_t j = 0; j < available_; ++j) {
    w += data_[j * dim_ + mode];
  }
  return w;
}

IntegrandSpec IntegrandSpec::constant(DenseOperator op) {
  IntegrandSpec spec(Kind::constant, op.domain(), op.codomain());
  spec.values_.push_back(op.entries());
  return spec;
}

IntegrandSpec IntegrandSpec::constant(const Operator& op, const HilbertSpec& domain,
                                      const HilbertSpec& codomain) {
  return constant(DenseOperator(domain, codomain, to_matrix(op)));
}

IntegrandSpec IntegrandSpec::time_varying(std::vector<DenseOperator> per_node) {
  if (per_node.empty()) {
    throw DimensionError("IntegrandSpec::time_varying: at least one node value is required");
  }
  IntegrandSpec spec(Kind::time_varying, per_node.front().domain(), per_node.front().codomain());
  spec.values_.reserve(per_node.size());
  for (const auto& op : per_node) {
    detail::require_dim(op.domain().dim(), spec.domain_.dim(), "time_varying domain");
    detail::require_dim(op.codomain().dim(), spec.codomain_.dim(), "time_varying codomain");
    spec.values_.push_back(op.entries());
  }
  return spec;
}

IntegrandSpec IntegrandSpec::adapted(HilbertSpec domain, HilbertSpec codomain, AdaptedRule rule) {
  if (!rule) {
    throw std::invalid_argument("IntegrandSpec::adapted: empty rule");
  }
  IntegrandSpec spec(Kind::adapted, std::move(domain), std::move(codomain));
  spec.rule_ = std::move(rule);
  return spec;
}

Eigen::MatrixXd IntegrandSpec::value(std::size_t node, const IncrementHistory& past) const {
  if (kind_ != Kind::adapted) {
    return deterministic_value(node);
  }
  Eigen::MatrixXd v = rule_(node, past);
  detail::require_dim(static_cast<std::size_t>(v.rows()), codomain_.dim(), "adapted value rows");
  detail::require_dim(static_cast<std::size_t>(v.cols()), domain_.dim(), "adapted value cols");
  return v;
}

const Eigen::MatrixXd& IntegrandSpec::deterministic_value(std::size_t node) const {
  switch (kind_) {
    case Kind::constant:
      return values_.front();
    case Kind::time_varying:
      if (node >= values_.size()) {
        throw DimensionError("IntegrandSpec: no value for node " + std::to_string(node));
      }
      return values_[node];
    case Kind::adapted:
      break;
  }
  throw std::logic_error("IntegrandSpec: adapted integrand has no deterministic value");
}

void IntegrandSpec::check_compatible(const NoiseEnsemble& noise) const {
  detail::require_dim(domain_.dim(), noise.dim(), "integrand domain vs noise");
  if (kind_ == Kind::time_varying && values_.size() < noise.steps()) {
    throw DimensionError("IntegrandSpec: time-varying integrand has " +
                         std::to_string(values_.size()) + " node values, grid needs " +
                         std::to_string(noise.steps()));
  }
}

IntegrandSpec linear_combination(std::span<const double> coeffs,
                                 std::span<const IntegrandSpec> terms) {
  detail::require_dim(coeffs.size(), terms.size(), "linear_combination");
  if (terms.empty()) {
    throw DimensionError("linear_combination: no terms");
  }
  const HilbertSpec domain = terms.front().domain();
  const HilbertSpec codomain = terms.front().codomain();
  bool all_deterministic = true;
  std::size_t nodes = 0;
  for (const auto& t : terms) {
    detail::require_dim(t.domain().dim(), domain.dim(), "linear_combination domain");
    detail::require_dim(t.codomain().dim(), codomain.dim(), "linear_combination codomain");
    all_deterministic = all_deterministic && t.deterministic();
    if (t.node_count() != 0) {
      if (nodes != 0 && nodes != t.node_count()) {
        throw DimensionError("linear_combination: time-varying terms differ in length");
      }
      nodes = t.node_count();
    }
  }

  if (all_deterministic) {
    const auto at = [&](std::size_t node) {
      Eigen::MatrixXd acc = coeffs[0] * terms[0].deterministic_value(node);
      for (std::size_t j = 1; j < terms.size(); ++j) {
        acc += coeffs[j] * terms[j].deterministic_value(node);
      }
      return acc;
    };
    if (nodes == 0) {
      return IntegrandSpec::constant(DenseOperator(domain, codomain, at(0)));
    }
    std::vector<DenseOperator> per_node;
    per_node.reserve(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      per_node.emplace_back(domain, codomain, at(i));
    }
    return IntegrandSpec::time_varying(std::move(per_node));
  }

  std::vector<double> c(coeffs.begin(), coeffs.end());
  std::vector<IntegrandSpec> parts(terms.begin(), terms.end());
  return IntegrandSpec::adapted(
      domain, codomain,
      [c = std::move(c), parts = std::move(parts)](std::size_t node, const IncrementHistory& past) {
        Eigen::MatrixXd acc = c[0] * parts[0].value(node, past);
        for (std::size_t j = 1; j < parts.size(); ++j) {
          acc += c[j] * parts[j].value(node, past);
        }
        return acc;
      });
}

IntegrandSpec combine(double a, const IntegrandSpec& phi, double b, const IntegrandSpec& psi) {
  const double coeffs[] = {a, b};
  const IntegrandSpec terms[] = {phi, psi};
  return linear_combination(coeffs, terms);
}

IntegrandSpec compose(const Operator& left, const IntegrandSpec& phi) {
  detail::require_dim(domain_dim(left), phi.codomain().dim(), "compose");
  const HilbertSpec target(codomain_dim(left), phi.codomain().label());
  const Eigen::MatrixXd q = to_matrix(left);
  switch (phi.kind()) {
    case IntegrandSpec::Kind::constant:
      return IntegrandSpec::constant(DenseOperator(phi.domain(), target, q * phi.deterministic_value(0)));
    case IntegrandSpec::Kind::time_varying: {
      std::vector<DenseOperator> per_node;
      per_node.reserve(phi.node_count());
      for (std::size_t i = 0; i < phi.node_count(); ++i) {
        per_node.emplace_back(phi.domain(), target, q * phi.deterministic_value(i));
      }
      return IntegrandSpec::time_varying(std::move(per_node));
    }
    case IntegrandSpec::Kind::adapted:
      break;
  }
  return IntegrandSpec::adapted(phi.domain(), target,
                                [q, phi](std::size_t node, const IncrementHistory& past) {
                                  return Eigen::MatrixXd(q * phi.value(node, past));
                                });
}

Eigen::MatrixXd integrand_value(const IntegrandSpec& phi, const NoiseEnsemble& noise,
                                std::size_t path, std::size_t node) {
  phi.check_compatible(noise);
  if (node > noise.steps()) {
    throw std::out_of_range("integrand_value: node index out of range");
  }
  const IncrementHistory past(noise.path(path), node, noise.dim(), noise.grid().dt());
  return phi.value(node, past);
}

bool probe_predictability(const IntegrandSpec& phi, const NoiseEnsemble& noise, std::size_t path,
                          std::size_t node, std::uint64_t perturbation_seed) {
  const auto original = noise.path(path);
  std::vector<double> perturbed(original.begin(), original.end());
  const std::size_t dim = noise.dim();
  for (std::size_t j = node; j < noise.steps(); ++j) {
    for (std::size_t k = 0; k < dim; ++k) {
      perturbed[j * dim + k] += 1.0 + keyed_normal(perturbation_seed, path,
                                                   static_cast<std::uint32_t>(j),
                                                   static_cast<std::uint32_t>(k));
    }
  }
  try {
    const IncrementHistory before(original, node, dim, noise.grid().dt());
    const IncrementHistory after(perturbed, node, dim, noise.grid().dt());
    const Eigen::MatrixXd a = phi.value(node, before);
    const Eigen::MatrixXd b = phi.value(node, after);
    return a == b;
  } catch (const PredictabilityError&) {
    return false;
  }
}

}  // namespace stochconv
