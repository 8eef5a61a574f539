#pragma once

// Discrete stochastic Fubini identity: for a finite parameter measure
// mu = sum_j w_j delta_{y_j},
//   I( sum_j w_j g(y_j) ) == sum_j w_j I( g(y_j) )
// on every noise realization.

#include "stochconv/convolution.hpp"
#include "stochconv/integrand.hpp"
#include "stochconv/ito.hpp"

#include <functional>
#include <vector>

namespace stochconv {

class FubiniFamily {
 public:
  FubiniFamily(std::vector<double> atoms, std::vector<double> weights,
               std::vector<IntegrandSpec> integrands);

  /// Builds g(y_j) for every atom with `factory`.
  static FubiniFamily from_factory(std::vector<double> atoms, std::vector<double> weights,
                                   const std::function<IntegrandSpec(double)>& factory);

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<IntegrandSpec>& integrands() const noexcept { return integrands_; }
  double total_weight() const;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<IntegrandSpec> integrands_;
};

/// Ito integral of Y = sum_j w_j g(y_j).
PathEnsemble integrate_then_ito(const FubiniFamily& family, const NoiseEnsemble& noise);

/// sum_j w_j I(g(y_j)), accumulated in atom order; each term is computed as
/// I(w_j g(y_j)).
PathEnsemble ito_then_integrate(const FubiniFamily& family, const NoiseEnsemble& noise);

struct FubiniReport {
  DiscrepancyReport discrepancy;
  /// max over paths and nodes of |difference|.
  double headline = 0.0;
  /// Largest |value| over both ensembles, used to make the headline relative.
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? headline / scale : headline; }
};

FubiniReport fubini_report(const FubiniFamily& family, const NoiseEnsemble& noise);

}  // namespace stochconv
