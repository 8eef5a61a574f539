#pragma once

// JSON forms of operators, semigroups, kernels and reports.
//
//   operator   {"kind":"diagonal","eigenvalues":[...]} | {"kind":"dense","rows":[[...],...]}
//   semigroup  same shapes; diagonal eigenvalues are the decay rates lambda_k,
//              dense rows are the generator A with S(t) = exp(tA)
//   kernel     {"d2_weights":[...], "kernel_masses":[[...],...]}
//   norm       {"estimate":..,"se":..,"p":..,"q":..,"r":..}

#include "stochconv/convolution.hpp"
#include "stochconv/hilbert.hpp"
#include "stochconv/measure.hpp"
#include "stochconv/norms.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace stochconv {

class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Operator operator_from_json(const nlohmann::json& j);
nlohmann::json operator_to_json(const Operator& op);

SemigroupSpec semigroup_from_json(const nlohmann::json& j);
nlohmann::json semigroup_to_json(const SemigroupSpec& sg);

KernelSpec kernel_from_json(const nlohmann::json& j);
nlohmann::json kernel_to_json(const KernelSpec& k);

nlohmann::json to_json(const NormReport& rep);
nlohmann::json to_json(const DiscrepancyReport& rep);

/// 64-bit FNV-1a of a string, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace stochconv
