#pragma once

#include <stdexcept>
#include <string>

namespace stochconv {

/// Shapes of operators, vectors or ensembles do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scalar parameter lies outside its admissible range (negative time,
/// exponent below one, beta outside its interval, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An adapted integrand read increments at or after its own node.
class PredictabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(want) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace detail
}  // namespace stochconv
