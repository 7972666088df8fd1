#ifndef CAPFADE_ERROR_HPP
#define CAPFADE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace capfade {

/// Argument outside the mathematical domain of an operation (negative time
/// step, non-positive absolute temperature, SOC outside [0, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent model configuration: empty lookup maps, invalid parameter
/// sets, malformed config files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data failed validation (CSV schema, ordering, value ranges).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs are numerically valid but outside what the aging equations allow,
/// e.g. a non-positive SEI denominator 1 + X.
class ModelValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter estimation could not produce a result.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The fade trajectory never reaches the end-of-life threshold.
class NoEolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace capfade

#endif
