#pragma once

#include <stdexcept>
#include <string>

namespace nmrd {

// Wrong matrix shape for the requested operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input violates a physical invariant (Hermiticity, trace, probability range).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two independent routes to the same quantity disagree.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integrated state has drifted away from a Hermitian matrix.
class NumericalDriftError : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

// Caller broke a solver contract (non-constant drive to the closed-form solver).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nmrd
