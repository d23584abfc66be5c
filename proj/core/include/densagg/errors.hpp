#pragma once

#include <stdexcept>

namespace densagg {

// Input that violates a documented contract: malformed grids, masses off by
// more than the tolerance, unreadable files, failed class checks.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A precondition gate on numeric parameters, e.g. log M <= 16 min(1, A-1)^2 n.
class ParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Experiment configuration rejected before any work is done.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Every candidate has zero likelihood on some observed prefix, so the weight
// normalizer is 0 and the weights are undefined.
class DegenerateWeightsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A construction that the preconditions guarantee to succeed did not.
class ConstructionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace densagg
