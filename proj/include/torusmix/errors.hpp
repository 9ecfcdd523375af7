#pragma once

#include <stdexcept>
#include <string>

namespace torusmix {

// Error taxonomy maps onto CLI exit codes: config -> 2, refusal -> 3,
// everything else -> 4.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class StabilityError : public std::runtime_error {
 public:
  explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Estimator cannot produce a value (constant field, empty set, ...).
class EstimatorError : public std::runtime_error {
 public:
  explicit EstimatorError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical refusal: the requested configuration is not resolvable at the
// allowed grid sizes. Carries the minimal admissible resolution.
class RefusalError : public std::runtime_error {
 public:
  RefusalError(const std::string& what, int minimal_resolution)
      : std::runtime_error(what), minimal_resolution(minimal_resolution) {}
  int minimal_resolution;
};

}  // namespace torusmix
