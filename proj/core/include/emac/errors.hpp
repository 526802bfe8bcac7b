#pragma once

#include <stdexcept>

namespace emac {

/// Invalid simulation, training or campaign configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// API misuse: stepping a finished episode, stale caches, empty inputs.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values reached an optimizer.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric was requested where it is undefined (e.g. goodput of a zero-length episode).
class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace emac
