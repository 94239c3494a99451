#pragma once

#include <stdexcept>
#include <string>

namespace laserlab {

/// Invalid physical inputs or malformed run configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical blow-up: non-finite state, quadrature that cannot reach its
/// error target. CLI exit code 3.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal dual-route identity or oracle comparison failed beyond its
/// tolerance. CLI exit code 4.
class SelfCheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace laserlab
