#pragma once

#include <stdexcept>
#include <string>

namespace scatterfit {

/// Coincident points, zero-length directions, or an azimuth that the
/// line of sight leaves undefined.
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Vectors or matrices whose sizes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace scatterfit
