#pragma once

#include <stdexcept>
#include <string>

namespace clarke {

/// A value lies outside the domain an operation is defined on
/// (n < 3, negative curvature, prohibited workspace region, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Vector or matrix sizes do not match the joint layout.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The requested sampler is not defined for the given configuration.
class UnsupportedMethodError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A rejection sampler exceeded its iteration cap.
class IterationCapError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace clarke
