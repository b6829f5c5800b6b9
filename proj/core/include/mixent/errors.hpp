#pragma once

#include <stdexcept>
#include <string>

namespace mixent {

/// A matrix required to be full rank is numerically rank deficient.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric-domain precondition failed (non positive definite matrix,
/// no GB/SEB intersection, ...).
class NumericDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact computation would exceed its configured size cap. The message
/// reports the requested and permitted sizes.
class SizeCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mixent
