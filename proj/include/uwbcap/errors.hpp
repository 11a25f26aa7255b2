#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uwbcap {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Zero-length link where a gain or power would be singular.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Geodesic through antipodal endpoints (no unique great circle).
class DegenerateGeodesicError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Violated precondition on a structured input (partitions, routes, configs).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Parameters place the construction outside its asymptotic regime.
class RegimeError : public std::runtime_error {
 public:
  RegimeError(const std::string& what, std::size_t minimum_n)
      : std::runtime_error(what), minimum_n_(minimum_n) {}

  std::size_t minimum_n() const noexcept { return minimum_n_; }

 private:
  std::size_t minimum_n_;
};

}  // namespace uwbcap
