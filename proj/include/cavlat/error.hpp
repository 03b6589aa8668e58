#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cavlat {

/// Raised when an input violates a physical or structural invariant
/// (negative density, out-of-range site index, K > M, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an exact computation would exceed its configured size budget.
/// Carries the count that tripped the guard so callers can report it.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, double requested, double limit)
      : std::runtime_error(what), requested_(requested), limit_(limit) {}

  double requested() const noexcept { return requested_; }
  double limit() const noexcept { return limit_; }

 private:
  double requested_;
  double limit_;
};

}  // namespace cavlat
