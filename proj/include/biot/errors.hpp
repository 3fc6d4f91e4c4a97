#pragma once

#include <stdexcept>
#include <string>

namespace biot {

/// Invalid user-facing configuration (mesh/grid mismatch, bad parameters, ...).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter outside the domain of a closed-form formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A construction invariant failed; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Local or coarse factorization found a singular block.
class SingularBlockError : public std::runtime_error {
 public:
  SingularBlockError(const std::string& what, int subdomain)
      : std::runtime_error(what), subdomain_(subdomain) {}
  /// -1 for the coarse problem.
  int subdomain() const { return subdomain_; }

 private:
  int subdomain_;
};

/// Krylov iteration hit non-positive curvature or a non-positive preconditioned inner product.
class SpdViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace biot
