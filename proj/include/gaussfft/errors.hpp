#pragma once

#include <stdexcept>
#include <string>

namespace gaussfft {

// Operands of a binary operation live on different time grids.
struct GridMismatch : std::invalid_argument {
  explicit GridMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// A weight h fails the orthogonality (or orthonormality) requirement for a family.
struct MembershipError : std::domain_error {
  explicit MembershipError(const std::string& what) : std::domain_error(what) {}
};

// An ε-regularized quadrature sequence did not settle within tolerance.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent run configuration (CLI exit status 2).
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace gaussfft
