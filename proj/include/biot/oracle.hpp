#pragma once

#include "biot/assembly.hpp"
#include "biot/reduced_system.hpp"

#include <algorithm>

namespace biot {

inline constexpr int default_dense_limit = 5000;

struct FieldErrors {
  double u = 0.0;
  double xi = 0.0;
  double p = 0.0;
  double max() const { return std::max({u, xi, p}); }
};

/// Dense LU solve of the full three-field matrix after symmetric diagonal
/// scaling. Throws ConfigurationError when the dof count exceeds `limit`.
FieldSolution dense_solve(const BlockSystem& sys, int limit = default_dense_limit);

/// ||a - ref|| / ||ref||, defined as 0 when both vanish.
double relative_error(const Vec& a, const Vec& ref);

FieldErrors compare_fields(const FieldSolution& dd, const FieldSolution& ref);

}  // namespace biot
