#pragma once

#include "biot/types.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace biot {

using LinearOperator = std::function<Vec(const Vec&)>;

struct PcgConfig {
  double tol = 1e-8;
  int max_iter = 1000;
  /// smallest / second-smallest Ritz ratio below which the smallest value is
  /// treated as degenerate
  double ritz_threshold = 0.2;
  bool reorthogonalize = false;

  /// Throws ConfigurationError unless 0 < tol < 1 and max_iter >= 1.
  void validate() const;
};

struct ValidMinimum {
  double value = 0.0;
  bool excluded_smallest = false;
  /// degeneracy suspected but fewer than two Ritz values available
  bool warning = false;
};

struct PcgResult {
  Vec x;
  int iterations = 0;
  bool converged = false;
  double b_norm = 0.0;
  std::vector<double> residuals;  // residuals[k] after k iterations (Euclidean, unpreconditioned)
  std::vector<double> alpha, beta;
  Vec ritz;                       // ascending
  double eig_min = 0.0;
  double eig_max = 0.0;
  ValidMinimum valid_min;
};

/// Preconditioned conjugate gradients from a zero initial guess, stopping on
/// ||b - A x|| <= tol ||b||. Throws SpdViolation on non-positive curvature or a
/// non-positive preconditioned residual product.
PcgResult pcg(const LinearOperator& A, const LinearOperator& M, const Vec& b, const PcgConfig& cfg);

/// Eigenvalues of the Lanczos tridiagonal built from CG coefficients:
///   T_jj = 1/alpha_j + beta_{j-1}/alpha_{j-1},  T_{j,j+1} = sqrt(beta_j)/alpha_j.
/// Uses alpha.size() steps; requires beta.size() >= alpha.size() - 1.
Vec ritz_values(const std::vector<double>& alpha, const std::vector<double>& beta);

/// Smallest Ritz value, or the second smallest when smallest / second < threshold.
ValidMinimum valid_min(const Vec& ritz, double threshold);

/// CSV with header "iteration,residual,relative_residual".
void write_residual_history(std::ostream& os, const PcgResult& r);

}  // namespace biot
