#pragma once

#include "biot/types.hpp"

#include <vector>

namespace biot {

struct LameParameters {
  double lambda = 0.0;
  double mu = 0.0;
};

/// Closed-form Lamé constants. Requires E > 0 and 0 < nu < 0.5 (lambda > 0).
LameParameters derive_lame(double youngs_modulus, double poisson_ratio);

/// User-facing material constants of one subdomain.
struct MaterialParameters {
  double E = 1.0e6;
  double nu = 0.499;
  double alpha = 1.0;
  double kappa = 1.0;
};

struct SubdomainMaterial {
  MaterialParameters params;
  double lambda = 0.0;
  double mu = 0.0;
  /// storage coefficient, fixed to alpha^2 / lambda
  double c0() const { return params.alpha * params.alpha / lambda; }
};

/// Piecewise-constant coefficients, one entry per subdomain (index sy * Nx + sx).
struct MaterialField {
  SubdomainGrid grid;
  std::vector<SubdomainMaterial> subdomains;

  const SubdomainMaterial& operator[](int i) const { return subdomains[i]; }

  static MaterialField uniform(SubdomainGrid grid, const MaterialParameters& p);
  /// Subdomain (i, j) is black when i + j is even; black cells take `black`.
  static MaterialField checkerboard(SubdomainGrid grid, const MaterialParameters& white,
                                    const MaterialParameters& black);
  /// Every subdomain scaled: E -> factor * E.
  MaterialField with_scaled_modulus(double factor) const;
};

}  // namespace biot
