#include "biot/material.hpp"

#include "biot/errors.hpp"

#include <string>

namespace biot {

LameParameters derive_lame(double E, double nu) {
  if (!(E > 0.0)) throw DomainError("Young's modulus must be positive, got " + std::to_string(E));
  if (!(nu < 0.5)) throw DomainError("Poisson ratio must be < 0.5 (lambda undefined), got " + std::to_string(nu));
  if (!(nu > 0.0)) throw DomainError("Poisson ratio must be > 0 so that lambda > 0, got " + std::to_string(nu));
  LameParameters lp;
  lp.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  lp.mu = E / (2.0 * (1.0 + nu));
  return lp;
}

namespace {

SubdomainMaterial make(const MaterialParameters& p) {
  if (!(p.alpha > 0.0)) throw DomainError("Biot-Willis constant must be positive");
  if (!(p.kappa > 0.0)) throw DomainError("hydraulic conductivity must be positive");
  const LameParameters lp = derive_lame(p.E, p.nu);
  return SubdomainMaterial{p, lp.lambda, lp.mu};
}

}  // namespace

MaterialField MaterialField::uniform(SubdomainGrid grid, const MaterialParameters& p) {
  MaterialField m;
  m.grid = grid;
  m.subdomains.assign(grid.count(), make(p));
  return m;
}

MaterialField MaterialField::checkerboard(SubdomainGrid grid, const MaterialParameters& white,
                                          const MaterialParameters& black) {
  MaterialField m;
  m.grid = grid;
  const SubdomainMaterial w = make(white);
  const SubdomainMaterial b = make(black);
  m.subdomains.reserve(grid.count());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) m.subdomains.push_back((i + j) % 2 == 0 ? b : w);
  return m;
}

MaterialField MaterialField::with_scaled_modulus(double factor) const {
  MaterialField m = *this;
  for (auto& s : m.subdomains) {
    s.params.E *= factor;
    s = make(s.params);
  }
  return m;
}

}  // namespace biot
