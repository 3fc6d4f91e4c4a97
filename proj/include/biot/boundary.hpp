#pragma once

#include <array>
#include <string>

namespace biot {

enum class Side { left = 0, right = 1, bottom = 2, top = 3 };

/// Homogeneous Dirichlet sides of the unit square per field; the remaining
/// sides carry zero Neumann data.
struct BoundarySpec {
  std::array<bool, 4> displacement_dirichlet{true, true, true, true};
  std::array<bool, 4> pressure_dirichlet{true, true, true, true};

  /// Neumann on x = 0 for both fields, Dirichlet elsewhere.
  static BoundarySpec neumann_left();
  static BoundarySpec all_dirichlet();

  bool u_dirichlet(Side s) const { return displacement_dirichlet[static_cast<int>(s)]; }
  bool p_dirichlet(Side s) const { return pressure_dirichlet[static_cast<int>(s)]; }

  /// Throws ConfigurationError unless both Dirichlet parts are nonempty.
  void validate() const;
  std::string name() const;

  bool operator==(const BoundarySpec&) const = default;
};

}  // namespace biot
