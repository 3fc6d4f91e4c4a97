#pragma once

#include "biot/boundary.hpp"
#include "biot/mesh.hpp"
#include "biot/types.hpp"

#include <string>

namespace biot {

enum class TotalPressureElement { p1, p0 };

std::string to_string(TotalPressureElement e);
TotalPressureElement parse_total_pressure_element(const std::string& s);

/// Dof numbering of the (P1-iso-P2)^2 x {P1 | P0} x P1 product space.
///
/// Displacement dofs come in (x, y) pairs per free refined node:
/// dofs 2k and 2k + 1 belong to node u_dof_node[k]. Dirichlet nodes carry -1.
struct FeSpaceSet {
  TotalPressureElement xi_element = TotalPressureElement::p1;
  IndexList u_node_dof;   // refined node -> first dof, or -1
  IndexList u_dof_node;   // dof pair k -> refined node
  IndexList xi_dof;       // base node (p1) or base triangle (p0) -> dof
  IndexList p_node_dof;   // base node -> dof, or -1
  IndexList p_dof_node;
  int n_u = 0;
  int n_xi = 0;
  int n_p = 0;

  int total() const { return n_u + n_xi + n_p; }
  /// true when the total pressure is nodal on the base mesh
  bool xi_nodal() const { return xi_element == TotalPressureElement::p1; }
};

bool on_dirichlet_side(const GridTriangulation& g, int node, const std::array<bool, 4>& sides);

FeSpaceSet build_spaces(const StructuredMesh& mesh, const BoundarySpec& bc,
                        TotalPressureElement xi_element);

}  // namespace biot
