#include "biot/fe_spaces.hpp"

#include "biot/errors.hpp"

namespace biot {

BoundarySpec BoundarySpec::neumann_left() {
  BoundarySpec bc;
  bc.displacement_dirichlet = {false, true, true, true};
  bc.pressure_dirichlet = {false, true, true, true};
  return bc;
}

BoundarySpec BoundarySpec::all_dirichlet() { return BoundarySpec{}; }

void BoundarySpec::validate() const {
  auto any = [](const std::array<bool, 4>& s) { return s[0] || s[1] || s[2] || s[3]; };
  if (!any(displacement_dirichlet))
    throw ConfigurationError("displacement Dirichlet boundary is empty");
  if (!any(pressure_dirichlet)) throw ConfigurationError("pressure Dirichlet boundary is empty");
}

std::string BoundarySpec::name() const {
  if (*this == BoundarySpec{}) return "dirichlet";
  const BoundarySpec nl = neumann_left();
  if (displacement_dirichlet == nl.displacement_dirichlet &&
      pressure_dirichlet == nl.pressure_dirichlet)
    return "neumann-left";
  return "custom";
}

std::string to_string(TotalPressureElement e) { return e == TotalPressureElement::p1 ? "p1" : "p0"; }

TotalPressureElement parse_total_pressure_element(const std::string& s) {
  if (s == "p1") return TotalPressureElement::p1;
  if (s == "p0") return TotalPressureElement::p0;
  throw ConfigurationError("unknown total-pressure element '" + s + "' (expected p1|p0)");
}

bool on_dirichlet_side(const GridTriangulation& g, int node, const std::array<bool, 4>& sides) {
  const int ix = g.node_ix(node);
  const int iy = g.node_iy(node);
  return (sides[0] && ix == 0) || (sides[1] && ix == g.cells_x) || (sides[2] && iy == 0) ||
         (sides[3] && iy == g.cells_y);
}

FeSpaceSet build_spaces(const StructuredMesh& mesh, const BoundarySpec& bc,
                        TotalPressureElement xi_element) {
  FeSpaceSet s;
  s.xi_element = xi_element;

  s.u_node_dof.assign(mesh.refined.num_nodes(), -1);
  for (int n = 0; n < mesh.refined.num_nodes(); ++n) {
    if (on_dirichlet_side(mesh.refined, n, bc.displacement_dirichlet)) continue;
    s.u_node_dof[n] = 2 * static_cast<int>(s.u_dof_node.size());
    s.u_dof_node.push_back(n);
  }
  s.n_u = 2 * static_cast<int>(s.u_dof_node.size());

  const int n_xi_entities =
      xi_element == TotalPressureElement::p1 ? mesh.base.num_nodes() : mesh.base.num_triangles();
  s.xi_dof.resize(n_xi_entities);
  for (int k = 0; k < n_xi_entities; ++k) s.xi_dof[k] = k;
  s.n_xi = n_xi_entities;

  s.p_node_dof.assign(mesh.base.num_nodes(), -1);
  for (int n = 0; n < mesh.base.num_nodes(); ++n) {
    if (on_dirichlet_side(mesh.base, n, bc.pressure_dirichlet)) continue;
    s.p_node_dof[n] = static_cast<int>(s.p_dof_node.size());
    s.p_dof_node.push_back(n);
  }
  s.n_p = static_cast<int>(s.p_dof_node.size());
  return s;
}

}  // namespace biot
