#pragma once

#include "biot/mesh.hpp"
#include "biot/types.hpp"

namespace biot {

/// Rectangular nonoverlapping subdomains aligned with the base mesh.
struct SubdomainPartition {
  SubdomainGrid grid;
  int cells_x = 0;  // base cells per subdomain along x (H/h)
  int cells_y = 0;
  std::vector<IndexList> base_triangles;  // per subdomain
  std::vector<double> diameter;           // H_i
  /// base nodes on Gamma = (union of subdomain boundaries) minus the outer boundary
  IndexList interface_base_nodes;
  /// base nodes of Gamma_i = boundary of subdomain i intersected with Gamma
  std::vector<IndexList> subdomain_interface_nodes;

  int num_subdomains() const { return grid.count(); }
  double H_over_h() const { return static_cast<double>(cells_x); }

  /// Subdomains whose closure contains grid node (ix, iy); `refinement` is 1
  /// for the base mesh and 2 for the refined mesh. Ascending order.
  IndexList owners(int ix, int iy, int refinement) const;
  /// Node lies on a corner of the subdomain grid.
  bool is_coarse_vertex(int ix, int iy, int refinement) const {
    return ix % (cells_x * refinement) == 0 && iy % (cells_y * refinement) == 0;
  }
};

SubdomainPartition partition(const StructuredMesh& mesh, SubdomainGrid grid);

}  // namespace biot
