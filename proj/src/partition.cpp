#include "biot/partition.hpp"

#include "biot/errors.hpp"

#include <cmath>

namespace biot {

namespace {

IndexList axis_owners(int i, int cells_per_sub, int count) {
  IndexList out;
  if (i % cells_per_sub == 0) {
    const int k = i / cells_per_sub;
    if (k - 1 >= 0) out.push_back(k - 1);
    if (k < count) out.push_back(k);
  } else {
    out.push_back(i / cells_per_sub);
  }
  return out;
}

}  // namespace

IndexList SubdomainPartition::owners(int ix, int iy, int refinement) const {
  const IndexList xs = axis_owners(ix, cells_x * refinement, grid.nx);
  const IndexList ys = axis_owners(iy, cells_y * refinement, grid.ny);
  IndexList out;
  for (int sy : ys)
    for (int sx : xs) out.push_back(sy * grid.nx + sx);
  return out;
}

SubdomainPartition partition(const StructuredMesh& mesh, SubdomainGrid grid) {
  if (grid.nx != mesh.grid.nx || grid.ny != mesh.grid.ny)
    throw ConfigurationError("partition grid does not match the grid the mesh was built for");
  SubdomainPartition part;
  part.grid = grid;
  part.cells_x = mesh.cells_per_sub_x();
  part.cells_y = mesh.cells_per_sub_y();
  const int nsub = grid.count();
  part.base_triangles.resize(nsub);
  for (int t = 0; t < mesh.base.num_triangles(); ++t)
    part.base_triangles[mesh.subdomain_of_base_triangle(t)].push_back(t);

  const double hx = 1.0 / grid.nx, hy = 1.0 / grid.ny;
  part.diameter.assign(nsub, std::sqrt(hx * hx + hy * hy));

  part.subdomain_interface_nodes.resize(nsub);
  for (int n = 0; n < mesh.base.num_nodes(); ++n) {
    const int ix = mesh.base.node_ix(n), iy = mesh.base.node_iy(n);
    const bool outer = ix == 0 || iy == 0 || ix == mesh.nx || iy == mesh.ny;
    const IndexList own = part.owners(ix, iy, 1);
    if (outer || own.size() < 2) continue;
    part.interface_base_nodes.push_back(n);
    for (int s : own) part.subdomain_interface_nodes[s].push_back(n);
  }
  return part;
}

}  // namespace biot
