#include "biot/mesh.hpp"

#include "biot/errors.hpp"

#include <cmath>
#include <string>

namespace biot {

double GridTriangulation::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Point& a = vertices[tri[0]];
  const Point& b = vertices[tri[1]];
  const Point& c = vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Point GridTriangulation::centroid(int t) const {
  const auto& tri = triangles[t];
  Point p;
  for (int k = 0; k < 3; ++k) {
    p.x += vertices[tri[k]].x / 3.0;
    p.y += vertices[tri[k]].y / 3.0;
  }
  return p;
}

GridTriangulation make_grid(int cells_x, int cells_y) {
  GridTriangulation g;
  g.cells_x = cells_x;
  g.cells_y = cells_y;
  g.vertices.reserve(static_cast<size_t>(cells_x + 1) * (cells_y + 1));
  for (int iy = 0; iy <= cells_y; ++iy)
    for (int ix = 0; ix <= cells_x; ++ix)
      g.vertices.push_back({static_cast<double>(ix) / cells_x, static_cast<double>(iy) / cells_y});
  g.triangles.reserve(2 * static_cast<size_t>(cells_x) * cells_y);
  for (int cy = 0; cy < cells_y; ++cy) {
    for (int cx = 0; cx < cells_x; ++cx) {
      const int v00 = g.node(cx, cy);
      const int v10 = g.node(cx + 1, cy);
      const int v11 = g.node(cx + 1, cy + 1);
      const int v01 = g.node(cx, cy + 1);
      g.triangles.push_back({v00, v10, v11});
      g.triangles.push_back({v00, v11, v01});
    }
  }
  return g;
}

StructuredMesh build_mesh(int nx, int ny, SubdomainGrid grid) {
  if (nx <= 0 || ny <= 0)
    throw ConfigurationError("mesh size must be positive, got nx=" + std::to_string(nx) +
                             ", ny=" + std::to_string(ny));
  if (grid.nx <= 0 || grid.ny <= 0)
    throw ConfigurationError("subdomain grid must be positive");
  if (nx % grid.nx != 0)
    throw ConfigurationError("nx=" + std::to_string(nx) + " is not divisible by Nx=" +
                             std::to_string(grid.nx));
  if (ny % grid.ny != 0)
    throw ConfigurationError("ny=" + std::to_string(ny) + " is not divisible by Ny=" +
                             std::to_string(grid.ny));

  StructuredMesh mesh;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.grid = grid;
  mesh.base = make_grid(nx, ny);
  // Red refinement of the BL-TR split grid is the same split on the doubled grid.
  mesh.refined = make_grid(2 * nx, 2 * ny);

  mesh.parent.resize(mesh.refined.triangles.size());
  for (int t = 0; t < mesh.refined.num_triangles(); ++t) {
    const Point c = mesh.refined.centroid(t);
    const int cx = std::min(static_cast<int>(c.x * nx), nx - 1);
    const int cy = std::min(static_cast<int>(c.y * ny), ny - 1);
    const double lx = c.x * nx - cx;
    const double ly = c.y * ny - cy;
    const int k = cy * nx + cx;
    mesh.parent[t] = (ly <= lx) ? 2 * k : 2 * k + 1;
  }
  return mesh;
}

}  // namespace biot
