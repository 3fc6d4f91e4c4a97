#pragma once

#include "biot/types.hpp"

#include <array>
#include <vector>

namespace biot {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using TriangleNodes = std::array<int, 3>;

/// Uniform triangulation of [0,1]^2 with cells split bottom-left to top-right.
///
/// Nodes are numbered row-major, node(ix, iy) = iy * (cells_x + 1) + ix.
/// Cell (cx, cy) holds triangles 2k (lower: v00 v10 v11) and 2k + 1
/// (upper: v00 v11 v01) with k = cy * cells_x + cx.
struct GridTriangulation {
  int cells_x = 0;
  int cells_y = 0;
  std::vector<Point> vertices;
  std::vector<TriangleNodes> triangles;

  int node(int ix, int iy) const { return iy * (cells_x + 1) + ix; }
  int node_ix(int n) const { return n % (cells_x + 1); }
  int node_iy(int n) const { return n / (cells_x + 1); }
  int num_nodes() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  double signed_area(int t) const;
  Point centroid(int t) const;
};

/// Base (pressure-level) triangulation plus its uniform red refinement used by
/// the P1-iso-P2 displacement space.
struct StructuredMesh {
  int nx = 0;
  int ny = 0;
  SubdomainGrid grid;
  GridTriangulation base;
  GridTriangulation refined;
  /// refined triangle -> base triangle containing it
  std::vector<int> parent;

  double h() const { return 1.0 / nx; }
  /// base cells per subdomain along x (H/h)
  int cells_per_sub_x() const { return nx / grid.nx; }
  int cells_per_sub_y() const { return ny / grid.ny; }
  /// subdomain index (sy * Nx + sx) owning base triangle t
  int subdomain_of_base_triangle(int t) const {
    const int cell = t / 2;
    const int cx = cell % nx;
    const int cy = cell / nx;
    return (cy / cells_per_sub_y()) * grid.nx + cx / cells_per_sub_x();
  }
};

GridTriangulation make_grid(int cells_x, int cells_y);

/// Throws ConfigurationError when nx (ny) is not divisible by grid.nx (grid.ny).
StructuredMesh build_mesh(int nx, int ny, SubdomainGrid grid);
inline StructuredMesh build_mesh(int nx, SubdomainGrid grid) { return build_mesh(nx, nx, grid); }

}  // namespace biot
