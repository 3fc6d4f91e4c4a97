#include "fixture.hpp"

#include "biot/errors.hpp"
#include "biot/material.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace biot;

TEST(Mesh, CountsAndOrientation) {
  const StructuredMesh m = build_mesh(6, {2, 3});
  EXPECT_EQ(m.base.num_nodes(), 49);
  EXPECT_EQ(m.base.num_triangles(), 72);
  EXPECT_EQ(m.refined.num_nodes(), 13 * 13);
  EXPECT_EQ(m.refined.num_triangles(), 4 * 72);
  double area = 0.0;
  for (int t = 0; t < m.base.num_triangles(); ++t) {
    EXPECT_GT(m.base.signed_area(t), 0.0);
    area += m.base.signed_area(t);
  }
  EXPECT_NEAR(area, 1.0, 1e-14);
  double fine = 0.0;
  for (int t = 0; t < m.refined.num_triangles(); ++t) {
    EXPECT_GT(m.refined.signed_area(t), 0.0);
    fine += m.refined.signed_area(t);
  }
  EXPECT_NEAR(fine, 1.0, 1e-14);
}

TEST(Mesh, RefinedChildrenLieInParent) {
  const StructuredMesh m = build_mesh(4, {2, 2});
  std::vector<int> children(m.base.num_triangles(), 0);
  for (int t = 0; t < m.refined.num_triangles(); ++t) {
    const int p = m.parent[t];
    ++children[p];
    const Point c = m.refined.centroid(t);
    // barycentric coordinates of the child centroid in the parent
    const auto& tri = m.base.triangles[p];
    const Point a = m.base.vertices[tri[0]], b = m.base.vertices[tri[1]], d = m.base.vertices[tri[2]];
    const double det = (b.x - a.x) * (d.y - a.y) - (d.x - a.x) * (b.y - a.y);
    const double l1 = ((c.x - a.x) * (d.y - a.y) - (d.x - a.x) * (c.y - a.y)) / det;
    const double l2 = ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)) / det;
    EXPECT_GT(l1, 0.0);
    EXPECT_GT(l2, 0.0);
    EXPECT_LT(l1 + l2, 1.0);
  }
  for (int k : children) EXPECT_EQ(k, 4);
}

TEST(Mesh, RejectsIndivisibleGrid) {
  EXPECT_THROW(build_mesh(7, {2, 2}), ConfigurationError);
  EXPECT_THROW(build_mesh(0, {1, 1}), ConfigurationError);
}

TEST(Material, LameConstantsMatchClosedForm) {
  for (double E : {1.0, 3.0e4, 1.0e6})
    for (double nu : {0.1, 0.3, 0.49, 0.499, 0.49999}) {
      const LameParameters l = derive_lame(E, nu);
      const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
      const double mu = E / (2.0 * (1.0 + nu));
      EXPECT_NEAR(l.lambda / lambda, 1.0, 1e-13);
      EXPECT_NEAR(l.mu / mu, 1.0, 1e-13);
    }
  // nearly incompressible reference: lambda ~ 1.66e8 for E = 1e6, nu = 0.499
  EXPECT_NEAR(derive_lame(1.0e6, 0.499).lambda, 0.499e6 / (1.499 * 0.002), 1e-4);
}

TEST(Material, RejectsInvalidParameters) {
  EXPECT_THROW(derive_lame(1.0, 0.5), DomainError);
  EXPECT_THROW(derive_lame(1.0, 0.6), DomainError);
  EXPECT_THROW(derive_lame(0.0, 0.3), DomainError);
  EXPECT_THROW(derive_lame(1.0, 0.0), DomainError);
}

TEST(Material, CheckerboardColouring) {
  MaterialParameters white, black;
  black.E = 2.0;
  const MaterialField f = MaterialField::checkerboard({3, 2}, white, black);
  for (int sy = 0; sy < 2; ++sy)
    for (int sx = 0; sx < 3; ++sx)
      EXPECT_EQ(f[sy * 3 + sx].params.E, (sx + sy) % 2 == 0 ? 2.0 : white.E);
  for (const auto& s : f.subdomains) EXPECT_NEAR(s.c0(), s.params.alpha * s.params.alpha / s.lambda, 0.0);
}

TEST(FeSpaces, DofCounts) {
  const StructuredMesh m = build_mesh(4, {2, 2});
  // neumann-left: Dirichlet on right, bottom and top sides
  const FeSpaceSet s = build_spaces(m, BoundarySpec::neumann_left(), TotalPressureElement::p1);
  EXPECT_EQ(s.n_u, 2 * 8 * 7);
  EXPECT_EQ(s.n_xi, 25);
  EXPECT_EQ(s.n_p, 4 * 3);
  const FeSpaceSet d = build_spaces(m, BoundarySpec::all_dirichlet(), TotalPressureElement::p0);
  EXPECT_EQ(d.n_u, 2 * 7 * 7);
  EXPECT_EQ(d.n_xi, 32);
  EXPECT_EQ(d.n_p, 9);
}

namespace {

BlockSystem free_system(TotalPressureElement elem, const MaterialParameters& p, const LoadSpec& load) {
  BoundarySpec bc;
  bc.displacement_dirichlet = {false, false, false, false};
  bc.pressure_dirichlet = {false, false, false, false};
  const StructuredMesh m = build_mesh(4, {2, 2});
  const FeSpaceSet s = build_spaces(m, bc, elem);
  AssemblyOptions opt;
  opt.allow_empty_dirichlet = true;
  return assemble_blocks(m, s, MaterialField::uniform({2, 2}, p), bc, load, opt);
}

}  // namespace

TEST(Assembly, IntegralsOfFreeSystem) {
  MaterialParameters p;
  p.E = 7.0;
  p.nu = 0.3;
  p.alpha = 0.8;
  p.kappa = 2.5;
  const LameParameters l = derive_lame(p.E, p.nu);
  const LoadSpec load{0.5, -1.5, 2.0};
  for (auto elem : {TotalPressureElement::p1, TotalPressureElement::p0}) {
    const BlockSystem sys = free_system(elem, p, load);
    const Vec one_xi = Vec::Ones(sys.n_xi()), one_p = Vec::Ones(sys.n_p());
    EXPECT_NEAR(one_xi.dot(sys.C * one_xi) * l.lambda, 1.0, 1e-13);
    EXPECT_NEAR(one_p.dot(sys.D * one_xi) * l.lambda / p.alpha, 1.0, 1e-13);
    EXPECT_NEAR(one_p.dot(sys.E * one_p) * l.lambda / (2.0 * p.alpha * p.alpha), 1.0, 1e-13);
    EXPECT_NEAR(sys.g.sum(), load.g, 1e-13);
    Vec ex = Vec::Zero(sys.n_u()), ey = Vec::Zero(sys.n_u()), rot = Vec::Zero(sys.n_u());
    const StructuredMesh m = build_mesh(4, {2, 2});
    for (int k = 0; k < sys.n_u() / 2; ++k) {
      ex[2 * k] = 1.0;
      ey[2 * k + 1] = 1.0;
      const Point x = m.refined.vertices[sys.spaces.u_dof_node[k]];
      rot[2 * k] = -x.y;
      rot[2 * k + 1] = x.x;
    }
    EXPECT_NEAR(ex.dot(sys.f), load.fx, 1e-13);
    EXPECT_NEAR(ey.dot(sys.f), load.fy, 1e-13);
    // rigid motions: no strain energy; translations are divergence free
    const double scale = sys.A.norm();
    EXPECT_LT((sys.A * ex).norm(), 1e-12 * scale);
    EXPECT_LT((sys.A * ey).norm(), 1e-12 * scale);
    EXPECT_LT((sys.A * rot).norm(), 1e-12 * scale);
    EXPECT_LT((sys.B * ex).norm(), 1e-12);
    EXPECT_LT((sys.B * ey).norm(), 1e-12);
  }
}

TEST(Assembly, BlocksSymmetricAndLocalSumsExact) {
  test::Pipeline pl(test::small_config());
  const BlockSystem& s = pl.sys;
  EXPECT_LT(test::rel_asym(DenseMat(s.A)), 1e-15);
  EXPECT_LT(test::rel_asym(DenseMat(s.C)), 1e-15);
  EXPECT_LT(test::rel_asym(DenseMat(s.E)), 1e-15);
  std::vector<Triplet> A, B, C, D, E;
  for (const auto& loc : s.local) {
    A.insert(A.end(), loc.A.begin(), loc.A.end());
    B.insert(B.end(), loc.B.begin(), loc.B.end());
    C.insert(C.end(), loc.C.begin(), loc.C.end());
    D.insert(D.end(), loc.D.begin(), loc.D.end());
    E.insert(E.end(), loc.E.begin(), loc.E.end());
  }
  EXPECT_LT((sum_triplets(A, s.n_u(), s.n_u()) - s.A).norm(), 1e-12 * s.A.norm());
  EXPECT_LT((sum_triplets(B, s.n_xi(), s.n_u()) - s.B).norm(), 1e-14 * s.B.norm());
  EXPECT_LT((sum_triplets(C, s.n_xi(), s.n_xi()) - s.C).norm(), 1e-14 * s.C.norm());
  EXPECT_LT((sum_triplets(D, s.n_p(), s.n_xi()) - s.D).norm(), 1e-14 * s.D.norm());
  EXPECT_LT((sum_triplets(E, s.n_p(), s.n_p()) - s.E).norm(), 1e-14 * s.E.norm());
  EXPECT_GT(test::sym_eigenvalues(DenseMat(s.A)).minCoeff(), 0.0);
}

TEST(Assembly, SaddleInequalityHolds) {
  for (auto elem : {TotalPressureElement::p1, TotalPressureElement::p0}) {
    auto cfg = test::small_config();
    cfg.elem = elem;
    for (double nu : {0.3, 0.499, 0.49999}) {
      cfg.material.nu = nu;
      test::Pipeline pl(cfg);
      const SaddleInequalityReport rep = check_saddle_inequalities(pl.sys, 200);
      EXPECT_TRUE(rep.holds());
      EXPECT_GE(rep.min_ratio, 1.0);
    }
  }
}

TEST(Assembly, InfSupStableUnderRefinement) {
  // P1-iso-P2 / P1 is a stable Stokes pair: the constant stays bounded away from 0
  std::vector<double> beta;
  for (int nx : {4, 8, 12}) {
    auto cfg = test::small_config(nx, {1, 1});
    test::Pipeline pl(cfg);
    beta.push_back(discrete_inf_sup(pl.sys, pl.mat));
  }
  for (double b : beta) EXPECT_GT(b, 0.1);
  EXPECT_GT(beta.back(), 0.7 * beta.front());
}
