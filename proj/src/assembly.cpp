#include "biot/assembly.hpp"

#include "biot/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <ostream>
#include <random>

namespace biot {

namespace {

struct P1Triangle {
  double area = 0.0;
  double gx[3] = {0, 0, 0};
  double gy[3] = {0, 0, 0};
  Point v[3];
};

P1Triangle p1_triangle(const GridTriangulation& g, int t) {
  P1Triangle e;
  for (int k = 0; k < 3; ++k) e.v[k] = g.vertices[g.triangles[t][k]];
  const double area2 = (e.v[1].x - e.v[0].x) * (e.v[2].y - e.v[0].y) -
                       (e.v[2].x - e.v[0].x) * (e.v[1].y - e.v[0].y);
  e.area = 0.5 * area2;
  for (int k = 0; k < 3; ++k) {
    const Point& b = e.v[(k + 1) % 3];
    const Point& c = e.v[(k + 2) % 3];
    e.gx[k] = (b.y - c.y) / area2;
    e.gy[k] = (c.x - b.x) / area2;
  }
  return e;
}

/// Barycentric coordinates of p in triangle e.
std::array<double, 3> barycentric(const P1Triangle& e, Point p) {
  std::array<double, 3> l{};
  const double cx = (e.v[0].x + e.v[1].x + e.v[2].x) / 3.0;
  const double cy = (e.v[0].y + e.v[1].y + e.v[2].y) / 3.0;
  for (int k = 0; k < 3; ++k) l[k] = 1.0 / 3.0 + e.gx[k] * (p.x - cx) + e.gy[k] * (p.y - cy);
  return l;
}

double p1_mass(int i, int j, double area) { return area / 12.0 * (i == j ? 2.0 : 1.0); }

}  // namespace

SpMat sum_triplets(const std::vector<Triplet>& t, int rows, int cols) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat BlockSystem::full_matrix() const {
  const int nu = n_u(), nxi = n_xi(), np = n_p();
  std::vector<Triplet> t;
  t.reserve(A.nonZeros() + 2 * B.nonZeros() + C.nonZeros() + 2 * D.nonZeros() + E.nonZeros());
  auto add = [&t](const SpMat& m, int r0, int c0, double s, bool transpose) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it) {
        const int r = transpose ? it.col() : it.row();
        const int c = transpose ? it.row() : it.col();
        t.emplace_back(r0 + r, c0 + c, s * it.value());
      }
  };
  add(A, 0, 0, 1.0, false);
  add(B, 0, nu, 1.0, true);
  add(B, nu, 0, 1.0, false);
  add(C, nu, nu, -1.0, false);
  add(D, nu, nu + nxi, 1.0, true);
  add(D, nu + nxi, nu, 1.0, false);
  add(E, nu + nxi, nu + nxi, -1.0, false);
  return sum_triplets(t, nu + nxi + np, nu + nxi + np);
}

Vec BlockSystem::full_rhs() const {
  Vec r = Vec::Zero(total_dofs());
  r.head(n_u()) = f;
  r.tail(n_p()) = g;
  return r;
}

BlockSystem assemble_blocks(const StructuredMesh& mesh, const FeSpaceSet& spaces,
                            const MaterialField& materials, const BoundarySpec& bc,
                            const LoadSpec& load, const AssemblyOptions& options) {
  if (!options.allow_empty_dirichlet) bc.validate();
  if (materials.grid.nx != mesh.grid.nx || materials.grid.ny != mesh.grid.ny)
    throw ConfigurationError("material field grid does not match the mesh subdomain grid");
  if (static_cast<int>(spaces.u_node_dof.size()) != mesh.refined.num_nodes())
    throw InternalError("assembly: displacement dof map does not match the refined mesh");
  if (static_cast<int>(spaces.p_node_dof.size()) != mesh.base.num_nodes())
    throw InternalError("assembly: pressure dof map does not match the base mesh");
  const int expected_xi = spaces.xi_nodal() ? mesh.base.num_nodes() : mesh.base.num_triangles();
  if (static_cast<int>(spaces.xi_dof.size()) != expected_xi)
    throw InternalError("assembly: total_pressure dof map does not match the base mesh");

  BlockSystem sys;
  sys.spaces = spaces;
  const int nsub = mesh.grid.count();
  sys.local.resize(nsub);

  // Base-mesh forms: c, d, e and the source g.
  for (int t = 0; t < mesh.base.num_triangles(); ++t) {
    const int s = mesh.subdomain_of_base_triangle(t);
    const SubdomainMaterial& mat = materials[s];
    const double lam = mat.lambda, alpha = mat.params.alpha, kappa = mat.params.kappa;
    SubdomainContribution& loc = sys.local[s];
    const P1Triangle e = p1_triangle(mesh.base, t);
    const auto& tri = mesh.base.triangles[t];

    int pd[3];
    for (int k = 0; k < 3; ++k) pd[k] = spaces.p_node_dof[tri[k]];

    if (spaces.xi_nodal()) {
      int xd[3];
      for (int k = 0; k < 3; ++k) xd[k] = spaces.xi_dof[tri[k]];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const double m = p1_mass(i, j, e.area);
          loc.C.emplace_back(xd[i], xd[j], m / lam);
          if (pd[i] >= 0) loc.D.emplace_back(pd[i], xd[j], alpha / lam * m);
        }
    } else {
      const int xd = spaces.xi_dof[t];
      loc.C.emplace_back(xd, xd, e.area / lam);
      for (int i = 0; i < 3; ++i)
        if (pd[i] >= 0) loc.D.emplace_back(pd[i], xd, alpha / lam * e.area / 3.0);
    }

    for (int i = 0; i < 3; ++i) {
      if (pd[i] < 0) continue;
      for (int j = 0; j < 3; ++j) {
        if (pd[j] < 0) continue;
        const double stiff = kappa * e.area * (e.gx[i] * e.gx[j] + e.gy[i] * e.gy[j]);
        loc.E.emplace_back(pd[i], pd[j], stiff + 2.0 * alpha * alpha / lam * p1_mass(i, j, e.area));
      }
      loc.g.emplace_back(pd[i], load.g * e.area / 3.0);
    }
  }

  // Refined-mesh forms: a, b and the body force f.
  for (int t = 0; t < mesh.refined.num_triangles(); ++t) {
    const int bt = mesh.parent[t];
    const int s = mesh.subdomain_of_base_triangle(bt);
    const double mu = materials[s].mu;
    SubdomainContribution& loc = sys.local[s];
    const P1Triangle e = p1_triangle(mesh.refined, t);
    const auto& tri = mesh.refined.triangles[t];
    int ud[3];
    for (int k = 0; k < 3; ++k) ud[k] = spaces.u_node_dof[tri[k]];
    const double grad[2][3] = {{e.gx[0], e.gx[1], e.gx[2]}, {e.gy[0], e.gy[1], e.gy[2]}};

    for (int k = 0; k < 3; ++k) {
      if (ud[k] < 0) continue;
      for (int c = 0; c < 2; ++c) {
        for (int l = 0; l < 3; ++l) {
          if (ud[l] < 0) continue;
          const double dot = e.gx[k] * e.gx[l] + e.gy[k] * e.gy[l];
          for (int d = 0; d < 2; ++d) {
            const double v = mu * e.area * ((c == d ? dot : 0.0) + grad[d][k] * grad[c][l]);
            loc.A.emplace_back(ud[k] + c, ud[l] + d, v);
          }
        }
      }
      loc.f.emplace_back(ud[k], load.fx * e.area / 3.0);
      loc.f.emplace_back(ud[k] + 1, load.fy * e.area / 3.0);
    }

    // b(v, xi) = -int div(v) xi; div of a P1 field is constant on t.
    const Point centroid = mesh.refined.centroid(t);
    if (spaces.xi_nodal()) {
      const P1Triangle pe = p1_triangle(mesh.base, bt);
      const auto lam = barycentric(pe, centroid);
      for (int j = 0; j < 3; ++j) {
        const int xd = spaces.xi_dof[mesh.base.triangles[bt][j]];
        const double psi_int = e.area * lam[j];
        for (int k = 0; k < 3; ++k) {
          if (ud[k] < 0) continue;
          for (int c = 0; c < 2; ++c) loc.B.emplace_back(xd, ud[k] + c, -grad[c][k] * psi_int);
        }
      }
    } else {
      const int xd = spaces.xi_dof[bt];
      for (int k = 0; k < 3; ++k) {
        if (ud[k] < 0) continue;
        for (int c = 0; c < 2; ++c) loc.B.emplace_back(xd, ud[k] + c, -grad[c][k] * e.area);
      }
    }
  }

  const int nu = spaces.n_u, nxi = spaces.n_xi, np = spaces.n_p;
  std::vector<Triplet> tA, tB, tC, tD, tE;
  sys.f = Vec::Zero(nu);
  sys.g = Vec::Zero(np);
  for (const auto& loc : sys.local) {
    tA.insert(tA.end(), loc.A.begin(), loc.A.end());
    tB.insert(tB.end(), loc.B.begin(), loc.B.end());
    tC.insert(tC.end(), loc.C.begin(), loc.C.end());
    tD.insert(tD.end(), loc.D.begin(), loc.D.end());
    tE.insert(tE.end(), loc.E.begin(), loc.E.end());
    for (const auto& [i, v] : loc.f) sys.f[i] += v;
    for (const auto& [i, v] : loc.g) sys.g[i] += v;
  }
  sys.A = sum_triplets(tA, nu, nu);
  sys.B = sum_triplets(tB, nxi, nu);
  sys.C = sum_triplets(tC, nxi, nxi);
  sys.D = sum_triplets(tD, np, nxi);
  sys.E = sum_triplets(tE, np, np);
  return sys;
}

void write_coordinate(std::ostream& os, const SpMat& m) {
  os.precision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

SaddleInequalityReport check_saddle_inequalities(const BlockSystem& sys, int trials,
                                                 std::uint64_t seed) {
  const double c = (3.0 - std::sqrt(5.0)) / 2.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SaddleInequalityReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  Vec eta(sys.n_xi()), q(sys.n_p());
  for (int k = 0; k < trials; ++k) {
    for (int i = 0; i < eta.size(); ++i) eta[i] = normal(rng);
    for (int i = 0; i < q.size(); ++i) q[i] = normal(rng);
    const double ce = eta.dot(sys.C * eta);
    const double eq = q.dot(sys.E * q);
    const double dq = q.dot(sys.D * eta);
    const double form = ce - 2.0 * dq + eq;
    const double bound = c * (ce + eq);
    ++rep.trials;
    if (bound == 0.0) continue;
    rep.min_ratio = std::min(rep.min_ratio, form / bound);
    if (form < bound * (1.0 - 1e-12)) ++rep.violations;
  }
  return rep;
}

double discrete_inf_sup(const BlockSystem& sys, const MaterialField& materials) {
  const int nu = sys.n_u(), nxi = sys.n_xi();
  std::vector<Triplet> ta, tm;
  for (size_t s = 0; s < sys.local.size(); ++s) {
    const double mu = materials[static_cast<int>(s)].mu;
    const double lam = materials[static_cast<int>(s)].lambda;
    for (const auto& t : sys.local[s].A) ta.emplace_back(t.row(), t.col(), t.value() / (2.0 * mu));
    for (const auto& t : sys.local[s].C) tm.emplace_back(t.row(), t.col(), t.value() * lam);
  }
  const DenseMat a = DenseMat(sum_triplets(ta, nu, nu));
  const DenseMat m = DenseMat(sum_triplets(tm, nxi, nxi));
  const DenseMat b = DenseMat(sys.B);
  const DenseMat s = b * a.llt().solve(b.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMat> es(0.5 * (s + s.transpose()), m);
  const Vec ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] > 1e-10 * scale) return std::sqrt(ev[i]);
  return 0.0;
}

}  // namespace biot
