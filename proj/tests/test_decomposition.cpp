#include "fixture.hpp"

#include "biot/dof_classification.hpp"
#include "biot/errors.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace biot;

namespace {

ExperimentConfig checker_config(PrimalVariant primal, TotalPressureElement elem) {
  auto c = test::small_config(12, {3, 3});
  c.pattern = MaterialPattern::checkerboard;
  c.black.E = 3.0e3;
  c.black.nu = 0.3;
  c.black.kappa = 1.0e-2;
  c.primal = primal;
  c.elem = elem;
  return c;
}

void expect_field_consistent(const FieldClassification& f) {
  std::map<int, int> copies;
  for (const auto& m : f.sub) {
    std::set<int> local(m.dofs.begin(), m.dofs.end());
    EXPECT_EQ(static_cast<int>(local.size()), m.size());
    for (int d : m.dofs) ++copies[d];
    for (int k = 0; k < m.n_interface(); ++k) {
      const int id = m.interface_id[k];
      EXPECT_EQ(f.interface_dofs[id], m.dofs[m.n_interior + k]);
    }
  }
  EXPECT_EQ(static_cast<int>(copies.size()), f.n_dofs);
  const IndexList idx = f.interface_index_of_dof();
  for (const auto& [d, n] : copies) {
    if (idx[d] < 0) EXPECT_EQ(n, 1);
    else EXPECT_EQ(n, static_cast<int>(f.interface_owners[idx[d]].size()));
  }
  std::vector<int> seen(f.n_dual(), 0);
  for (const auto& m : f.sub) {
    EXPECT_EQ(m.dual.size() + m.primal.size(), static_cast<size_t>(m.n_interface()));
    for (int id : m.dual_id) ++seen[id];
  }
  for (int n : seen) EXPECT_EQ(n, 2);
}

}  // namespace

TEST(Partition, InterfaceNodes) {
  const StructuredMesh m = build_mesh(4, {2, 2});
  const SubdomainPartition p = partition(m, {2, 2});
  EXPECT_EQ(p.interface_base_nodes.size(), 5u);
  for (const auto& g : p.subdomain_interface_nodes) EXPECT_EQ(g.size(), 3u);
  for (const auto& t : p.base_triangles) EXPECT_EQ(t.size(), 8u);
  EXPECT_EQ(p.owners(2, 2, 1), (IndexList{0, 1, 2, 3}));
  EXPECT_EQ(p.owners(4, 4, 2), (IndexList{0, 1, 2, 3}));
  EXPECT_EQ(p.owners(1, 2, 1), (IndexList{0, 2}));
  EXPECT_EQ(p.owners(1, 1, 1), (IndexList{0}));
  EXPECT_DOUBLE_EQ(p.H_over_h(), 2.0);
}

TEST(Classification, PrimalCounts) {
  // 3x3 grid: 4 interior cross points and 12 interior edges; with a Neumann
  // side the 2 cross points and 3 edges touching x = 0 stay free as well
  struct Expect {
    const char* bc;
    int vertices, edges;
  };
  for (const Expect& e : {Expect{"dirichlet", 4, 12}, Expect{"neumann-left", 6, 12}})
    for (auto elem : {TotalPressureElement::p1, TotalPressureElement::p0}) {
      auto c = checker_config(PrimalVariant::vertex, elem);
      c.bc = parse_boundary(e.bc);
      const DofClassification v = classify_case(c);
      EXPECT_EQ(v.u.n_primal, 2 * e.vertices);
      EXPECT_EQ(v.p.n_primal, e.vertices);
      c.primal = PrimalVariant::vertex_edge;
      const DofClassification ve = classify_case(c);
      EXPECT_EQ(ve.u.n_primal, 2 * (e.vertices + e.edges));
      EXPECT_EQ(ve.p.n_primal, e.vertices + e.edges);
    }
}

TEST(Classification, EveryDofAccountedFor) {
  for (auto primal : {PrimalVariant::vertex, PrimalVariant::vertex_edge})
    for (auto elem : {TotalPressureElement::p1, TotalPressureElement::p0}) {
      const DofClassification dc = classify_case(checker_config(primal, elem));
      expect_field_consistent(dc.u);
      expect_field_consistent(dc.p);
      if (elem == TotalPressureElement::p0) EXPECT_EQ(dc.xi.n_interface(), 0);
      else EXPECT_GT(dc.xi.n_interface(), 0);
    }
}

TEST(Classification, SingleSubdomainHasNoInterface) {
  const DofClassification dc = classify_case(test::small_config(4, {1, 1}));
  EXPECT_EQ(dc.u.n_interface(), 0);
  EXPECT_EQ(dc.xi.n_interface(), 0);
  EXPECT_EQ(dc.p.n_interface(), 0);
}

TEST(EdgeBasis, OrthogonalSymmetricAverageCarrying) {
  for (int n = 1; n <= 9; ++n) {
    const DenseMat Q = edge_average_basis(n);
    EXPECT_LT((Q * Q - DenseMat::Identity(n, n)).norm(), 1e-14);
    EXPECT_LT((Q - Q.transpose()).norm(), 1e-15);
    EXPECT_LT((Q.col(n - 1) - Vec::Constant(n, 1.0 / std::sqrt(n))).norm(), 1e-15);
    // remaining columns are average free
    for (int j = 0; j + 1 < n; ++j) EXPECT_NEAR(Q.col(j).sum(), 0.0, 1e-14);
  }
}

TEST(Scalings, PartitionOfUnity) {
  for (auto primal : {PrimalVariant::vertex, PrimalVariant::vertex_edge}) {
    test::Pipeline pl(checker_config(primal, TotalPressureElement::p1));
    auto check = [](const FieldClassification& f, const std::vector<Vec>& w) {
      std::vector<double> sum(f.n_interface(), 0.0);
      for (size_t s = 0; s < f.sub.size(); ++s)
        for (int k = 0; k < f.sub[s].n_interface(); ++k) {
          EXPECT_GT(w[s][k], 0.0);
          sum[f.sub[s].interface_id[k]] += w[s][k];
        }
      for (double x : sum) EXPECT_NEAR(x, 1.0, 1e-14);
    };
    check(pl.dc.u, pl.w.u);
    check(pl.dc.xi, pl.w.xi);
    check(pl.dc.p, pl.w.p);
  }
}

TEST(Transfer, JumpIsSignedBooleanAndScaledInverse) {
  for (auto primal : {PrimalVariant::vertex, PrimalVariant::vertex_edge}) {
    test::Pipeline pl(checker_config(primal, TotalPressureElement::p1));
    const DenseMat B(pl.jump.B);
    for (int i = 0; i < B.rows(); ++i) {
      EXPECT_DOUBLE_EQ(B.row(i).sum(), 0.0);
      EXPECT_DOUBLE_EQ(B.row(i).cwiseAbs().sum(), 2.0);
    }
    const DenseMat BBD = B * DenseMat(pl.jump.B_D).transpose();
    EXPECT_LT((BBD - DenseMat::Identity(B.rows(), B.rows())).norm(), 1e-14);
  }
}

TEST(Transfer, RestrictionIdentities) {
  for (auto primal : {PrimalVariant::vertex, PrimalVariant::vertex_edge}) {
    test::Pipeline pl(checker_config(primal, TotalPressureElement::p1));
    const RestrictionSet& r = pl.r;
    const int nxi = pl.dc.xi.n_interface(), np = pl.dc.p.n_interface();
    EXPECT_LT((DenseMat(r.R_xi.transpose() * r.R_xi_D) - DenseMat::Identity(nxi, nxi)).norm(), 1e-14);
    EXPECT_LT((DenseMat(r.R_p.transpose() * r.R_p_D) - DenseMat::Identity(np, np)).norm(), 1e-14);
    EXPECT_LT((DenseMat(r.R_p_tilde.transpose() * r.R_p_tilde_D) - DenseMat::Identity(np, np)).norm(),
              1e-14);
    EXPECT_LT((DenseMat(r.T_p * r.T_p) - DenseMat::Identity(np, np)).norm(), 1e-14);
    // averaging operators are projections
    const DenseMat Ex(r.averaging_xi()), Ep(r.averaging_p());
    EXPECT_LT((Ex * Ex - Ex).norm(), 1e-13);
    EXPECT_LT((Ep * Ep - Ep).norm(), 1e-13);
    EXPECT_EQ(r.n_q_tilde(), r.n_p_primal + static_cast<int>(r.R_p_gamma_delta.rows()));
  }
}
