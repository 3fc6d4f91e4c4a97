#include "biot/subdomain_system.hpp"

#include "biot/errors.hpp"

namespace biot {

namespace {

enum Segment { seg_r = 0, seg_P = 1, seg_G = 2 };

struct Slot {
  Segment seg;
  int index;
};

SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

/// Global-to-local lookup reused across subdomains.
class LocalIndex {
 public:
  explicit LocalIndex(int n) : map_(n, -1) {}
  void bind(const IndexList& dofs) {
    for (size_t k = 0; k < dofs.size(); ++k) map_[dofs[k]] = static_cast<int>(k);
    bound_ = &dofs;
  }
  void release() {
    for (int d : *bound_) map_[d] = -1;
  }
  int operator()(int global) const { return map_[global]; }

 private:
  IndexList map_;
  const IndexList* bound_ = nullptr;
};

}  // namespace

std::vector<SubdomainSystem> build_subdomain_systems(const BlockSystem& sys,
                                                     const DofClassification& dc,
                                                     const JumpOperator& jump) {
  const int nsub = dc.num_subdomains();
  if (static_cast<int>(sys.local.size()) != nsub)
    throw DimensionMismatch("block system and classification disagree on the subdomain count");

  LocalIndex lu(sys.n_u()), lxi(sys.n_xi()), lp(sys.n_p());
  std::vector<SubdomainSystem> out(nsub);

  for (int s = 0; s < nsub; ++s) {
    const FieldSubdomainMap& mu = dc.u.sub[s];
    const FieldSubdomainMap& mx = dc.xi.sub[s];
    const FieldSubdomainMap& mp = dc.p.sub[s];
    const SubdomainContribution& loc = sys.local[s];
    const int nu = mu.size(), nx = mx.size(), np = mp.size();
    const int n = nu + nx + np;

    SubdomainSystem& ss = out[s];
    ss.index = s;
    ss.n_u_interior = mu.n_interior;
    ss.n_xi_interior = mx.n_interior;
    ss.n_p_interior = mp.n_interior;
    ss.n_u_dual = static_cast<int>(mu.dual.size());
    ss.n_u_primal = static_cast<int>(mu.primal.size());
    ss.n_xi_gamma = mx.n_interface();
    ss.n_p_gamma = mp.n_interface();
    ss.primal_id = mu.primal_id;
    ss.xi_gamma_id = mx.interface_id;
    ss.p_gamma_id = mp.interface_id;
    if (ss.n_u_dual + ss.n_u_primal != mu.n_interface())
      throw InternalError("displacement interface slots are neither dual nor primal");

    lu.bind(mu.dofs);
    lxi.bind(mx.dofs);
    lp.bind(mp.dofs);

    std::vector<Triplet> tk, ta, tc, te;
    auto local = [&](const LocalIndex& li, int global, const char* field) {
      const int k = li(global);
      if (k < 0)
        throw InternalError(std::string("element dof of field ") + field +
                            " missing from the subdomain map of subdomain " + std::to_string(s));
      return k;
    };
    for (const auto& t : loc.A) {
      const int i = local(lu, t.row(), "u"), j = local(lu, t.col(), "u");
      tk.emplace_back(i, j, t.value());
      ta.emplace_back(i, j, t.value());
    }
    for (const auto& t : loc.B) {
      const int i = nu + local(lxi, t.row(), "xi"), j = local(lu, t.col(), "u");
      tk.emplace_back(i, j, t.value());
      tk.emplace_back(j, i, t.value());
    }
    for (const auto& t : loc.C) {
      const int i = local(lxi, t.row(), "xi"), j = local(lxi, t.col(), "xi");
      tk.emplace_back(nu + i, nu + j, -t.value());
      tc.emplace_back(i, j, t.value());
    }
    for (const auto& t : loc.D) {
      const int i = nu + nx + local(lp, t.row(), "p"), j = nu + local(lxi, t.col(), "xi");
      tk.emplace_back(i, j, t.value());
      tk.emplace_back(j, i, t.value());
    }
    for (const auto& t : loc.E) {
      const int i = local(lp, t.row(), "p"), j = local(lp, t.col(), "p");
      tk.emplace_back(nu + nx + i, nu + nx + j, -t.value());
      te.emplace_back(i, j, t.value());
    }
    Vec f = Vec::Zero(n);
    for (const auto& [d, v] : loc.f) f[local(lu, d, "u")] += v;
    for (const auto& [d, v] : loc.g) f[nu + nx + local(lp, d, "p")] += v;

    lu.release();
    lxi.release();
    lp.release();

    SpMat K = from_triplets(n, n, tk);
    ss.A_u = from_triplets(nu, nu, ta);
    ss.C_xi = from_triplets(nx, nx, tc);
    ss.E_p = from_triplets(np, np, te);
    if (!mu.edge_blocks.empty()) {
      const SpMat T = edge_transform_matrix(mu.edge_blocks, n);
      K = SpMat(T * K * T);
      const SpMat Tu = edge_transform_matrix(mu.edge_blocks, nu);
      ss.A_u = SpMat(Tu * ss.A_u * Tu);
      f = T * f;
    }

    // Local field position -> (segment, index).
    std::vector<Slot> slot(n, Slot{seg_r, -1});
    for (int k = 0; k < mu.n_interior; ++k) slot[k] = {seg_r, k};
    for (int k = 0; k < mx.n_interior; ++k) slot[nu + k] = {seg_r, mu.n_interior + k};
    for (int k = 0; k < mp.n_interior; ++k)
      slot[nu + nx + k] = {seg_r, mu.n_interior + mx.n_interior + k};
    for (int k = 0; k < ss.n_u_dual; ++k) slot[mu.dual[k]] = {seg_r, ss.u_dual_offset() + k};
    for (int k = 0; k < ss.n_u_primal; ++k) slot[mu.primal[k]] = {seg_P, k};
    for (int k = 0; k < ss.n_xi_gamma; ++k) slot[nu + mx.n_interior + k] = {seg_G, k};
    for (int k = 0; k < ss.n_p_gamma; ++k)
      slot[nu + nx + mp.n_interior + k] = {seg_G, ss.n_xi_gamma + k};
    for (int k = 0; k < n; ++k)
      if (slot[k].index < 0) throw InternalError("unplaced local dof in subdomain " + std::to_string(s));

    std::vector<Triplet> rr, rP, rG, PG, GG;
    ss.K_PP = DenseMat::Zero(ss.n_u_primal, ss.n_u_primal);
    for (int c = 0; c < K.outerSize(); ++c) {
      for (SpMat::InnerIterator it(K, c); it; ++it) {
        const Slot a = slot[it.row()], b = slot[it.col()];
        const double v = it.value();
        if (a.seg == seg_r && b.seg == seg_r) rr.emplace_back(a.index, b.index, v);
        else if (a.seg == seg_r && b.seg == seg_P) rP.emplace_back(a.index, b.index, v);
        else if (a.seg == seg_r && b.seg == seg_G) rG.emplace_back(a.index, b.index, v);
        else if (a.seg == seg_P && b.seg == seg_P) ss.K_PP(a.index, b.index) += v;
        else if (a.seg == seg_P && b.seg == seg_G) PG.emplace_back(a.index, b.index, v);
        else if (a.seg == seg_G && b.seg == seg_G) GG.emplace_back(a.index, b.index, v);
      }
    }
    const int nr = ss.n_r(), nP = ss.n_u_primal, nG = ss.n_gamma();
    ss.K_rr = from_triplets(nr, nr, rr);
    ss.K_rP = from_triplets(nr, nP, rP);
    ss.K_rG = from_triplets(nr, nG, rG);
    ss.K_PG = from_triplets(nP, nG, PG);
    ss.K_GG = from_triplets(nG, nG, GG);

    ss.f_r = Vec::Zero(nr);
    ss.f_P = Vec::Zero(nP);
    for (int k = 0; k < n; ++k) {
      if (slot[k].seg == seg_r) ss.f_r[slot[k].index] = f[k];
      else if (slot[k].seg == seg_P) ss.f_P[slot[k].index] = f[k];
    }

    ss.B_delta = SpMat(jump.B.middleCols(jump.column_offset[s], ss.n_u_dual));
  }
  return out;
}

}  // namespace biot
