#include "biot/transfer_operators.hpp"

#include "biot/errors.hpp"

#include <cmath>

namespace biot {

namespace {

template <typename Coef>
std::vector<Vec> counting_weights(const FieldClassification& fc, Coef coef) {
  std::vector<Vec> out(fc.sub.size());
  for (size_t i = 0; i < fc.sub.size(); ++i) {
    const FieldSubdomainMap& m = fc.sub[i];
    out[i].resize(m.n_interface());
    for (int j = 0; j < m.n_interface(); ++j) {
      double sum = 0.0;
      for (int s : fc.interface_owners[m.interface_id[j]]) sum += coef(s);
      out[i][j] = coef(static_cast<int>(i)) / sum;
    }
  }
  return out;
}

SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

bool is_identity(const SpMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  SpMat d = m;
  for (int i = 0; i < d.rows(); ++i) d.coeffRef(i, i) -= 1.0;
  double err = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) err = std::max(err, std::abs(it.value()));
  return err <= tol;
}

}  // namespace

ScalingWeights build_scalings(const DofClassification& dc, const MaterialField& materials) {
  ScalingWeights w;
  w.u = counting_weights(dc.u, [&](int s) { return materials[s].mu; });
  w.xi = counting_weights(dc.xi, [&](int s) { return 1.0 / materials[s].mu; });
  w.p = counting_weights(dc.p, [&](int s) { return materials[s].params.kappa; });
  return w;
}

JumpOperator build_jump(const DofClassification& dc, const ScalingWeights& w) {
  const FieldClassification& u = dc.u;
  const int nsub = static_cast<int>(u.sub.size());
  JumpOperator j;
  j.column_offset.assign(nsub + 1, 0);
  std::vector<std::vector<int>> slot_of_pos(nsub);
  for (int s = 0; s < nsub; ++s) {
    const FieldSubdomainMap& m = u.sub[s];
    j.column_offset[s + 1] = j.column_offset[s] + static_cast<int>(m.dual.size());
    slot_of_pos[s].assign(m.size(), -1);
    for (size_t k = 0; k < m.dual.size(); ++k) slot_of_pos[s][m.dual[k]] = static_cast<int>(k);
  }
  std::vector<Triplet> tb, td;
  for (int d = 0; d < u.n_dual(); ++d) {
    const auto& [sa, pa, sb, pb] = u.dual_pairs[d];
    if (sa >= sb) throw InternalError("dual pair not ordered by subdomain index");
    const int ca = j.column_offset[sa] + slot_of_pos[sa][pa];
    const int cb = j.column_offset[sb] + slot_of_pos[sb][pb];
    if (slot_of_pos[sa][pa] < 0 || slot_of_pos[sb][pb] < 0)
      throw InternalError("dual dof shared by a subdomain that does not list it as dual");
    const double wa = w.u[sa][pa - u.sub[sa].n_interior];
    const double wb = w.u[sb][pb - u.sub[sb].n_interior];
    tb.emplace_back(d, ca, 1.0);
    tb.emplace_back(d, cb, -1.0);
    td.emplace_back(d, ca, wb);
    td.emplace_back(d, cb, -wa);
  }
  j.B = from_triplets(u.n_dual(), j.column_offset[nsub], tb);
  j.B_D = from_triplets(u.n_dual(), j.column_offset[nsub], td);
  return j;
}

SpMat RestrictionSet::averaging_xi() const { return SpMat(R_xi * SpMat(R_xi_D.transpose())); }
SpMat RestrictionSet::averaging_p() const {
  return SpMat(R_p_tilde * SpMat(R_p_tilde_D.transpose()));
}

RestrictionSet build_restrictions(const DofClassification& dc, const ScalingWeights& w) {
  RestrictionSet r;
  const int nsub = dc.num_subdomains();

  // Total pressure: plain restrictions, no primal/dual split.
  {
    const FieldClassification& f = dc.xi;
    r.xi_offset.assign(nsub + 1, 0);
    std::vector<Triplet> t, td;
    for (int s = 0; s < nsub; ++s) {
      const FieldSubdomainMap& m = f.sub[s];
      std::vector<Triplet> ti;
      for (int j = 0; j < m.n_interface(); ++j) {
        ti.emplace_back(j, m.interface_id[j], 1.0);
        t.emplace_back(r.xi_offset[s] + j, m.interface_id[j], 1.0);
        td.emplace_back(r.xi_offset[s] + j, m.interface_id[j], w.xi[s][j]);
      }
      r.R_xi_i.push_back(from_triplets(m.n_interface(), f.n_interface(), ti));
      r.xi_offset[s + 1] = r.xi_offset[s] + m.n_interface();
    }
    r.R_xi = from_triplets(r.xi_offset[nsub], f.n_interface(), t);
    r.R_xi_D = from_triplets(r.xi_offset[nsub], f.n_interface(), td);
  }

  // Pressure.
  {
    const FieldClassification& f = dc.p;
    const int nG = f.n_interface();
    r.n_p_primal = f.n_primal;
    r.p_offset.assign(nsub + 1, 0);
    r.p_dual_offset.assign(nsub + 1, 0);
    for (int s = 0; s < nsub; ++s) {
      r.p_offset[s + 1] = r.p_offset[s] + f.sub[s].n_interface();
      r.p_dual_offset[s + 1] = r.p_dual_offset[s] + static_cast<int>(f.sub[s].dual.size());
    }
    const int nPi = f.n_primal;
    const int nQt = nPi + r.p_dual_offset[nsub];

    std::vector<Triplet> t, td, tt, ttd, tbar, tdelta, tpi;
    IndexList primal_col(nPi, -1);
    for (int s = 0; s < nsub; ++s) {
      const FieldSubdomainMap& m = f.sub[s];
      std::vector<Triplet> ti;
      for (int j = 0; j < m.n_interface(); ++j) {
        ti.emplace_back(j, m.interface_id[j], 1.0);
        t.emplace_back(r.p_offset[s] + j, m.interface_id[j], 1.0);
        td.emplace_back(r.p_offset[s] + j, m.interface_id[j], w.p[s][j]);
      }
      r.R_p_i.push_back(from_triplets(m.n_interface(), nG, ti));

      for (size_t k = 0; k < m.primal.size(); ++k) {
        const int j = m.primal[k] - m.n_interior;
        const int pid = m.primal_id[k];
        if (primal_col[pid] >= 0 && primal_col[pid] != m.interface_id[j])
          throw InternalError("primal pressure dof mapped to two interface slots");
        primal_col[pid] = m.interface_id[j];
        tbar.emplace_back(r.p_offset[s] + j, pid, 1.0);
      }
      for (size_t k = 0; k < m.dual.size(); ++k) {
        const int j = m.dual[k] - m.n_interior;
        const int row = nPi + r.p_dual_offset[s] + static_cast<int>(k);
        tt.emplace_back(row, m.interface_id[j], 1.0);
        ttd.emplace_back(row, m.interface_id[j], w.p[s][j]);
        tbar.emplace_back(r.p_offset[s] + j, row, 1.0);
        tdelta.emplace_back(r.p_dual_offset[s] + static_cast<int>(k), row, 1.0);
      }
    }
    for (int pid = 0; pid < nPi; ++pid) {
      if (primal_col[pid] < 0) throw InternalError("primal pressure dof owned by no subdomain");
      tt.emplace_back(pid, primal_col[pid], 1.0);
      ttd.emplace_back(pid, primal_col[pid], 1.0);
      tpi.emplace_back(pid, pid, 1.0);
    }
    r.R_p = from_triplets(r.p_offset[nsub], nG, t);
    r.R_p_D = from_triplets(r.p_offset[nsub], nG, td);
    r.R_p_tilde = from_triplets(nQt, nG, tt);
    r.R_p_tilde_D = from_triplets(nQt, nG, ttd);
    r.R_p_bar = from_triplets(r.p_offset[nsub], nQt, tbar);
    r.R_p_gamma_delta = from_triplets(r.p_dual_offset[nsub], nQt, tdelta);
    r.R_p_gamma_pi = from_triplets(nPi, nQt, tpi);

    std::vector<Triplet> tq;
    std::vector<char> in_block(nG, 0);
    for (const auto& ids : f.edge_interface_ids) {
      const DenseMat q = edge_average_basis(static_cast<int>(ids.size()));
      for (size_t a = 0; a < ids.size(); ++a) {
        in_block[ids[a]] = 1;
        for (size_t b = 0; b < ids.size(); ++b)
          if (q(a, b) != 0.0) tq.emplace_back(ids[a], ids[b], q(a, b));
      }
    }
    for (int k = 0; k < nG; ++k)
      if (!in_block[k]) tq.emplace_back(k, k, 1.0);
    r.T_p = from_triplets(nG, nG, tq);
  }

  constexpr double tol = 1e-14;
  if (!is_identity(SpMat(SpMat(r.R_xi.transpose()) * r.R_xi_D), tol))
    throw InternalError("R_xi^T R_xi_D is not the identity");
  if (!is_identity(SpMat(SpMat(r.R_p_tilde.transpose()) * r.R_p_tilde_D), tol))
    throw InternalError("R~_p^T R~_p_D is not the identity");
  return r;
}

}  // namespace biot
