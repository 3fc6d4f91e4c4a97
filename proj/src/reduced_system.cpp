#include "biot/reduced_system.hpp"

#include "biot/errors.hpp"

#include <cmath>
#include <random>

namespace biot {

void LocalSaddleSolver::factor(const SpMat& K, int subdomain) {
  const int n = static_cast<int>(K.rows());
  scale_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(K.coeff(i, i));
    scale_[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  ldlt_ = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
  residual_ = 0.0;
  if (n == 0) return;

  const SpMat scaled = scale_.asDiagonal() * K * scale_.asDiagonal();
  const std::string msg = "singular local saddle block in subdomain " + std::to_string(subdomain) +
                          ": insufficient primal constraints";
  ldlt_->compute(scaled);
  if (ldlt_->info() != Eigen::Success) throw SingularBlockError(msg, subdomain);
  const Vec d = ldlt_->vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  if (!(d.cwiseAbs().minCoeff() > 1e-13 * dmax)) throw SingularBlockError(msg, subdomain);

  std::mt19937_64 rng(0x5eed + static_cast<std::uint64_t>(subdomain));
  std::normal_distribution<double> normal;
  Vec b(n);
  for (int i = 0; i < n; ++i) b[i] = normal(rng);
  const Vec y = ldlt_->solve(b);
  residual_ = (scaled * y - b).norm() / b.norm();
  if (!std::isfinite(residual_) || residual_ > 1e-10) throw SingularBlockError(msg, subdomain);
}

Vec LocalSaddleSolver::solve(const Vec& b) const {
  if (b.size() != size()) throw DimensionMismatch("local saddle solve: right-hand side size");
  if (size() == 0) return Vec();
  return scale_.asDiagonal() * ldlt_->solve(Vec(scale_.asDiagonal() * b));
}

DenseMat LocalSaddleSolver::solve(const DenseMat& b) const {
  if (b.rows() != size()) throw DimensionMismatch("local saddle solve: right-hand side size");
  if (size() == 0 || b.cols() == 0) return DenseMat::Zero(b.rows(), b.cols());
  return scale_.asDiagonal() * ldlt_->solve(DenseMat(scale_.asDiagonal() * b));
}

SubdomainFactorization factor_subdomains(const std::vector<SubdomainSystem>& subs) {
  SubdomainFactorization f;
  f.local.resize(subs.size());
  for (size_t s = 0; s < subs.size(); ++s) f.local[s].factor(subs[s].K_rr, static_cast<int>(s));
  return f;
}

Vec CoarseProblem::solve(const Vec& b) const {
  if (b.size() != n_primal) throw DimensionMismatch("coarse solve: right-hand side size");
  if (n_primal == 0) return Vec();
  return llt.solve(b);
}

CoarseProblem assemble_coarse(const std::vector<SubdomainSystem>& subs,
                              const SubdomainFactorization& fact, int n_primal) {
  CoarseProblem c;
  c.n_primal = n_primal;
  c.S = DenseMat::Zero(n_primal, n_primal);
  c.phi.resize(subs.size());
  for (size_t s = 0; s < subs.size(); ++s) {
    const SubdomainSystem& ss = subs[s];
    c.phi[s] = fact.local[s].solve(DenseMat(ss.K_rP));
    const DenseMat local = ss.K_PP - DenseMat(ss.K_rP.transpose()) * c.phi[s];
    for (int a = 0; a < ss.n_u_primal; ++a)
      for (int b = 0; b < ss.n_u_primal; ++b)
        c.S(ss.primal_id[a], ss.primal_id[b]) += local(a, b);
  }
  if (n_primal == 0) return c;
  c.llt.compute(c.S);
  if (c.llt.info() != Eigen::Success)
    throw SingularBlockError("coarse primal Schur complement is singular", -1);
  return c;
}

ReducedOperator::ReducedOperator(const BlockSystem& sys, const DofClassification& dc,
                                 const JumpOperator& jump)
    : sys_(&sys), dc_(&dc) {
  layout_.n_xi = dc.xi.n_interface();
  layout_.n_p = dc.p.n_interface();
  layout_.n_lambda = jump.n_lambda();
  subs_ = build_subdomain_systems(sys, dc, jump);
  fact_ = factor_subdomains(subs_);
  coarse_ = assemble_coarse(subs_, fact_, dc.u.n_primal);
  r_offset_.assign(subs_.size() + 1, 0);
  for (size_t s = 0; s < subs_.size(); ++s) r_offset_[s + 1] = r_offset_[s] + subs_[s].n_r();
  g_gamma_.resize(layout_.n_p);
  for (int k = 0; k < layout_.n_p; ++k) g_gamma_[k] = sys.g[dc.p.interface_dofs[k]];
}

Vec ReducedOperator::gather_gamma(int s, const Vec& x) const {
  const SubdomainSystem& ss = subs_[s];
  Vec v(ss.n_gamma());
  for (int j = 0; j < ss.n_xi_gamma; ++j) v[j] = x[ss.xi_gamma_id[j]];
  for (int j = 0; j < ss.n_p_gamma; ++j) v[ss.n_xi_gamma + j] = x[layout_.n_xi + ss.p_gamma_id[j]];
  return v;
}

void ReducedOperator::scatter_gamma(int s, const Vec& v, Vec& y) const {
  const SubdomainSystem& ss = subs_[s];
  for (int j = 0; j < ss.n_xi_gamma; ++j) y[ss.xi_gamma_id[j]] += v[j];
  for (int j = 0; j < ss.n_p_gamma; ++j) y[layout_.n_xi + ss.p_gamma_id[j]] += v[ss.n_xi_gamma + j];
}

Vec ReducedOperator::btilde_transpose(const Vec& x) const {
  Vec z = Vec::Zero(atilde_size());
  const int nr = r_offset_.back();
  const Vec lambda = x.tail(layout_.n_lambda);
  for (size_t s = 0; s < subs_.size(); ++s) {
    const SubdomainSystem& ss = subs_[s];
    const Vec v = gather_gamma(static_cast<int>(s), x);
    auto zr = z.segment(r_offset_[s], ss.n_r());
    zr = ss.K_rG * v;
    zr.segment(ss.u_dual_offset(), ss.n_u_dual) += ss.B_delta.transpose() * lambda;
    const Vec zp = ss.K_PG * v;
    for (int a = 0; a < ss.n_u_primal; ++a) z[nr + ss.primal_id[a]] += zp[a];
  }
  return z;
}

void ReducedOperator::add_btilde(const Vec& w, Vec& y) const {
  const int nr = r_offset_.back();
  for (size_t s = 0; s < subs_.size(); ++s) {
    const SubdomainSystem& ss = subs_[s];
    const Vec wr = w.segment(r_offset_[s], ss.n_r());
    Vec wp(ss.n_u_primal);
    for (int a = 0; a < ss.n_u_primal; ++a) wp[a] = w[nr + ss.primal_id[a]];
    const Vec v = ss.K_rG.transpose() * wr + ss.K_PG.transpose() * wp;
    scatter_gamma(static_cast<int>(s), v, y);
    y.tail(layout_.n_lambda) += ss.B_delta * wr.segment(ss.u_dual_offset(), ss.n_u_dual);
  }
}

Vec ReducedOperator::apply_atilde_inv(const Vec& z) const {
  if (z.size() != atilde_size()) throw DimensionMismatch("apply_atilde_inv: vector size");
  Vec w(z.size());
  Vec bp = z.tail(coarse_.n_primal);
  for (size_t s = 0; s < subs_.size(); ++s) {
    const SubdomainSystem& ss = subs_[s];
    const Vec t = fact_.local[s].solve(Vec(z.segment(r_offset_[s], ss.n_r())));
    w.segment(r_offset_[s], ss.n_r()) = t;
    const Vec c = ss.K_rP.transpose() * t;
    for (int a = 0; a < ss.n_u_primal; ++a) bp[ss.primal_id[a]] -= c[a];
  }
  const Vec wp = coarse_.solve(bp);
  w.tail(coarse_.n_primal) = wp;
  for (size_t s = 0; s < subs_.size(); ++s) {
    const SubdomainSystem& ss = subs_[s];
    if (ss.n_u_primal == 0) continue;
    Vec loc(ss.n_u_primal);
    for (int a = 0; a < ss.n_u_primal; ++a) loc[a] = wp[ss.primal_id[a]];
    w.segment(r_offset_[s], ss.n_r()) -= coarse_.phi[s] * loc;
  }
  return w;
}

Vec ReducedOperator::apply(const Vec& x) const {
  if (x.size() != size()) throw DimensionMismatch("reduced operator: vector size");
  ++applies_;
  Vec y = Vec::Zero(size());
  if (size() == 0) return y;
  add_btilde(apply_atilde_inv(btilde_transpose(x)), y);
  for (size_t s = 0; s < subs_.size(); ++s) {
    const Vec v = gather_gamma(static_cast<int>(s), x);
    scatter_gamma(static_cast<int>(s), Vec(-(subs_[s].K_GG * v)), y);
  }
  return y;
}

Vec ReducedOperator::ftilde() const {
  Vec f = Vec::Zero(atilde_size());
  const int nr = r_offset_.back();
  for (size_t s = 0; s < subs_.size(); ++s) {
    const SubdomainSystem& ss = subs_[s];
    f.segment(r_offset_[s], ss.n_r()) = ss.f_r;
    for (int a = 0; a < ss.n_u_primal; ++a) f[nr + ss.primal_id[a]] += ss.f_P[a];
  }
  return f;
}

Vec ReducedOperator::rhs() const {
  Vec y = Vec::Zero(size());
  add_btilde(apply_atilde_inv(ftilde()), y);
  y.segment(layout_.p_offset(), layout_.n_p) -= g_gamma_;
  return y;
}

FieldSolution ReducedOperator::recover(const Vec& x) const {
  if (x.size() != size()) throw DimensionMismatch("recover: interface vector size");
  const Vec w = apply_atilde_inv(ftilde() - btilde_transpose(x));
  const int nr = r_offset_.back();
  const DofClassification& dc = *dc_;

  FieldSolution sol;
  sol.u = Vec::Zero(sys_->n_u());
  sol.xi = Vec::Zero(sys_->n_xi());
  sol.p = Vec::Zero(sys_->n_p());
  Vec count = Vec::Zero(sys_->n_u());
  Vec jump = Vec::Zero(layout_.n_lambda);
  double dual_norm2 = 0.0;

  for (size_t s = 0; s < subs_.size(); ++s) {
    const SubdomainSystem& ss = subs_[s];
    const FieldSubdomainMap& mu = dc.u.sub[s];
    const FieldSubdomainMap& mx = dc.xi.sub[s];
    const FieldSubdomainMap& mp = dc.p.sub[s];
    const Vec wr = w.segment(r_offset_[s], ss.n_r());

    Vec ul = Vec::Zero(mu.size());
    ul.head(ss.n_u_interior) = wr.head(ss.n_u_interior);
    const Vec wd = wr.segment(ss.u_dual_offset(), ss.n_u_dual);
    for (int k = 0; k < ss.n_u_dual; ++k) ul[mu.dual[k]] = wd[k];
    for (int a = 0; a < ss.n_u_primal; ++a) ul[mu.primal[a]] = w[nr + ss.primal_id[a]];
    apply_edge_transform(mu.edge_blocks, ul);
    for (int k = 0; k < mu.size(); ++k) {
      sol.u[mu.dofs[k]] += ul[k];
      count[mu.dofs[k]] += 1.0;
    }
    jump += ss.B_delta * wd;
    dual_norm2 += wd.squaredNorm();

    for (int k = 0; k < ss.n_xi_interior; ++k) sol.xi[mx.dofs[k]] = wr[ss.n_u_interior + k];
    for (int k = 0; k < ss.n_p_interior; ++k)
      sol.p[mp.dofs[k]] = wr[ss.n_u_interior + ss.n_xi_interior + k];
  }
  for (int i = 0; i < sol.u.size(); ++i)
    if (count[i] > 0.0) sol.u[i] /= count[i];
  for (int k = 0; k < layout_.n_xi; ++k) sol.xi[dc.xi.interface_dofs[k]] = x[k];
  for (int k = 0; k < layout_.n_p; ++k) sol.p[dc.p.interface_dofs[k]] = x[layout_.n_xi + k];
  sol.jump_residual = dual_norm2 > 0.0 ? jump.norm() / std::sqrt(dual_norm2) : 0.0;
  return sol;
}

SpMat ReducedOperator::assembled_atilde() const {
  const int nr = r_offset_.back();
  std::vector<Triplet> t;
  for (size_t s = 0; s < subs_.size(); ++s) {
    const SubdomainSystem& ss = subs_[s];
    const int o = r_offset_[s];
    for (int c = 0; c < ss.K_rr.outerSize(); ++c)
      for (SpMat::InnerIterator it(ss.K_rr, c); it; ++it)
        t.emplace_back(o + it.row(), o + it.col(), it.value());
    for (int c = 0; c < ss.K_rP.outerSize(); ++c)
      for (SpMat::InnerIterator it(ss.K_rP, c); it; ++it) {
        t.emplace_back(o + it.row(), nr + ss.primal_id[it.col()], it.value());
        t.emplace_back(nr + ss.primal_id[it.col()], o + it.row(), it.value());
      }
    for (int a = 0; a < ss.n_u_primal; ++a)
      for (int b = 0; b < ss.n_u_primal; ++b)
        if (ss.K_PP(a, b) != 0.0)
          t.emplace_back(nr + ss.primal_id[a], nr + ss.primal_id[b], ss.K_PP(a, b));
  }
  SpMat m(atilde_size(), atilde_size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat ReducedOperator::assembled_btilde() const {
  const int nr = r_offset_.back();
  std::vector<Triplet> t;
  for (size_t s = 0; s < subs_.size(); ++s) {
    const SubdomainSystem& ss = subs_[s];
    const int o = r_offset_[s];
    auto row_of = [&](int j) {
      return j < ss.n_xi_gamma ? ss.xi_gamma_id[j] : layout_.n_xi + ss.p_gamma_id[j - ss.n_xi_gamma];
    };
    for (int c = 0; c < ss.K_rG.outerSize(); ++c)
      for (SpMat::InnerIterator it(ss.K_rG, c); it; ++it)
        t.emplace_back(row_of(it.col()), o + it.row(), it.value());
    for (int c = 0; c < ss.K_PG.outerSize(); ++c)
      for (SpMat::InnerIterator it(ss.K_PG, c); it; ++it)
        t.emplace_back(row_of(it.col()), nr + ss.primal_id[it.row()], it.value());
    for (int c = 0; c < ss.B_delta.outerSize(); ++c)
      for (SpMat::InnerIterator it(ss.B_delta, c); it; ++it)
        t.emplace_back(layout_.lambda_offset() + it.row(), o + ss.u_dual_offset() + it.col(),
                       it.value());
  }
  SpMat m(size(), atilde_size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat ReducedOperator::assembled_interface_block() const {
  std::vector<Triplet> t;
  for (const SubdomainSystem& ss : subs_) {
    auto row_of = [&](int j) {
      return j < ss.n_xi_gamma ? ss.xi_gamma_id[j] : layout_.n_xi + ss.p_gamma_id[j - ss.n_xi_gamma];
    };
    for (int c = 0; c < ss.K_GG.outerSize(); ++c)
      for (SpMat::InnerIterator it(ss.K_GG, c); it; ++it)
        t.emplace_back(row_of(it.row()), row_of(it.col()), it.value());
  }
  SpMat m(size(), size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

DenseMat ReducedOperator::explicit_matrix() const {
  const int n = size();
  DenseMat g(n, n);
  Vec e = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    g.col(j) = apply(e);
    e[j] = 0.0;
  }
  return g;
}

}  // namespace biot
