#include "biot/preconditioner.hpp"

#include "biot/errors.hpp"

#include <Eigen/SparseCholesky>

namespace biot {

std::string to_string(LagrangeVariant v) { return v == LagrangeVariant::dirichlet ? "dirichlet" : "lumped"; }

LagrangeVariant parse_lagrange_variant(const std::string& s) {
  if (s == "dirichlet") return LagrangeVariant::dirichlet;
  if (s == "lumped") return LagrangeVariant::lumped;
  throw ConfigurationError("unknown Lagrange preconditioner '" + s + "' (expected dirichlet|lumped)");
}

DenseMat local_schur(const SpMat& K, int n_interior) {
  const int n = static_cast<int>(K.rows());
  const int ng = n - n_interior;
  const DenseMat cols = DenseMat(K.middleCols(n_interior, ng));
  DenseMat s = cols.bottomRows(ng);
  if (n_interior == 0) return s;
  const SpMat kii = SpMat(K.topLeftCorner(n_interior, n_interior));
  Eigen::SimplicialLLT<SpMat> llt(kii);
  if (llt.info() != Eigen::Success)
    throw InternalError("interior block of a local Schur complement is not positive definite");
  const DenseMat kig = cols.topRows(n_interior);
  s -= kig.transpose() * llt.solve(kig);
  return 0.5 * (s + s.transpose());
}

namespace {

DenseMat transform_dense(const std::vector<std::pair<int, int>>& blocks, const DenseMat& m) {
  if (blocks.empty()) return m;
  const SpMat t = edge_transform_matrix(blocks, static_cast<int>(m.rows()));
  return t * m * t;
}

DenseMat pick(const DenseMat& m, const IndexList& rows, const IndexList& cols) {
  DenseMat out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

}  // namespace

TotalPressureSolver::TotalPressureSolver(const std::vector<SubdomainSystem>& subs,
                                         const DofClassification& dc,
                                         const MaterialField& materials, const ScalingWeights& w)
    : n_(dc.xi.n_interface()) {
  for (size_t s = 0; s < subs.size(); ++s) {
    const FieldSubdomainMap& m = dc.xi.sub[s];
    const double scale = materials[static_cast<int>(s)].lambda / materials[static_cast<int>(s)].mu;
    ids_.push_back(m.interface_id);
    weights_.push_back(w.xi[s]);
    schur_.push_back(scale * local_schur(subs[s].C_xi, m.n_interior));
    llt_.emplace_back(schur_.back());
    if (m.n_interface() > 0 && llt_.back().info() != Eigen::Success)
      throw InternalError("total pressure Schur complement of subdomain " + std::to_string(s) +
                          " is not positive definite");
  }
}

Vec TotalPressureSolver::apply(const Vec& x) const {
  if (x.size() != n_) throw DimensionMismatch("total pressure preconditioner: vector size");
  Vec y = Vec::Zero(n_);
  for (size_t s = 0; s < ids_.size(); ++s) {
    const IndexList& ids = ids_[s];
    if (ids.empty()) continue;
    Vec v(ids.size());
    for (size_t j = 0; j < ids.size(); ++j) v[j] = weights_[s][j] * x[ids[j]];
    v = llt_[s].solve(v);
    for (size_t j = 0; j < ids.size(); ++j) y[ids[j]] += weights_[s][j] * v[j];
  }
  return y;
}

DenseMat TotalPressureSolver::assembled_schur() const {
  DenseMat m = DenseMat::Zero(n_, n_);
  for (size_t s = 0; s < ids_.size(); ++s)
    for (size_t a = 0; a < ids_[s].size(); ++a)
      for (size_t b = 0; b < ids_[s].size(); ++b) m(ids_[s][a], ids_[s][b]) += schur_[s](a, b);
  return m;
}

PressureBddc::PressureBddc(const std::vector<SubdomainSystem>& subs, const DofClassification& dc,
                           const RestrictionSet& r)
    : n_(dc.p.n_interface()), n_primal_(r.n_p_primal), T_(r.T_p), Rt_D_(r.R_p_tilde_D),
      dual_offset_(r.p_dual_offset) {
  coarse_ = DenseMat::Zero(n_primal_, n_primal_);
  local_.resize(subs.size());
  for (size_t s = 0; s < subs.size(); ++s) {
    const FieldSubdomainMap& m = dc.p.sub[s];
    Local& l = local_[s];
    l.gamma_id = m.interface_id;
    for (const auto& [start, len] : m.edge_blocks) l.edge_blocks.emplace_back(start - m.n_interior, len);
    for (int pos : m.dual) l.dual.push_back(pos - m.n_interior);
    for (int pos : m.primal) l.primal.push_back(pos - m.n_interior);
    l.primal_id = m.primal_id;
    l.schur = local_schur(subs[s].E_p, m.n_interior);
    const DenseMat st = transform_dense(l.edge_blocks, l.schur);
    l.S_dd = pick(st, l.dual, l.dual);
    l.S_dp = pick(st, l.dual, l.primal);
    l.S_pp = pick(st, l.primal, l.primal);
    if (!l.dual.empty()) {
      l.dd.compute(l.S_dd);
      if (l.dd.info() != Eigen::Success)
        throw SingularBlockError("singular dual pressure block in subdomain " + std::to_string(s) +
                                     ": insufficient primal pressure constraints",
                                 static_cast<int>(s));
      l.psi = l.dd.solve(l.S_dp);
    } else {
      l.psi = DenseMat::Zero(0, l.primal.size());
    }
    const DenseMat sc = l.S_pp - l.S_dp.transpose() * l.psi;
    for (size_t a = 0; a < l.primal.size(); ++a)
      for (size_t b = 0; b < l.primal.size(); ++b) coarse_(l.primal_id[a], l.primal_id[b]) += sc(a, b);
  }
  if (n_primal_ > 0) {
    coarse_llt_.compute(coarse_);
    if (coarse_llt_.info() != Eigen::Success)
      throw SingularBlockError("pressure coarse problem is singular", -1);
  }
}

Vec PressureBddc::solve_partially_assembled(const Vec& b) const {
  const int nq = n_primal_ + dual_offset_.back();
  if (b.size() != nq) throw DimensionMismatch("partially assembled pressure solve: vector size");
  Vec y(nq);
  Vec bp = b.head(n_primal_);
  for (size_t s = 0; s < local_.size(); ++s) {
    const Local& l = local_[s];
    if (l.dual.empty()) continue;
    const Vec c = l.psi.transpose() * b.segment(n_primal_ + dual_offset_[s], l.dual.size());
    for (size_t a = 0; a < l.primal.size(); ++a) bp[l.primal_id[a]] -= c[a];
  }
  const Vec yp = n_primal_ > 0 ? Vec(coarse_llt_.solve(bp)) : Vec();
  y.head(n_primal_) = yp;
  for (size_t s = 0; s < local_.size(); ++s) {
    const Local& l = local_[s];
    if (l.dual.empty()) continue;
    Vec loc(l.primal.size());
    for (size_t a = 0; a < l.primal.size(); ++a) loc[a] = yp[l.primal_id[a]];
    y.segment(n_primal_ + dual_offset_[s], l.dual.size()) =
        l.dd.solve(Vec(b.segment(n_primal_ + dual_offset_[s], l.dual.size()))) - l.psi * loc;
  }
  return y;
}

Vec PressureBddc::apply(const Vec& x) const {
  if (x.size() != n_) throw DimensionMismatch("pressure preconditioner: vector size");
  if (n_ == 0) return Vec();
  const Vec xt = T_ * x;
  const Vec y = solve_partially_assembled(Rt_D_ * xt);
  return T_ * Vec(Rt_D_.transpose() * y);
}

DenseMat PressureBddc::partially_assembled() const {
  const int nq = n_primal_ + dual_offset_.back();
  DenseMat m = DenseMat::Zero(nq, nq);
  for (size_t s = 0; s < local_.size(); ++s) {
    const Local& l = local_[s];
    const DenseMat st = transform_dense(l.edge_blocks, l.schur);
    IndexList q(st.rows(), -1);
    for (size_t k = 0; k < l.dual.size(); ++k) q[l.dual[k]] = n_primal_ + dual_offset_[s] + static_cast<int>(k);
    for (size_t a = 0; a < l.primal.size(); ++a) q[l.primal[a]] = l.primal_id[a];
    for (int i = 0; i < st.rows(); ++i)
      for (int j = 0; j < st.cols(); ++j) m(q[i], q[j]) += st(i, j);
  }
  return m;
}

DenseMat PressureBddc::assembled_schur() const {
  DenseMat m = DenseMat::Zero(n_, n_);
  for (const Local& l : local_)
    for (size_t a = 0; a < l.gamma_id.size(); ++a)
      for (size_t b = 0; b < l.gamma_id.size(); ++b) m(l.gamma_id[a], l.gamma_id[b]) += l.schur(a, b);
  return m;
}

LagrangeSolver::LagrangeSolver(const std::vector<SubdomainSystem>& subs, const DofClassification& dc,
                               const JumpOperator& jump, LagrangeVariant variant)
    : variant_(variant), B_D_(jump.B_D), offset_(jump.column_offset) {
  for (size_t s = 0; s < subs.size(); ++s) {
    const FieldSubdomainMap& m = dc.u.sub[s];
    const int ni = m.n_interior, nd = static_cast<int>(m.dual.size());
    IndexList place(m.size(), -1);
    for (int k = 0; k < ni; ++k) place[k] = k;
    for (int k = 0; k < nd; ++k) place[m.dual[k]] = ni + k;
    std::vector<Triplet> t;
    const SpMat& a = subs[s].A_u;
    for (int c = 0; c < a.outerSize(); ++c)
      for (SpMat::InnerIterator it(a, c); it; ++it)
        if (place[it.row()] >= 0 && place[it.col()] >= 0)
          t.emplace_back(place[it.row()], place[it.col()], it.value());
    SpMat k(ni + nd, ni + nd);
    k.setFromTriplets(t.begin(), t.end());
    if (variant == LagrangeVariant::dirichlet) {
      local_.push_back(local_schur(k, ni));
    } else {
      local_.push_back(DenseMat(k.bottomRightCorner(nd, nd)));
    }
  }
}

Vec LagrangeSolver::apply(const Vec& x) const {
  if (x.size() != size()) throw DimensionMismatch("Lagrange preconditioner: vector size");
  Vec t = B_D_.transpose() * x;
  for (size_t s = 0; s < local_.size(); ++s) {
    const int n = static_cast<int>(local_[s].rows());
    if (n == 0) continue;
    t.segment(offset_[s], n) = local_[s] * t.segment(offset_[s], n);
  }
  return B_D_ * t;
}

BlockPreconditioner::BlockPreconditioner(const ReducedOperator& op, const DofClassification& dc,
                                         const MaterialField& materials, const ScalingWeights& w,
                                         const RestrictionSet& r, const JumpOperator& jump,
                                         LagrangeVariant variant)
    : layout_(op.layout()),
      xi_(op.subdomains(), dc, materials, w),
      p_(op.subdomains(), dc, r),
      lambda_(op.subdomains(), dc, jump, variant) {}

Vec BlockPreconditioner::apply(const Vec& x) const {
  if (x.size() != size()) throw DimensionMismatch("block preconditioner: vector size");
  Vec y(size());
  y.head(layout_.n_xi) = xi_.apply(x.head(layout_.n_xi));
  y.segment(layout_.p_offset(), layout_.n_p) = p_.apply(x.segment(layout_.p_offset(), layout_.n_p));
  y.tail(layout_.n_lambda) = lambda_.apply(x.tail(layout_.n_lambda));
  return y;
}

DenseMat BlockPreconditioner::explicit_matrix() const {
  const int n = size();
  DenseMat m(n, n);
  Vec e = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    m.col(j) = apply(e);
    e[j] = 0.0;
  }
  return m;
}

}  // namespace biot
