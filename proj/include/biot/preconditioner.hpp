#pragma once

#include "biot/dof_classification.hpp"
#include "biot/material.hpp"
#include "biot/reduced_system.hpp"
#include "biot/subdomain_system.hpp"
#include "biot/transfer_operators.hpp"
#include "biot/types.hpp"

#include <string>

namespace biot {

enum class LagrangeVariant { dirichlet, lumped };

std::string to_string(LagrangeVariant v);
LagrangeVariant parse_lagrange_variant(const std::string& s);

/// M_xi^{-1} = R_xi,D^T blockdiag((lambda_i / mu_i) S_xi^(i))^{-1} R_xi,D with
/// S_xi^(i) = C_GG - C_GI C_II^{-1} C_IG.
class TotalPressureSolver {
 public:
  TotalPressureSolver() = default;
  TotalPressureSolver(const std::vector<SubdomainSystem>& subs, const DofClassification& dc,
                      const MaterialField& materials, const ScalingWeights& w);

  int size() const { return n_; }
  Vec apply(const Vec& x) const;
  /// Weighted assembled Schur complement sum_i R_i^T (lambda_i / mu_i) S_xi^(i) R_i.
  DenseMat assembled_schur() const;

 private:
  int n_ = 0;
  std::vector<IndexList> ids_;
  std::vector<Vec> weights_;
  std::vector<DenseMat> schur_;  // scaled local Schur complements
  std::vector<Eigen::LLT<DenseMat>> llt_;
};

/// Pressure BDDC solver M_p^{-1} = T_p R~_D^T S~^{-1} R~_D T_p, with the
/// partially assembled S~ applied by dual-block elimination and a dense primal
/// coarse correction.
class PressureBddc {
 public:
  PressureBddc() = default;
  PressureBddc(const std::vector<SubdomainSystem>& subs, const DofClassification& dc,
               const RestrictionSet& r);

  int size() const { return n_; }
  Vec apply(const Vec& x) const;
  /// S~^{-1} b on Q~ = [primal | dual slots per subdomain].
  Vec solve_partially_assembled(const Vec& b) const;
  /// Explicit S~ on Q~ (diagnostics).
  DenseMat partially_assembled() const;
  /// Assembled nodal pressure interface Schur complement sum_i R_i^T S_p^(i) R_i.
  DenseMat assembled_schur() const;

 private:
  struct Local {
    IndexList gamma_id;       // nodal continuous interface ids
    std::vector<std::pair<int, int>> edge_blocks;  // relative to the interface segment
    IndexList dual, primal, primal_id;             // relative to the interface segment
    DenseMat schur;           // nodal S_p^(i)
    DenseMat S_dd, S_dp, S_pp;  // transformed split
    Eigen::LLT<DenseMat> dd;
    DenseMat psi;             // S_dd^{-1} S_dp
  };
  int n_ = 0;
  int n_primal_ = 0;
  SpMat T_;
  SpMat Rt_D_;
  IndexList dual_offset_;
  std::vector<Local> local_;
  DenseMat coarse_;
  Eigen::LLT<DenseMat> coarse_llt_;
};

/// Lagrange multiplier block: B_D H B_D^T (dirichlet) or B_D A_DD B_D^T (lumped).
class LagrangeSolver {
 public:
  LagrangeSolver() = default;
  LagrangeSolver(const std::vector<SubdomainSystem>& subs, const DofClassification& dc,
                 const JumpOperator& jump, LagrangeVariant variant);

  int size() const { return static_cast<int>(B_D_.rows()); }
  LagrangeVariant variant() const { return variant_; }
  Vec apply(const Vec& x) const;
  /// Local operator acting on subdomain s dual slots.
  const DenseMat& local_operator(int s) const { return local_[s]; }

 private:
  LagrangeVariant variant_ = LagrangeVariant::dirichlet;
  SpMat B_D_;
  IndexList offset_;
  std::vector<DenseMat> local_;
};

/// Block-diagonal preconditioner on [xi_Gamma | p_Gamma | lambda].
class BlockPreconditioner {
 public:
  BlockPreconditioner(const ReducedOperator& op, const DofClassification& dc,
                      const MaterialField& materials, const ScalingWeights& w,
                      const RestrictionSet& r, const JumpOperator& jump, LagrangeVariant variant);

  int size() const { return layout_.total(); }
  Vec apply(const Vec& x) const;
  DenseMat explicit_matrix() const;

  const TotalPressureSolver& xi() const { return xi_; }
  const PressureBddc& p() const { return p_; }
  const LagrangeSolver& lambda() const { return lambda_; }

 private:
  InterfaceLayout layout_;
  TotalPressureSolver xi_;
  PressureBddc p_;
  LagrangeSolver lambda_;
};

/// Dense Schur complement K_GG - K_GI K_II^{-1} K_IG of a symmetric positive
/// definite matrix with the first n_interior unknowns interior.
DenseMat local_schur(const SpMat& K, int n_interior);

}  // namespace biot
