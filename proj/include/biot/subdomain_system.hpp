#pragma once

#include "biot/assembly.hpp"
#include "biot/dof_classification.hpp"
#include "biot/transfer_operators.hpp"
#include "biot/types.hpp"

namespace biot {

/// Local saddle-point blocks of one subdomain.
///
/// Local unknowns are split into
///   r     = (u_I, xi_I, p_I, u_Delta)   eliminated locally
///   Pi    = u_Pi                        primal displacement, globally assembled
///   Gamma = (xi_Gamma, p_Gamma)         continuous interface unknowns
/// Displacement interface unknowns live in the edge-transformed basis of
/// FieldSubdomainMap. Blocks follow the sign pattern of the full system, so
/// K_GG carries -C, D and -E entries.
struct SubdomainSystem {
  int index = 0;
  int n_u_interior = 0, n_xi_interior = 0, n_p_interior = 0;
  int n_u_dual = 0, n_u_primal = 0;
  int n_xi_gamma = 0, n_p_gamma = 0;

  SpMat K_rr, K_rP, K_rG, K_PG, K_GG;
  DenseMat K_PP;
  Vec f_r, f_P;

  /// Global jump restricted to this subdomain's dual slots (n_lambda x n_u_dual).
  SpMat B_delta;

  /// Per-field local operators in local field order (u transformed).
  SpMat A_u, C_xi, E_p;

  IndexList primal_id;      // per local primal slot
  IndexList xi_gamma_id;    // continuous interface index per local xi_Gamma slot
  IndexList p_gamma_id;

  int n_r() const { return n_u_interior + n_xi_interior + n_p_interior + n_u_dual; }
  int n_gamma() const { return n_xi_gamma + n_p_gamma; }
  int u_dual_offset() const { return n_u_interior + n_xi_interior + n_p_interior; }
};

std::vector<SubdomainSystem> build_subdomain_systems(const BlockSystem& sys,
                                                     const DofClassification& dc,
                                                     const JumpOperator& jump);

}  // namespace biot
