#pragma once

#include "biot/dof_classification.hpp"
#include "biot/material.hpp"
#include "biot/partition.hpp"
#include "biot/types.hpp"

namespace biot {

/// Coefficient-weighted counting functions, stored per subdomain and per
/// interface slot of the corresponding FieldSubdomainMap (index
/// position - n_interior).
///
///   u  : mu_i / sum_j mu_j
///   xi : mu_i^{-1} / sum_j mu_j^{-1}
///   p  : kappa_i / sum_j kappa_j
struct ScalingWeights {
  std::vector<Vec> u;
  std::vector<Vec> xi;
  std::vector<Vec> p;
};

ScalingWeights build_scalings(const DofClassification& dc, const MaterialField& materials);

/// Signed Boolean jump on the dual displacement slots.
///
/// Columns index the concatenation of every subdomain's dual list
/// (column_offset[i] + k for the k-th entry of dc.u.sub[i].dual). Row d is the
/// dual id d: +1 on the lower subdomain, -1 on the higher one. The scaled
/// variant multiplies the entry of subdomain i by the neighbour's weight
/// delta_u,j, so that B B_D^T = I.
struct JumpOperator {
  SpMat B;
  SpMat B_D;
  IndexList column_offset;  // size nsub + 1

  int n_lambda() const { return static_cast<int>(B.rows()); }
  int n_dual_slots() const { return static_cast<int>(B.cols()); }
};

JumpOperator build_jump(const DofClassification& dc, const ScalingWeights& w);

/// Restriction and scaled restriction operators for the interface fields.
///
/// Space conventions (all concatenations in subdomain order):
///   xi   : W_hat_Gamma (n_xi_interface) -> W_Gamma = (+)_i W_Gamma^(i)
///   p    : Q_hat_Gamma (n_p_interface)  -> Q_Gamma = (+)_i Q_Gamma^(i)
///   Q~   : [ primal (n_p_primal) | dual slots of subdomain 0 | 1 | ... ]
/// Pressure operators touching Q~ act on the edge-transformed basis; T_p maps
/// between the nodal and transformed continuous interface vectors.
struct RestrictionSet {
  std::vector<SpMat> R_xi_i;   // W_hat_Gamma -> W_Gamma^(i)
  SpMat R_xi;                  // stacked
  SpMat R_xi_D;                // scaled
  std::vector<SpMat> R_p_i;    // Q_hat_Gamma -> Q_Gamma^(i)
  SpMat R_p;
  SpMat R_p_D;
  SpMat R_p_tilde;             // Q_hat_Gamma -> Q~
  SpMat R_p_tilde_D;
  SpMat R_p_bar;               // Q~ -> Q_Gamma
  SpMat R_p_gamma_delta;       // Q~ -> Q_Delta (dual slots)
  SpMat R_p_gamma_pi;          // Q~ -> Q_hat_Pi
  SpMat T_p;                   // nodal <-> transformed continuous interface basis
  IndexList xi_offset;         // per subdomain offsets into W_Gamma (size nsub + 1)
  IndexList p_offset;          // per subdomain offsets into Q_Gamma
  IndexList p_dual_offset;     // per subdomain offsets into the dual part of Q~

  int n_p_primal = 0;
  int n_q_tilde() const { return static_cast<int>(R_p_tilde.rows()); }

  /// E_xi,D = R_xi R_xi_D^T and E_p,D = R~ R~_D^T (averaging operators).
  SpMat averaging_xi() const;
  SpMat averaging_p() const;
};

/// Builds every operator and verifies R_xi^T R_xi_D = I, R~^T R~_D = I;
/// throws InternalError on failure.
RestrictionSet build_restrictions(const DofClassification& dc, const ScalingWeights& w);

}  // namespace biot
