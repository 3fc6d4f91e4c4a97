#pragma once

#include "biot/assembly.hpp"
#include "biot/dof_classification.hpp"
#include "biot/subdomain_system.hpp"
#include "biot/transfer_operators.hpp"
#include "biot/types.hpp"

#include <Eigen/SparseCholesky>

#include <memory>

namespace biot {

/// Sizes of the interface vector [xi_Gamma | p_Gamma | lambda_Delta].
struct InterfaceLayout {
  int n_xi = 0;
  int n_p = 0;
  int n_lambda = 0;

  int total() const { return n_xi + n_p + n_lambda; }
  int p_offset() const { return n_xi; }
  int lambda_offset() const { return n_xi + n_p; }
};

/// LDL^T factorization of a symmetric quasi-definite block after symmetric
/// diagonal scaling; refuses numerically singular blocks.
class LocalSaddleSolver {
 public:
  /// Throws SingularBlockError(subdomain) when the block is singular.
  void factor(const SpMat& K, int subdomain);
  Vec solve(const Vec& b) const;
  DenseMat solve(const DenseMat& b) const;
  int size() const { return static_cast<int>(scale_.size()); }
  /// ||K x - b|| / ||b|| for a random b, measured at factorization time.
  double check_residual() const { return residual_; }

 private:
  Vec scale_;
  std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
  double residual_ = 0.0;
};

struct SubdomainFactorization {
  std::vector<LocalSaddleSolver> local;
};

SubdomainFactorization factor_subdomains(const std::vector<SubdomainSystem>& subs);

/// Dense primal displacement Schur complement
///   S_PiPi = sum_i R_Pi^T (K_PP - K_Pr K_rr^{-1} K_rP) R_Pi.
struct CoarseProblem {
  int n_primal = 0;
  DenseMat S;
  Eigen::LLT<DenseMat> llt;
  std::vector<DenseMat> phi;  // K_rr^{-1} K_rP per subdomain

  Vec solve(const Vec& b) const;
};

CoarseProblem assemble_coarse(const std::vector<SubdomainSystem>& subs,
                              const SubdomainFactorization& fact, int n_primal);

/// Full-field solution recovered from an interface vector.
struct FieldSolution {
  Vec u, xi, p;
  /// ||B_Delta u_Delta|| / ||u_Delta|| of the recovered dual displacements
  double jump_residual = 0.0;
};

/// Matrix-free reduced operator
///   G = B~ A~^{-1} B~^T - K_GammaGamma,   rhs = B~ A~^{-1} f~ - [0; g_Gamma; 0]
/// on interface vectors [xi_Gamma | p_Gamma | lambda].
///
/// A~ is the partially assembled saddle operator on the flat layout
/// [r^(0) | r^(1) | ... | Pi], with Pi the globally numbered primal displacement
/// dofs (edge-average transformed basis).
class ReducedOperator {
 public:
  ReducedOperator(const BlockSystem& sys, const DofClassification& dc, const JumpOperator& jump);

  const InterfaceLayout& layout() const { return layout_; }
  int size() const { return layout_.total(); }
  int atilde_size() const { return r_offset_.back() + coarse_.n_primal; }
  const std::vector<SubdomainSystem>& subdomains() const { return subs_; }
  const CoarseProblem& coarse() const { return coarse_; }
  const SubdomainFactorization& factorization() const { return fact_; }

  Vec apply(const Vec& x) const;
  Vec apply_atilde_inv(const Vec& z) const;
  Vec rhs() const;
  FieldSolution recover(const Vec& x) const;

  /// Assembled A~ on the flat layout (diagnostics).
  SpMat assembled_atilde() const;
  /// Assembled B~ (interface rows x flat layout) and K_GammaGamma (diagnostics).
  SpMat assembled_btilde() const;
  SpMat assembled_interface_block() const;
  /// Flat-layout load f~.
  Vec ftilde() const;
  /// Dense G by unit-vector probing.
  DenseMat explicit_matrix() const;

  long apply_count() const { return applies_; }

 private:
  Vec gather_gamma(int s, const Vec& x) const;
  void scatter_gamma(int s, const Vec& v, Vec& y) const;
  /// y += B~ w (interface rows).
  void add_btilde(const Vec& w, Vec& y) const;
  /// z = B~^T x on the flat layout.
  Vec btilde_transpose(const Vec& x) const;

  const BlockSystem* sys_;
  const DofClassification* dc_;
  InterfaceLayout layout_;
  std::vector<SubdomainSystem> subs_;
  SubdomainFactorization fact_;
  CoarseProblem coarse_;
  IndexList r_offset_;
  Vec g_gamma_;
  mutable long applies_ = 0;
};

}  // namespace biot
