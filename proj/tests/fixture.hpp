#pragma once

#include "biot/assembly.hpp"
#include "biot/experiment.hpp"
#include "biot/mesh.hpp"
#include "biot/partition.hpp"
#include "biot/preconditioner.hpp"
#include "biot/reduced_system.hpp"
#include "biot/transfer_operators.hpp"

#include <Eigen/Eigenvalues>

#include <memory>

namespace biot::test {

/// Every stage of the solver pipeline for one configuration. Not movable:
/// the reduced operator keeps pointers into the system and classification.
struct Pipeline {
  explicit Pipeline(const ExperimentConfig& c)
      : cfg(c),
        mesh(build_mesh(c.nx, c.sub)),
        spaces(build_spaces(mesh, c.bc, c.elem)),
        mat(c.materials()),
        sys(assemble_blocks(mesh, spaces, mat, c.bc, c.load)),
        part(partition(mesh, c.sub)),
        dc(classify_dofs(part, mesh, spaces, c.primal)),
        w(build_scalings(dc, mat)),
        jump(build_jump(dc, w)),
        r(build_restrictions(dc, w)),
        op(sys, dc, jump),
        M(op, dc, mat, w, r, jump, c.lambda_pc) {}
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  ExperimentConfig cfg;
  StructuredMesh mesh;
  FeSpaceSet spaces;
  MaterialField mat;
  BlockSystem sys;
  SubdomainPartition part;
  DofClassification dc;
  ScalingWeights w;
  JumpOperator jump;
  RestrictionSet r;
  ReducedOperator op;
  BlockPreconditioner M;
};

inline ExperimentConfig small_config(int nx = 8, SubdomainGrid sub = {2, 2}) {
  ExperimentConfig c;
  c.nx = nx;
  c.sub = sub;
  return c;
}

inline DenseMat symmetrize(const DenseMat& m) { return 0.5 * (m + m.transpose()); }

inline Vec sym_eigenvalues(const DenseMat& m) {
  return Eigen::SelfAdjointEigenSolver<DenseMat>(symmetrize(m), Eigen::EigenvaluesOnly).eigenvalues();
}

/// Generalized eigenvalues of A x = t B x, B symmetric positive definite, ascending.
inline Vec generalized_eigenvalues(const DenseMat& A, const DenseMat& B) {
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMat> es(symmetrize(A), symmetrize(B),
                                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Spectrum of P G for SPD P (preconditioner action) and symmetric G, ascending.
inline Vec preconditioned_spectrum(const DenseMat& P, const DenseMat& G) {
  return generalized_eigenvalues(G, symmetrize(P).inverse());
}

/// Dense matrix of a linear map by unit-vector probing.
template <class F>
DenseMat probe(F&& f, int n) {
  DenseMat m(n, n);
  for (int j = 0; j < n; ++j) m.col(j) = f(Vec::Unit(n, j));
  return m;
}

inline double rel_asym(const DenseMat& m) {
  return (m - m.transpose()).norm() / std::max(m.norm(), 1e-300);
}

}  // namespace biot::test
