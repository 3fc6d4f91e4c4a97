#pragma once

#include "biot/boundary.hpp"
#include "biot/fe_spaces.hpp"
#include "biot/material.hpp"
#include "biot/mesh.hpp"
#include "biot/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace biot {

/// Constant body force f = (fx, fy) and constant source g.
struct LoadSpec {
  double fx = 0.0;
  double fy = -1.0;
  double g = 1.0;

  static LoadSpec zero() { return {0.0, 0.0, 0.0}; }
};

using EntryList = std::vector<std::pair<int, double>>;

/// Unassembled contributions of the elements of one subdomain, in global dof
/// numbering. Summing over subdomains reproduces the global blocks exactly.
struct SubdomainContribution {
  std::vector<Triplet> A, B, C, D, E;
  EntryList f, g;
};

/// Assembled three-field system
///
///   [ A  B^T  0  ] [u ]   [f]
///   [ B  -C  D^T ] [xi] = [0]
///   [ 0   D  -E  ] [p ]   [g]
///
/// with B of size n_xi x n_u and D of size n_p x n_xi.
struct BlockSystem {
  FeSpaceSet spaces;
  SpMat A, B, C, D, E;
  Vec f, g;
  std::vector<SubdomainContribution> local;

  int n_u() const { return spaces.n_u; }
  int n_xi() const { return spaces.n_xi; }
  int n_p() const { return spaces.n_p; }
  int total_dofs() const { return spaces.total(); }

  SpMat full_matrix() const;
  Vec full_rhs() const;
};

struct AssemblyOptions {
  /// Permit an empty pressure/displacement Dirichlet part (diagnostic assemblies only).
  bool allow_empty_dirichlet = false;
};

BlockSystem assemble_blocks(const StructuredMesh& mesh, const FeSpaceSet& spaces,
                            const MaterialField& materials, const BoundarySpec& bc,
                            const LoadSpec& load, const AssemblyOptions& options = {});

SpMat sum_triplets(const std::vector<Triplet>& t, int rows, int cols);

/// Coordinate text dump: one "row col value" line per stored entry.
void write_coordinate(std::ostream& os, const SpMat& m);

struct SaddleInequalityReport {
  int trials = 0;
  /// min over trials of [eta q]^T [C -D^T; -D E] [eta q] / ((3 - sqrt5)/2 (eta^T C eta + q^T E q))
  double min_ratio = 0.0;
  int violations = 0;
  bool holds() const { return violations == 0; }
};

SaddleInequalityReport check_saddle_inequalities(const BlockSystem& sys, int trials,
                                                 std::uint64_t seed = 20240611);

/// Smallest nonzero discrete inf-sup value of the Stokes pair: sqrt of the
/// smallest nonzero eigenvalue of B A^{-1} B^T v = beta^2 M_xi v, with M_xi the
/// unweighted total-pressure mass matrix. Dense; intended for small meshes.
double discrete_inf_sup(const BlockSystem& sys, const MaterialField& materials);

}  // namespace biot
