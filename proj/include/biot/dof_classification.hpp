#pragma once

#include "biot/fe_spaces.hpp"
#include "biot/mesh.hpp"
#include "biot/partition.hpp"
#include "biot/types.hpp"

#include <array>
#include <string>
#include <utility>

namespace biot {

enum class PrimalVariant { vertex, vertex_edge };

std::string to_string(PrimalVariant v);
PrimalVariant parse_primal_variant(const std::string& s);

/// Dofs of one field restricted to the closure of one subdomain.
///
/// Local order is [interior | interface]. Interface positions are grouped as
/// edge blocks (one contiguous block per adjacent subdomain edge and per
/// component, nodes ascending) followed by coarse-vertex dofs. With edge
/// averages enabled each edge block is expressed in a transformed basis whose
/// last slot carries the (scaled) edge average; see edge_average_basis().
struct FieldSubdomainMap {
  IndexList dofs;          // global dofs, local order
  int n_interior = 0;
  IndexList interface_id;  // per interface slot (size dofs.size() - n_interior)
  IndexList dual;          // local positions (>= n_interior), transformed basis
  IndexList dual_id;
  IndexList primal;        // local positions, transformed basis
  IndexList primal_id;
  std::vector<std::pair<int, int>> edge_blocks;  // (first local position, length)

  int size() const { return static_cast<int>(dofs.size()); }
  int n_interface() const { return size() - n_interior; }
};

/// Interior / interface / dual / primal classification of one field.
struct FieldClassification {
  std::vector<FieldSubdomainMap> sub;
  int n_dofs = 0;
  IndexList interface_dofs;                  // global dof of continuous interface index k
  std::vector<IndexList> interface_owners;   // subdomains sharing interface index k
  std::vector<IndexList> edge_interface_ids; // per edge block: interface ids in block order
  int n_primal = 0;
  /// per dual id: (lower subdomain, local position), (higher subdomain, local position)
  std::vector<std::array<int, 4>> dual_pairs;
  bool transformed = false;  // edge blocks use the average-carrying basis

  int n_interface() const { return static_cast<int>(interface_dofs.size()); }
  int n_dual() const { return static_cast<int>(dual_pairs.size()); }
  int total_dual_slots() const;
  /// Global interface index for every global dof (-1 when interior).
  IndexList interface_index_of_dof() const;
};

struct DofClassification {
  PrimalVariant primal_variant = PrimalVariant::vertex;
  TotalPressureElement xi_element = TotalPressureElement::p1;
  FieldClassification u;
  FieldClassification xi;  // interior / interface only
  FieldClassification p;

  int num_subdomains() const { return static_cast<int>(u.sub.size()); }
};

/// Symmetric orthogonal n x n matrix Q with Q e_{n-1} = 1/sqrt(n) (1, ..., 1):
/// the last transformed coefficient of an edge block is sqrt(n) times its
/// average, and the remaining columns span average-free edge functions.
DenseMat edge_average_basis(int n);

/// Applies the per-block basis change in place (the map is its own inverse).
void apply_edge_transform(const std::vector<std::pair<int, int>>& blocks, Vec& v);
/// Sparse representation of the same map on a space of dimension n.
SpMat edge_transform_matrix(const std::vector<std::pair<int, int>>& blocks, int n);
/// Same map on a continuous interface vector, blocks given as interface-id lists.
void apply_edge_transform(const std::vector<IndexList>& blocks, Vec& v);

/// Classifies dofs of every field. Throws ConfigurationError if a subdomain
/// has neither a Dirichlet-constrained displacement node nor a primal
/// displacement dof (floating subdomain).
DofClassification classify_dofs(const SubdomainPartition& part, const StructuredMesh& mesh,
                                const FeSpaceSet& spaces, PrimalVariant variant);

}  // namespace biot
