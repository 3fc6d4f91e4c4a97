#include "biot/dof_classification.hpp"

#include "biot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace biot {

std::string to_string(PrimalVariant v) {
  return v == PrimalVariant::vertex ? "vertex" : "vertex-edge";
}

PrimalVariant parse_primal_variant(const std::string& s) {
  if (s == "vertex") return PrimalVariant::vertex;
  if (s == "vertex-edge" || s == "vertex+edge") return PrimalVariant::vertex_edge;
  throw ConfigurationError("unknown primal variant '" + s + "' (expected vertex|vertex-edge)");
}

int FieldClassification::total_dual_slots() const {
  int n = 0;
  for (const auto& s : sub) n += static_cast<int>(s.dual.size());
  return n;
}

IndexList FieldClassification::interface_index_of_dof() const {
  IndexList out(n_dofs, -1);
  for (int k = 0; k < n_interface(); ++k) out[interface_dofs[k]] = k;
  return out;
}

DenseMat edge_average_basis(int n) {
  DenseMat q = DenseMat::Identity(n, n);
  if (n <= 1) return q;
  Vec v = Vec::Constant(n, -1.0 / std::sqrt(static_cast<double>(n)));
  v[n - 1] += 1.0;
  q -= 2.0 * v * v.transpose() / v.squaredNorm();
  return q;
}

void apply_edge_transform(const std::vector<std::pair<int, int>>& blocks, Vec& v) {
  for (const auto& [start, len] : blocks) {
    if (len <= 1) continue;
    const DenseMat q = edge_average_basis(len);
    v.segment(start, len) = q * v.segment(start, len);
  }
}

void apply_edge_transform(const std::vector<IndexList>& blocks, Vec& v) {
  for (const auto& ids : blocks) {
    const int len = static_cast<int>(ids.size());
    if (len <= 1) continue;
    const DenseMat q = edge_average_basis(len);
    Vec seg(len);
    for (int k = 0; k < len; ++k) seg[k] = v[ids[k]];
    seg = q * seg;
    for (int k = 0; k < len; ++k) v[ids[k]] = seg[k];
  }
}

SpMat edge_transform_matrix(const std::vector<std::pair<int, int>>& blocks, int n) {
  std::vector<char> in_block(n, 0);
  std::vector<Triplet> t;
  for (const auto& [start, len] : blocks) {
    const DenseMat q = edge_average_basis(len);
    for (int i = 0; i < len; ++i) {
      in_block[start + i] = 1;
      for (int j = 0; j < len; ++j)
        if (q(i, j) != 0.0) t.emplace_back(start + i, start + j, q(i, j));
    }
  }
  for (int i = 0; i < n; ++i)
    if (!in_block[i]) t.emplace_back(i, i, 1.0);
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

namespace {

struct NodalField {
  const GridTriangulation* grid = nullptr;
  int refinement = 1;
  int ncomp = 1;
  const IndexList* node_dof = nullptr;  // first dof of node, -1 if constrained
  bool split = false;                   // dual/primal classification
  bool edge_average = false;
};

FieldClassification classify_nodal(const SubdomainPartition& part, const NodalField& f) {
  const GridTriangulation& g = *f.grid;
  const int nsub = part.num_subdomains();
  FieldClassification fc;
  fc.sub.resize(nsub);
  fc.transformed = f.split && f.edge_average;

  std::vector<IndexList> interior_nodes(nsub), vertex_nodes(nsub);
  std::map<std::pair<int, int>, IndexList> edges;
  IndexList interface_nodes;
  IndexList node_first_if(g.num_nodes(), -1);

  int ndofs = 0;
  for (int n = 0; n < g.num_nodes(); ++n) {
    if ((*f.node_dof)[n] < 0) continue;
    ndofs += f.ncomp;
    const int ix = g.node_ix(n), iy = g.node_iy(n);
    const IndexList own = part.owners(ix, iy, f.refinement);
    if (own.size() == 1) {
      interior_nodes[own[0]].push_back(n);
      continue;
    }
    node_first_if[n] = static_cast<int>(fc.interface_dofs.size());
    for (int c = 0; c < f.ncomp; ++c) {
      fc.interface_dofs.push_back((*f.node_dof)[n] + c);
      fc.interface_owners.push_back(own);
    }
    interface_nodes.push_back(n);
    if (part.is_coarse_vertex(ix, iy, f.refinement)) {
      for (int s : own) vertex_nodes[s].push_back(n);
    } else {
      if (own.size() != 2) throw InternalError("edge node shared by more than two subdomains");
      edges[{own[0], own[1]}].push_back(n);
    }
  }
  fc.n_dofs = ndofs;

  // Primal ids: vertex dofs first (node ascending), then edge averages.
  std::map<int, int> vertex_primal;  // first interface id of vertex node -> first primal id
  std::map<std::pair<int, int>, int> edge_primal;  // (edge index, comp) -> primal id
  if (f.split) {
    for (int n : interface_nodes) {
      const int ix = g.node_ix(n), iy = g.node_iy(n);
      if (!part.is_coarse_vertex(ix, iy, f.refinement)) continue;
      vertex_primal[n] = fc.n_primal;
      fc.n_primal += f.ncomp;
    }
    if (f.edge_average) {
      int e = 0;
      for (auto it = edges.begin(); it != edges.end(); ++it, ++e)
        for (int c = 0; c < f.ncomp; ++c) edge_primal[{e, c}] = fc.n_primal++;
    }
  }

  // Local layouts; remember where each (edge, comp) block starts in each owner.
  std::map<std::tuple<int, int, int>, int> block_start;  // (edge, comp, subdomain) -> position
  for (int s = 0; s < nsub; ++s) {
    FieldSubdomainMap& m = fc.sub[s];
    for (int n : interior_nodes[s])
      for (int c = 0; c < f.ncomp; ++c) m.dofs.push_back((*f.node_dof)[n] + c);
    m.n_interior = static_cast<int>(m.dofs.size());

    int e = 0;
    for (auto it = edges.begin(); it != edges.end(); ++it, ++e) {
      const auto& [key, nodes] = *it;
      if (key.first != s && key.second != s) continue;
      for (int c = 0; c < f.ncomp; ++c) {
        const int start = static_cast<int>(m.dofs.size());
        block_start[{e, c, s}] = start;
        for (int n : nodes) {
          m.dofs.push_back((*f.node_dof)[n] + c);
          m.interface_id.push_back(node_first_if[n] + c);
        }
        const int len = static_cast<int>(nodes.size());
        if (!f.split) continue;
        if (f.edge_average) {
          m.edge_blocks.emplace_back(start, len);
          m.primal.push_back(start + len - 1);
          m.primal_id.push_back(edge_primal.at({e, c}));
        }
      }
    }
    for (int n : vertex_nodes[s]) {
      for (int c = 0; c < f.ncomp; ++c) {
        const int pos = static_cast<int>(m.dofs.size());
        m.dofs.push_back((*f.node_dof)[n] + c);
        m.interface_id.push_back(node_first_if[n] + c);
        if (f.split) {
          m.primal.push_back(pos);
          m.primal_id.push_back(vertex_primal.at(n) + c);
        }
      }
    }
  }

  // Edge blocks in continuous interface numbering, and dual pairing.
  int e = 0;
  for (auto it = edges.begin(); it != edges.end(); ++it, ++e) {
    const auto& [key, nodes] = *it;
    for (int c = 0; c < f.ncomp; ++c) {
      IndexList ids;
      for (int n : nodes) ids.push_back(node_first_if[n] + c);
      if (fc.transformed) fc.edge_interface_ids.push_back(ids);
      if (!f.split) continue;
      const int len = static_cast<int>(nodes.size());
      const int ndual = f.edge_average ? len - 1 : len;
      const int sa = key.first, sb = key.second;
      const int pa = block_start.at({e, c, sa}), pb = block_start.at({e, c, sb});
      for (int k = 0; k < ndual; ++k) {
        const int id = static_cast<int>(fc.dual_pairs.size());
        fc.dual_pairs.push_back({sa, pa + k, sb, pb + k});
        fc.sub[sa].dual.push_back(pa + k);
        fc.sub[sa].dual_id.push_back(id);
        fc.sub[sb].dual.push_back(pb + k);
        fc.sub[sb].dual_id.push_back(id);
      }
    }
  }

  // Canonical ordering of per-subdomain dual and primal lists: by position.
  auto sort_by_pos = [](IndexList& pos, IndexList& id) {
    std::vector<std::pair<int, int>> z;
    for (size_t k = 0; k < pos.size(); ++k) z.emplace_back(pos[k], id[k]);
    std::sort(z.begin(), z.end());
    for (size_t k = 0; k < z.size(); ++k) {
      pos[k] = z[k].first;
      id[k] = z[k].second;
    }
  };
  for (auto& m : fc.sub) {
    sort_by_pos(m.dual, m.dual_id);
    sort_by_pos(m.primal, m.primal_id);
  }
  return fc;
}

FieldClassification classify_p0(const StructuredMesh& mesh, const FeSpaceSet& spaces) {
  FieldClassification fc;
  const int nsub = mesh.grid.count();
  fc.sub.resize(nsub);
  for (int t = 0; t < mesh.base.num_triangles(); ++t)
    fc.sub[mesh.subdomain_of_base_triangle(t)].dofs.push_back(spaces.xi_dof[t]);
  for (auto& m : fc.sub) m.n_interior = m.size();
  fc.n_dofs = spaces.n_xi;
  return fc;
}

}  // namespace

DofClassification classify_dofs(const SubdomainPartition& part, const StructuredMesh& mesh,
                                const FeSpaceSet& spaces, PrimalVariant variant) {
  DofClassification dc;
  dc.primal_variant = variant;
  dc.xi_element = spaces.xi_element;
  const bool edges = variant == PrimalVariant::vertex_edge;

  dc.u = classify_nodal(part, {&mesh.refined, 2, 2, &spaces.u_node_dof, true, edges});
  dc.p = classify_nodal(part, {&mesh.base, 1, 1, &spaces.p_node_dof, true, edges});
  if (spaces.xi_nodal()) {
    dc.xi = classify_nodal(part, {&mesh.base, 1, 1, &spaces.xi_dof, false, false});
  } else {
    dc.xi = classify_p0(mesh, spaces);
  }

  // Floating-subdomain check: every subdomain needs a Dirichlet node or a primal dof.
  const int r = 2;
  for (int sy = 0; sy < part.grid.ny; ++sy) {
    for (int sx = 0; sx < part.grid.nx; ++sx) {
      const int s = sy * part.grid.nx + sx;
      if (!dc.u.sub[s].primal.empty()) continue;
      bool anchored = false;
      for (int iy = sy * part.cells_y * r; iy <= (sy + 1) * part.cells_y * r && !anchored; ++iy)
        for (int ix = sx * part.cells_x * r; ix <= (sx + 1) * part.cells_x * r; ++ix)
          if (spaces.u_node_dof[mesh.refined.node(ix, iy)] < 0) {
            anchored = true;
            break;
          }
      if (!anchored)
        throw ConfigurationError("subdomain " + std::to_string(s) +
                                 " is floating: no Dirichlet displacement node and no primal "
                                 "displacement constraint");
    }
  }
  return dc;
}

}  // namespace biot
