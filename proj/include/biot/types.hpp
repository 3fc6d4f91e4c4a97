#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace biot {

using Vec = Eigen::VectorXd;
using DenseMat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using IndexList = std::vector<int>;

/// Subdomain grid: Nx by Ny rectangular subdomains.
struct SubdomainGrid {
  int nx = 1;
  int ny = 1;
  int count() const { return nx * ny; }
};

}  // namespace biot
