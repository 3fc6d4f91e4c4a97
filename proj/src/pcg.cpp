#include "biot/pcg.hpp"

#include "biot/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <ostream>

namespace biot {

void PcgConfig::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigurationError("PCG tolerance must lie in (0, 1)");
  if (max_iter < 1) throw ConfigurationError("PCG max_iter must be at least 1");
  if (!(ritz_threshold >= 0.0 && ritz_threshold < 1.0))
    throw ConfigurationError("Ritz threshold must lie in [0, 1)");
}

Vec ritz_values(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const int k = static_cast<int>(alpha.size());
  if (k == 0) throw ConfigurationError("ritz_values: empty coefficient history");
  if (static_cast<int>(beta.size()) < k - 1)
    throw DimensionMismatch("ritz_values: beta history shorter than alpha history - 1");
  Vec diag(k), off(std::max(k - 1, 0));
  for (int j = 0; j < k; ++j) {
    diag[j] = 1.0 / alpha[j];
    if (j > 0) diag[j] += beta[j - 1] / alpha[j - 1];
    if (j + 1 < k) off[j] = std::sqrt(beta[j]) / alpha[j];
  }
  if (k == 1) return diag;
  Eigen::SelfAdjointEigenSolver<DenseMat> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

ValidMinimum valid_min(const Vec& ritz, double threshold) {
  ValidMinimum v;
  if (ritz.size() == 0) {
    v.value = std::numeric_limits<double>::quiet_NaN();
    v.warning = true;
    return v;
  }
  v.value = ritz[0];
  if (ritz.size() < 2) {
    v.warning = ritz[0] <= 0.0;
    return v;
  }
  if (ritz[0] < threshold * ritz[1]) {
    v.value = ritz[1];
    v.excluded_smallest = true;
  }
  return v;
}

PcgResult pcg(const LinearOperator& A, const LinearOperator& M, const Vec& b, const PcgConfig& cfg) {
  cfg.validate();
  PcgResult res;
  const int n = static_cast<int>(b.size());
  res.x = Vec::Zero(n);
  res.b_norm = b.norm();
  if (!std::isfinite(res.b_norm)) throw ConfigurationError("PCG right-hand side is not finite");
  res.residuals.push_back(res.b_norm);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  res.eig_min = res.eig_max = nan;
  res.valid_min.value = nan;
  if (n == 0 || res.b_norm == 0.0) {
    res.converged = true;
    return res;
  }

  Vec r = b;
  Vec z = M(r);
  double rz = r.dot(z);
  if (!(rz > 0.0)) throw SpdViolation("PCG: non-positive preconditioned residual product");
  Vec p = z;
  std::vector<Vec> rs, zs;
  std::vector<double> rzs;
  if (cfg.reorthogonalize) {
    rs.push_back(r);
    zs.push_back(z);
    rzs.push_back(rz);
  }

  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vec q = A(p);
    const double pq = p.dot(q);
    if (!(pq > 0.0)) throw SpdViolation("PCG: non-positive curvature p^T A p");
    const double a = rz / pq;
    res.x += a * p;
    r -= a * q;
    res.alpha.push_back(a);
    res.iterations = k + 1;
    const double rn = r.norm();
    res.residuals.push_back(rn);
    if (rn <= cfg.tol * res.b_norm) {
      res.converged = true;
      break;
    }
    if (cfg.reorthogonalize)
      for (size_t j = 0; j < rs.size(); ++j) r -= (r.dot(zs[j]) / rzs[j]) * rs[j];
    z = M(r);
    const double rz_new = r.dot(z);
    if (!(rz_new > 0.0)) throw SpdViolation("PCG: non-positive preconditioned residual product");
    const double beta = rz_new / rz;
    res.beta.push_back(beta);
    rz = rz_new;
    p = z + beta * p;
    if (cfg.reorthogonalize) {
      rs.push_back(r);
      zs.push_back(z);
      rzs.push_back(rz);
    }
  }

  res.ritz = ritz_values(res.alpha, res.beta);
  res.eig_min = res.ritz[0];
  res.eig_max = res.ritz[res.ritz.size() - 1];
  res.valid_min = valid_min(res.ritz, cfg.ritz_threshold);
  return res;
}

void write_residual_history(std::ostream& os, const PcgResult& r) {
  os << "iteration,residual,relative_residual\n";
  os.precision(17);
  for (size_t k = 0; k < r.residuals.size(); ++k)
    os << k << ',' << r.residuals[k] << ',' << (r.b_norm > 0 ? r.residuals[k] / r.b_norm : 0.0) << '\n';
}

}  // namespace biot
