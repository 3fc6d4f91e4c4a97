#include "biot/oracle.hpp"

#include "biot/errors.hpp"

#include <cmath>

namespace biot {

FieldSolution dense_solve(const BlockSystem& sys, int limit) {
  const int n = sys.total_dofs();
  if (n > limit)
    throw ConfigurationError("dense oracle refused: " + std::to_string(n) + " dofs exceed the limit of " +
                             std::to_string(limit));
  const SpMat k = sys.full_matrix();
  Vec s(n);
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(k.coeff(i, i));
    s[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  const DenseMat scaled = s.asDiagonal() * DenseMat(k) * s.asDiagonal();
  const Vec y = scaled.partialPivLu().solve(Vec(s.asDiagonal() * sys.full_rhs()));
  const Vec x = s.asDiagonal() * y;
  FieldSolution out;
  out.u = x.head(sys.n_u());
  out.xi = x.segment(sys.n_u(), sys.n_xi());
  out.p = x.tail(sys.n_p());
  return out;
}

double relative_error(const Vec& a, const Vec& ref) {
  if (a.size() != ref.size()) throw DimensionMismatch("relative_error: size mismatch");
  const double d = (a - ref).norm();
  const double r = ref.norm();
  if (r == 0.0) return d;
  return d / r;
}

FieldErrors compare_fields(const FieldSolution& dd, const FieldSolution& ref) {
  return {relative_error(dd.u, ref.u), relative_error(dd.xi, ref.xi), relative_error(dd.p, ref.p)};
}

}  // namespace biot
