#include "buzano/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace buzano {

Subspace Subspace::from_spanning(std::span<const Vector> vectors, const Tolerances& tol) {
  if (vectors.empty()) throw PreconditionError("subspace: no spanning vectors");
  const std::size_t n = vectors.front().size();
  if (n == 0) throw DimensionError("subspace: zero-length vectors");
  double biggest = 0.0;
  for (const Vector& v : vectors) {
    if (v.size() != n) throw DimensionError("subspace: spanning vectors differ in length");
    biggest = std::max(biggest, norm(v));
  }
  const double cutoff = tol.rank_tol * std::max(1.0, biggest);

  std::vector<Vector> basis;
  for (const Vector& raw : vectors) {
    Vector v = raw;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& b : basis) {
        const Complex c = inner(v, b);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * b[i];
      }
    }
    const double r = norm(v);
    if (r <= cutoff) continue;
    v *= Complex(1.0 / r, 0.0);
    basis.push_back(std::move(v));
    if (basis.size() == n) break;
  }
  if (basis.empty()) throw PreconditionError("subspace: spanning vectors are all (numerically) zero");
  return Subspace(n, std::move(basis));
}

Subspace Subspace::from_projection(const ComplexMatrix& p, const Tolerances& tol) {
  const HermEig e = herm_eig(p, tol);
  std::vector<Vector> cols;
  for (std::size_t k = 0; k < e.values.size(); ++k) {
    if (e.values[k] > 0.5) cols.push_back(e.vectors.col(k));
  }
  return from_spanning(cols, tol);
}

PolarParts polar(const ComplexMatrix& t, const Tolerances& tol) {
  const Svd s = svd(t, tol);
  const std::size_t n = t.dim();
  const std::size_t r = numerical_rank(s, tol);
  ComplexMatrix v(n);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex uik = s.u(i, k);
      for (std::size_t j = 0; j < n; ++j) v(i, j) += uik * std::conj(s.w(j, k));
    }
  }
  return {std::move(v), abs_op(t, tol)};
}

ComplexMatrix orth_projection(const Subspace& s) {
  const ComplexMatrix b = s.basis_matrix();
  return b * b.adjoint();
}

ObliqueProjection oblique_projection(const Subspace& m, const Subspace& nsp, const Tolerances& tol) {
  const std::size_t n = m.ambient_dim();
  if (nsp.ambient_dim() != n) throw DimensionError("oblique_projection: ambient dimensions differ");
  if (m.dim() + nsp.dim() != n) {
    throw DimensionError("oblique_projection: dim M + dim N must equal the ambient dimension");
  }
  std::vector<Vector> cols = m.basis();
  cols.insert(cols.end(), nsp.basis().begin(), nsp.basis().end());
  const ComplexMatrix b = ComplexMatrix::from_columns(cols);
  const double mm = min_modulus(b);
  if (mm <= tol.rank_tol) {
    throw PreconditionError("oblique_projection: subspaces are not complementary");
  }
  // Q [M N] = [M 0]  =>  Q = [M 0] [M N]^{-1}
  ComplexMatrix target(n);
  for (std::size_t j = 0; j < m.dim(); ++j) target.set_col(j, m.basis()[j]);
  ObliqueProjection out;
  out.q = target * inverse(b);
  out.basis_min_modulus = mm;
  out.ill_conditioned = mm < 1e-8;
  return out;
}

double dixmier_cos(const Subspace& s, const Subspace& t) {
  if (s.ambient_dim() != t.ambient_dim()) throw DimensionError("dixmier_cos: ambient dimensions differ");
  // ||P_S P_T|| = ||B_S* B_T|| for orthonormal bases.
  const ComplexMatrix cross = s.basis_matrix().adjoint() * t.basis_matrix();
  return std::clamp(op_norm(cross), 0.0, 1.0);
}

double minimal_angle(const Subspace& s, const Subspace& t) {
  return std::clamp(std::acos(dixmier_cos(s, t)), 1e-12, std::numbers::pi / 2);
}

}  // namespace buzano
