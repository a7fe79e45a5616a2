#pragma once

#include <span>
#include <vector>

#include "buzano/linalg.hpp"

namespace buzano {

/// Closed subspace of C^n given by an orthonormal basis.
class Subspace {
 public:
  /// Orthonormalizes an arbitrary spanning set (modified Gram-Schmidt with
  /// re-orthogonalization). Columns whose residual falls below
  /// rank_tol * max(1, largest input norm) are dropped. Throws
  /// PreconditionError if nothing survives.
  static Subspace from_spanning(std::span<const Vector> vectors, const Tolerances& tol = {});

  /// Range of an orthogonal projection (eigenvectors with eigenvalue > 1/2).
  static Subspace from_projection(const ComplexMatrix& p, const Tolerances& tol = {});

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Vector>& basis() const { return basis_; }
  /// n x p matrix with the basis as columns.
  ComplexMatrix basis_matrix() const { return ComplexMatrix::from_columns(basis_); }

 private:
  Subspace(std::size_t ambient, std::vector<Vector> basis)
      : ambient_(ambient), basis_(std::move(basis)) {}

  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;
};

/// T = V |T| with V a partial isometry and N(V) = N(T).
struct PolarParts {
  ComplexMatrix v;
  ComplexMatrix abs_t;
};

PolarParts polar(const ComplexMatrix& t, const Tolerances& tol = {});

/// P_S = B B* for an orthonormal basis B of S.
ComplexMatrix orth_projection(const Subspace& s);

struct ObliqueProjection {
  ComplexMatrix q;
  /// Smallest singular value of the concatenated basis [M N].
  double basis_min_modulus = 0.0;
  /// Set when basis_min_modulus < 1e-8 (nearly parallel subspaces).
  bool ill_conditioned = false;
};

/// Idempotent with range M and null space N. Requires dim M + dim N = n and
/// [M N] invertible; throws DimensionError / PreconditionError otherwise.
ObliqueProjection oblique_projection(const Subspace& m, const Subspace& n,
                                     const Tolerances& tol = {});

/// Cosine of the minimal (Dixmier) angle: ||P_S P_T||, in [0, 1].
double dixmier_cos(const Subspace& s, const Subspace& t);

/// arccos(dixmier_cos) clamped to [1e-12, pi/2].
double minimal_angle(const Subspace& s, const Subspace& t);

}  // namespace buzano
