#include "buzano/alpha_sets.hpp"

#include <algorithm>
#include <cmath>

#include "buzano/decompositions.hpp"

namespace buzano {

namespace {

ComplexMatrix shifted(const ComplexMatrix& t, Complex alpha) {
  ComplexMatrix m = alpha * t;
  for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) -= 1.0;
  return m;
}

}  // namespace

double defect(const ComplexMatrix& t, Complex alpha) {
  if (!t.is_square()) throw DimensionError("defect: matrix must be square");
  return op_norm(shifted(t, alpha));
}

AlphaCertificate membership(const ComplexMatrix& t, Complex alpha, const Tolerances& tol) {
  if (alpha == Complex(0.0, 0.0)) throw PreconditionError("membership: alpha must be nonzero");
  if (!t.is_square()) throw DimensionError("membership: matrix must be square");
  const ComplexMatrix m = shifted(t, alpha);
  AlphaCertificate out;
  out.alpha = alpha;
  out.defect = op_norm(m);
  out.member = out.defect <= 1.0 + tol.check_tol;
  if (!out.member) out.witness = svd(m, tol).w.col(0);
  return out;
}

GammaResult optimal_alpha(const ComplexMatrix& t, const Tolerances& tol) {
  return center_of_mass(t, tol);
}

std::string_view to_string(AlphaRegionKind kind) {
  switch (kind) {
    case AlphaRegionKind::positive_interval: return "positive_interval";
    case AlphaRegionKind::rank_one_disk: return "rank_one_disk";
    case AlphaRegionKind::generic_unknown: return "generic_unknown";
  }
  return "generic_unknown";
}

bool AlphaRegion::contains(Complex alpha, double margin) const {
  switch (kind) {
    case AlphaRegionKind::positive_interval:
      return std::abs(alpha.imag()) <= margin && alpha.real() > parameters[0] &&
             alpha.real() <= parameters[1] + margin;
    case AlphaRegionKind::rank_one_disk:
      return std::abs(alpha - Complex(parameters[0], 0.0)) <= parameters[1] + margin;
    case AlphaRegionKind::generic_unknown:
      return false;
  }
  return false;
}

AlphaRegion alpha_region(const ComplexMatrix& t, const Tolerances& tol) {
  if (!t.is_square()) throw DimensionError("alpha_region: matrix must be square");
  AlphaRegion out;
  const double nt = op_norm(t);
  if (nt == 0.0) return out;
  const double band = tol.check_tol * std::max(1.0, nt);
  if (!is_hermitian(t, band)) return out;
  if (hermitian_eig_range(hermitian_part(t)).min < -band) return out;
  if (numerical_rank(svd(t, tol), tol) == 1) {
    // T = h (x) h with ||T|| = ||h||^2.
    out.kind = AlphaRegionKind::rank_one_disk;
    out.parameters = {1.0 / nt, 1.0 / nt};
  } else {
    out.kind = AlphaRegionKind::positive_interval;
    out.parameters = {0.0, 2.0 / nt};
  }
  return out;
}

AlphaCertificate accretive_inverse_membership(const ComplexMatrix& t, double s,
                                              const Tolerances& tol) {
  if (!(s > 0.0)) throw PreconditionError("accretive_inverse_membership: s must be positive");
  if (!t.is_square()) throw DimensionError("accretive_inverse_membership: matrix must be square");
  const double lo = hermitian_eig_range(hermitian_part(t)).min;
  if (lo < s - tol.check_tol * std::max(1.0, s)) {
    throw PreconditionError("accretive_inverse_membership: Re(T) >= s I fails");
  }
  if (min_modulus(t) <= tol.rank_tol * std::max(1.0, op_norm(t))) {
    throw PreconditionError("accretive_inverse_membership: T is numerically singular");
  }
  return membership(inverse(t), 2.0 * s, tol);
}

InverseAlpha unitary_alpha_for_inverse(const ComplexMatrix& t, const Tolerances& tol) {
  if (!t.is_square()) throw DimensionError("unitary_alpha_for_inverse: matrix must be square");
  if (t.dim() == 0 || min_modulus(t) <= tol.rank_tol * std::max(1.0, op_norm(t))) {
    throw PreconditionError("unitary_alpha_for_inverse: T is numerically singular");
  }
  const ComplexMatrix t_inv = inverse(t);
  const PolarParts p = polar(t_inv, tol);
  const Svd s = svd(p.abs_t, tol);
  const double smax = s.sigma.front();
  const double smin = s.sigma.back();
  InverseAlpha out;
  out.alpha = Complex(2.0 / (smax + smin), 0.0);
  out.u = p.v.adjoint();
  out.defect = op_norm(out.alpha * t_inv - p.v);
  return out;
}

double state_variance(const ComplexMatrix& t, const ComplexMatrix& p) {
  if (!t.is_square() || t.rows() != p.rows() || p.rows() != p.cols()) {
    throw DimensionError("state_variance: shape mismatch");
  }
  return trace(gram(t) * p).real() - std::norm(trace(t * p));
}

}  // namespace buzano
