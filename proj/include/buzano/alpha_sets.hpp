#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "buzano/functionals.hpp"
#include "buzano/linalg.hpp"

namespace buzano {

/// Result of testing ||alpha T - I|| <= 1.
struct AlphaCertificate {
  Complex alpha;
  double defect = 0.0;
  bool member = false;
  /// Unit vector with ||(alpha T - I) w|| = defect; only set for non-members.
  std::optional<Vector> witness;
};

/// ||alpha T - I||. Defined for every alpha, including 0.
double defect(const ComplexMatrix& t, Complex alpha);

/// Members are those with defect <= 1 + check_tol, so the boundary counts as
/// inside. Throws PreconditionError for alpha = 0.
AlphaCertificate membership(const ComplexMatrix& t, Complex alpha, const Tolerances& tol = {});

/// Minimizer of ||gamma T - I|| (the center of mass).
GammaResult optimal_alpha(const ComplexMatrix& t, const Tolerances& tol = {});

enum class AlphaRegionKind { positive_interval, rank_one_disk, generic_unknown };

std::string_view to_string(AlphaRegionKind kind);

/// Known part of { alpha : T in A_alpha } for structured T.
///   positive_interval: parameters (0, 2/||T||), the real alphas 0 < alpha <= 2/||T||.
///   rank_one_disk:     parameters (c, r) with c = r = 1/||h||^2 for T = h (x) h,
///                      the disk |alpha - c| <= r.
///   generic_unknown:   no parameters.
struct AlphaRegion {
  AlphaRegionKind kind = AlphaRegionKind::generic_unknown;
  std::vector<double> parameters;

  /// Whether alpha lies in the region. Real-interval regions only hold real alphas.
  bool contains(Complex alpha, double margin = 0.0) const;
};

/// Positivity is checked first (Hermitian residual and lambda_min); positive
/// matrices of numerical rank one get the disk, other positive ones the interval.
AlphaRegion alpha_region(const ComplexMatrix& t, const Tolerances& tol = {});

/// For Re(T) >= s I with s > 0: certifies T^{-1} in A_{2s}. Throws
/// PreconditionError when s <= 0, when lambda_min(Re T) < s - check_tol, or
/// when T is numerically singular.
AlphaCertificate accretive_inverse_membership(const ComplexMatrix& t, double s,
                                              const Tolerances& tol = {});

struct InverseAlpha {
  ComplexMatrix u;  ///< unitary
  Complex alpha;
  /// ||alpha T^{-1} - U*||, strictly below 1.
  double defect = 0.0;
};

/// With T^{-1} = W |T^{-1}| (W unitary): U* = W and
/// alpha = 2 / (sigma_max + sigma_min) of |T^{-1}|. Throws PreconditionError
/// when T is numerically singular.
InverseAlpha unitary_alpha_for_inverse(const ComplexMatrix& t, const Tolerances& tol = {});

/// tr(|T|^2 P) - |tr(T P)|^2, the variance of T in the state P.
double state_variance(const ComplexMatrix& t, const ComplexMatrix& p);

}  // namespace buzano
