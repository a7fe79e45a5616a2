#pragma once

#include <cstdint>
#include <vector>

#include "buzano/linalg.hpp"

namespace buzano {

/// Minimizer of a distance-to-a-line problem (gamma_0 or beta_0).
struct GammaResult {
  Complex minimizer;
  double distance = 0.0;
  int iterations = 0;
};

/// Extreme point of the numerical range in direction `angle`.
struct RangePoint {
  double angle = 0.0;
  Complex value;   ///< <T u, u>
  Vector witness;  ///< unit u
};

/// w(T) = max over theta of lambda_max((e^{i theta} T + e^{-i theta} T*) / 2).
/// Evaluated on a 512-point angle grid, then the best three local maxima are
/// refined by golden section down to tol.opt_tol in theta.
double numerical_radius(const ComplexMatrix& t, const Tolerances& tol = {});

/// The angle at which numerical_radius attains its maximum, alongside it.
struct RadiusWitness {
  double value = 0.0;
  double angle = 0.0;
};
RadiusWitness numerical_radius_witness(const ComplexMatrix& t, const Tolerances& tol = {});

/// k >= 3 support points of W(T), at angles 2 pi j / k.
std::vector<RangePoint> range_boundary(const ComplexMatrix& t, int k, const Tolerances& tol = {});

/// min over gamma of ||A - gamma B||, searched in |gamma| <= radius.
GammaResult distance_to_multiples(const ComplexMatrix& a, const ComplexMatrix& b, double radius,
                                  const Tolerances& tol = {});

/// c(T): minimizer of ||gamma T - I||; dist(I, C T) as the distance.
GammaResult center_of_mass(const ComplexMatrix& t, const Tolerances& tol = {});

/// beta_0 minimizing ||T - beta I||; dist(T, C I) as the distance.
GammaResult dist_to_scalars(const ComplexMatrix& t, const Tolerances& tol = {});

/// M_T(A) = sup over unit x of ||A x - (<Ax, Tx> / ||Tx||^2) T x||, found by
/// projected steepest ascent from `restarts` random starts plus a warm start
/// at the top right singular vector of A - gamma_0 T. Requires m(T) > rank_tol.
double paul_functional(const ComplexMatrix& a, const ComplexMatrix& t, int restarts = 32,
                       std::uint64_t seed = 0, const Tolerances& tol = {});

/// I is Birkhoff-James orthogonal to B: min over gamma of ||I + gamma B|| >= 1 - slack.
bool is_bj_orthogonal(const ComplexMatrix& b, double slack, const Tolerances& tol = {});

}  // namespace buzano
