#pragma once

// Oracles used by the tests. They deliberately avoid the library's own
// eigen/optimization paths so that agreement means something.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "buzano/linalg.hpp"
#include "buzano/random.hpp"

namespace buzano::testing {

inline Rng rng_for(const char* purpose, std::uint64_t index = 0, std::uint64_t master = 20240601) {
  return Rng(SeedSpec{master, purpose, index});
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

inline double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs(a - b);
}

// Largest eigenvalue of a PSD matrix by power iteration from a fixed start.
inline double power_top(const ComplexMatrix& p, int iters = 4000) {
  const std::size_t n = p.dim();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = Complex(1.0 + 0.1 * static_cast<double>(i), 0.3 * static_cast<double>(i));
  x = normalized(x);
  double lambda = 0.0;
  for (int k = 0; k < iters; ++k) {
    Vector y = p * x;
    const double ny = norm(y);
    if (ny == 0.0) return 0.0;
    lambda = inner(y, x).real();
    x = (1.0 / ny) * y;
  }
  return lambda;
}

// ||T|| as sqrt of the top eigenvalue of T*T, by power iteration.
inline double power_norm(const ComplexMatrix& t) {
  ComplexMatrix g = t.adjoint() * t;
  return std::sqrt(std::max(0.0, power_top(g)));
}

// Largest eigenvalue of a Hermitian matrix: shift to PSD, then power iterate.
inline double power_lambda_max(const ComplexMatrix& h) {
  const double shift = frobenius_norm(h);
  return power_top(h + Complex(shift, 0.0) * ComplexMatrix::identity(h.dim()), 20000) - shift;
}

// w(T) from the support function on a dense angle grid, then local parabolic
// refinement; accurate to about 1e-7 for small dense matrices.
inline double brute_numerical_radius(const ComplexMatrix& t, int grid = 2048) {
  auto g = [&](double th) {
    const Complex e = std::polar(1.0, th);
    const ComplexMatrix h = Complex(0.5, 0.0) * (e * t + std::conj(e) * t.adjoint());
    return herm_eig(h).values.front();
  };
  double best = -1.0;
  double best_th = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double th = 2.0 * std::numbers::pi * k / grid;
    const double v = g(th);
    if (v > best) {
      best = v;
      best_th = th;
    }
  }
  // Ternary refinement on the winning cell.
  double lo = best_th - 2.0 * std::numbers::pi / grid;
  double hi = best_th + 2.0 * std::numbers::pi / grid;
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (g(m1) < g(m2)) lo = m1; else hi = m2;
  }
  return std::max(best, g(0.5 * (lo + hi)));
}

// Minimizes a function of one complex variable over |z| <= radius by nested
// uniform grids that zoom in around the best cell.
inline std::pair<Complex, double> grid_min(const std::function<double(Complex)>& f, Complex centre, double radius,
                                           int levels = 30, int points = 41) {
  Complex best = centre;
  double best_v = f(centre);
  double half = radius;
  for (int level = 0; level < levels; ++level) {
    const Complex c = best;
    for (int i = 0; i < points; ++i) {
      for (int j = 0; j < points; ++j) {
        const Complex z = c + Complex(half * (2.0 * i / (points - 1) - 1.0), half * (2.0 * j / (points - 1) - 1.0));
        const double v = f(z);
        if (v < best_v) {
          best_v = v;
          best = z;
        }
      }
    }
    half *= 0.25;
  }
  return {best, best_v};
}

inline bool is_unitary(const ComplexMatrix& u, double tol) {
  return max_abs(u.adjoint() * u - ComplexMatrix::identity(u.dim())) <= tol;
}

}  // namespace buzano::testing
