#pragma once

#include <functional>

#include "buzano/linalg.hpp"

namespace buzano {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search for a minimum of a unimodal function on [a, b].
/// Stops once the bracket is narrower than `width`.
ScalarOptimum golden_section_min(const std::function<double(double)>& f, double a, double b,
                                 double width, int max_iter = 400);

/// Same search, maximizing.
ScalarOptimum golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 double width, int max_iter = 400);

struct PlaneOptimum {
  Complex z;
  double value = 0.0;
  int iterations = 0;
};

/// Minimizes a convex function of one complex variable over the square box
/// |Re z - Re c| <= r, |Im z - Im c| <= r. The real part is searched by
/// golden section over the partial minimum in the imaginary direction, which
/// is again convex, so both one-dimensional searches are unimodal.
PlaneOptimum minimize_convex_in_box(const std::function<double(Complex)>& f, Complex center,
                                    double radius, double width);

}  // namespace buzano
