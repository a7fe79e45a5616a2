#include "buzano/scalar_search.hpp"

#include <cmath>

namespace buzano {

ScalarOptimum golden_section_min(const std::function<double(double)>& f, double a, double b,
                                 double width, int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while (b - a > width && it < max_iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  if (fc < fd) return {c, fc, it};
  return {d, fd, it};
}

ScalarOptimum golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 double width, int max_iter) {
  ScalarOptimum r = golden_section_min([&](double x) { return -f(x); }, a, b, width, max_iter);
  r.value = -r.value;
  return r;
}

PlaneOptimum minimize_convex_in_box(const std::function<double(Complex)>& f, Complex center,
                                    double radius, double width) {
  int evaluations = 0;
  double best_im = center.imag();
  auto partial = [&](double re) {
    const ScalarOptimum inner = golden_section_min(
        [&](double im) { return f(Complex(re, im)); }, center.imag() - radius,
        center.imag() + radius, width);
    evaluations += inner.iterations + 2;
    best_im = inner.x;
    return inner.value;
  };
  const ScalarOptimum outer =
      golden_section_min(partial, center.real() - radius, center.real() + radius, width);
  // Re-run the inner search at the reported real part so (z, value) agree.
  const double value = partial(outer.x);
  PlaneOptimum out{Complex(outer.x, best_im), value, evaluations};
  // The box center is often the exact answer (degenerate directions); keep it
  // when the search did not improve on it.
  const double at_center = f(center);
  ++out.iterations;
  if (at_center <= out.value) {
    out.z = center;
    out.value = at_center;
  }
  return out;
}

}  // namespace buzano
