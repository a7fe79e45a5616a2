#include "buzano/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "buzano/random.hpp"
#include "buzano/scalar_search.hpp"

namespace buzano {

namespace {

constexpr int kAngleGrid = 512;
constexpr int kRefinedPeaks = 3;

// Re(e^{i theta} T) = cos(theta) Re(T) - sin(theta) Im(T).
class RotatedHermitianPart {
 public:
  explicit RotatedHermitianPart(const ComplexMatrix& t)
      : re_(hermitian_part(t)), im_(skew_part(t)), work_(t.dim()) {}

  const ComplexMatrix& at(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto out = work_.data();
    auto re = re_.data();
    auto im = im_.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * re[i] - s * im[i];
    return work_;
  }

  double top(double theta) { return hermitian_eig_range(at(theta)).max; }

 private:
  ComplexMatrix re_;
  ComplexMatrix im_;
  ComplexMatrix work_;
};

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  if (theta < 0.0) theta += two_pi;
  return theta;
}

}  // namespace

RadiusWitness numerical_radius_witness(const ComplexMatrix& t, const Tolerances& tol) {
  if (!t.is_square()) throw DimensionError("numerical_radius: matrix must be square");
  const std::size_t n = t.dim();
  if (n == 0) return {};
  if (n == 1) return {std::abs(t(0, 0)), wrap_angle(-std::arg(t(0, 0)))};

  RotatedHermitianPart h(t);
  const double step = 2.0 * std::numbers::pi / kAngleGrid;
  std::vector<double> g(kAngleGrid);
  // lambda_max at theta + pi equals -lambda_min at theta.
  for (int k = 0; k < kAngleGrid / 2; ++k) {
    const EigenRange r = hermitian_eig_range(h.at(k * step));
    g[k] = r.max;
    g[k + kAngleGrid / 2] = -r.min;
  }

  std::vector<int> peaks;
  for (int k = 0; k < kAngleGrid; ++k) {
    const double prev = g[(k + kAngleGrid - 1) % kAngleGrid];
    const double next = g[(k + 1) % kAngleGrid];
    if (g[k] >= prev && g[k] >= next) peaks.push_back(k);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](int a, int b) { return g[a] > g[b]; });
  if (peaks.size() > kRefinedPeaks) peaks.resize(kRefinedPeaks);

  const int best_grid = static_cast<int>(std::max_element(g.begin(), g.end()) - g.begin());
  RadiusWitness best{g[best_grid], best_grid * step};
  // |g'| <= ||T||_F, so a peak this far below the best cannot overtake it.
  const double reach = frobenius_norm(t) * step;
  for (int k : peaks) {
    if (g[k] + reach < g[best_grid]) continue;
    const double centre = k * step;
    const ScalarOptimum r = golden_section_max([&](double th) { return h.top(th); },
                                               centre - step, centre + step, tol.opt_tol);
    if (r.value > best.value) best = {r.value, wrap_angle(r.x)};
  }
  best.value = std::max(best.value, 0.0);
  return best;
}

double numerical_radius(const ComplexMatrix& t, const Tolerances& tol) {
  return numerical_radius_witness(t, tol).value;
}

std::vector<RangePoint> range_boundary(const ComplexMatrix& t, int k, const Tolerances& tol) {
  if (k < 3) throw std::invalid_argument("range_boundary: need k >= 3");
  if (!t.is_square()) throw DimensionError("range_boundary: matrix must be square");
  RotatedHermitianPart h(t);
  std::vector<RangePoint> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / k;
    const HermEig e = herm_eig(h.at(theta), tol);
    Vector u = e.vectors.col(0);
    const Complex value = inner(t * u, u);
    out.push_back({theta, value, std::move(u)});
  }
  return out;
}

GammaResult distance_to_multiples(const ComplexMatrix& a, const ComplexMatrix& b, double radius,
                                  const Tolerances& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("distance_to_multiples: shape mismatch");
  }
  ComplexMatrix work(a.rows(), a.cols());
  auto objective = [&](Complex gamma) {
    auto w = work.data();
    auto av = a.data();
    auto bv = b.data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = av[i] - gamma * bv[i];
    return op_norm(work);
  };
  const PlaneOptimum opt = minimize_convex_in_box(objective, Complex(0.0, 0.0), radius, tol.opt_tol);
  return {opt.z, opt.value, opt.iterations};
}

GammaResult center_of_mass(const ComplexMatrix& t, const Tolerances& tol) {
  const double nt = op_norm(t);
  if (nt == 0.0) return {Complex(0.0, 0.0), 1.0, 0};
  // ||gamma T - I|| >= |gamma| ||T|| - 1, and the value at gamma = 0 is 1.
  return distance_to_multiples(ComplexMatrix::identity(t.dim()), t, 2.0 / nt, tol);
}

GammaResult dist_to_scalars(const ComplexMatrix& t, const Tolerances& tol) {
  const double nt = op_norm(t);
  if (nt == 0.0) return {Complex(0.0, 0.0), 0.0, 0};
  // ||T - beta I|| >= |beta| - ||T||, and the value at beta = 0 is ||T||.
  return distance_to_multiples(t, ComplexMatrix::identity(t.dim()), 2.0 * nt, tol);
}

double paul_functional(const ComplexMatrix& a, const ComplexMatrix& t, int restarts,
                       std::uint64_t seed, const Tolerances& tol) {
  if (a.rows() != t.rows() || a.cols() != t.cols() || !t.is_square()) {
    throw DimensionError("paul_functional: shape mismatch");
  }
  const double mt = min_modulus(t);
  const double nt = op_norm(t);
  if (mt <= tol.rank_tol * std::max(1.0, nt)) {
    throw PreconditionError("paul_functional: T is numerically singular");
  }
  const std::size_t n = t.dim();
  const double na = op_norm(a);
  if (na == 0.0) return 0.0;

  const ComplexMatrix a_adj = a.adjoint();
  const ComplexMatrix t_adj = t.adjoint();

  auto value2 = [&](const Vector& x) {
    const Vector ax = a * x;
    const Vector tx = t * x;
    const double q = inner(tx, tx).real();
    const double r = inner(ax, ax).real() - std::norm(inner(ax, tx)) / q;
    return r;
  };
  // Wirtinger gradient of value2 with respect to conj(x).
  auto gradient = [&](const Vector& x) {
    const Vector ax = a * x;
    const Vector tx = t * x;
    const double q = inner(tx, tx).real();
    const Complex c = inner(ax, tx);
    Vector g = a_adj * ax;
    const Vector t_ax = t_adj * ax;
    const Vector a_tx = a_adj * tx;
    const Vector t_tx = t_adj * tx;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] -= (std::conj(c) * t_ax[i] + c * a_tx[i]) / q;
      g[i] += std::norm(c) * t_tx[i] / (q * q);
    }
    // Project onto the tangent space of the unit sphere.
    const double radial = inner(g, x).real();
    for (std::size_t i = 0; i < n; ++i) g[i] -= radial * x[i];
    return g;
  };

  const double scale = std::max(1.0, na * na);
  auto ascend = [&](Vector x) {
    x = normalized(x);
    double fx = value2(x);
    double step = 1.0 / scale;
    for (int it = 0; it < 20000; ++it) {
      const Vector g = gradient(x);
      const double gn = norm(g);
      if (gn < 1e-9 * scale) break;
      step = std::min(step * 2.0, 1e3 / scale);
      auto trial = [&](double s) {
        Vector y = x;
        for (std::size_t i = 0; i < n; ++i) y[i] += s * g[i];
        return normalized(y);
      };
      bool moved = false;
      while (step > 1e-18 / scale) {
        Vector y = trial(step);
        double fy = value2(y);
        if (fy > fx) {
          // Keep halving while it pays; the first improving step can overshoot
          // across a symmetric ridge and zig-zag.
          for (;;) {
            Vector y2 = trial(0.5 * step);
            const double f2 = value2(y2);
            if (!(f2 > fy)) break;
            y = std::move(y2);
            fy = f2;
            step *= 0.5;
          }
          x = std::move(y);
          fx = fy;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    return fx;
  };

  const GammaResult line = distance_to_multiples(a, t, 2.0 * na / mt, tol);
  ComplexMatrix residual = a - line.minimizer * t;
  double best = ascend(svd(residual, tol).w.col(0));
  for (int r = 0; r < restarts; ++r) {
    Rng rng(SeedSpec{seed, "paul_functional", static_cast<std::uint64_t>(r)});
    best = std::max(best, ascend(random_unit_vector(n, rng)));
  }
  return std::sqrt(std::max(0.0, best));
}

bool is_bj_orthogonal(const ComplexMatrix& b, double slack, const Tolerances& tol) {
  return center_of_mass(b, tol).distance >= 1.0 - slack;
}

}  // namespace buzano
