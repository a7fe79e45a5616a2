#include "buzano/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace buzano {

namespace {

void require_same_size(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.size() << " vs " << b.size() << ")";
    throw DimensionError(os.str());
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + describe_shape(a) + " vs " +
                         describe_shape(b));
  }
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (!a.is_square()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " + describe_shape(a));
  }
}

// Real symmetric tridiagonal matrix: diagonal d, off-diagonal magnitudes e.
struct Tridiagonal {
  std::vector<double> d;
  std::vector<double> e;
};

// Householder reduction of a Hermitian matrix. The complex off-diagonal
// entries are replaced by their moduli, which is a diagonal unitary similarity.
Tridiagonal tridiagonalize(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  // Split real and imaginary parts so the inner loops stay in real arithmetic.
  std::vector<double> ar(n * n), ai(n * n);
  {
    const auto src = h.data();
    for (std::size_t i = 0; i < n * n; ++i) {
      ar[i] = src[i].real();
      ai[i] = src[i].imag();
    }
  }

  Tridiagonal out;
  out.d.resize(n);
  out.e.assign(n > 0 ? n - 1 : 0, 0.0);

  std::vector<double> vr(n), vi(n), pr(n), pi(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t off = k + 1;
    const std::size_t m = n - off;
    double xnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t idx = (off + i) * n + k;
      xnorm2 += ar[idx] * ar[idx] + ai[idx] * ai[idx];
    }
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm == 0.0) {
      out.e[k] = 0.0;
      continue;
    }
    const double x0r = ar[off * n + k];
    const double x0i = ai[off * n + k];
    const double ax0 = std::hypot(x0r, x0i);
    const double phr = ax0 > 0.0 ? x0r / ax0 : 1.0;
    const double phi = ax0 > 0.0 ? x0i / ax0 : 0.0;

    // v = x - alpha e_1 with alpha = -phase * ||x||.
    for (std::size_t i = 0; i < m; ++i) {
      vr[i] = ar[(off + i) * n + k];
      vi[i] = ai[(off + i) * n + k];
    }
    vr[0] += phr * xnorm;
    vi[0] += phi * xnorm;
    double vnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) vnorm2 += vr[i] * vr[i] + vi[i] * vi[i];
    const double vinv = 1.0 / std::sqrt(vnorm2);
    for (std::size_t i = 0; i < m; ++i) {
      vr[i] *= vinv;
      vi[i] *= vinv;
    }

    // p = B v on the trailing block, K = v* p (real for Hermitian B).
    double kappa = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double* rr = &ar[(off + i) * n + off];
      const double* ri = &ai[(off + i) * n + off];
      double sr = 0.0, si = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        sr += rr[j] * vr[j] - ri[j] * vi[j];
        si += rr[j] * vi[j] + ri[j] * vr[j];
      }
      pr[i] = sr;
      pi[i] = si;
      kappa += vr[i] * sr + vi[i] * si;
    }
    for (std::size_t i = 0; i < m; ++i) {
      pr[i] -= kappa * vr[i];
      pi[i] -= kappa * vi[i];
    }

    // B <- B - 2 v p* - 2 p v*
    for (std::size_t i = 0; i < m; ++i) {
      double* rr = &ar[(off + i) * n + off];
      double* ri = &ai[(off + i) * n + off];
      const double a = 2.0 * vr[i], b = 2.0 * vi[i], c = 2.0 * pr[i], d = 2.0 * pi[i];
      for (std::size_t j = 0; j < m; ++j) {
        rr[j] -= a * pr[j] + b * pi[j] + c * vr[j] + d * vi[j];
        ri[j] -= b * pr[j] - a * pi[j] + d * vr[j] - c * vi[j];
      }
    }
    out.e[k] = xnorm;
  }
  for (std::size_t i = 0; i < n; ++i) out.d[i] = ar[i * n + i];
  if (n >= 2) out.e[n - 2] = std::hypot(ar[(n - 1) * n + n - 2], ai[(n - 1) * n + n - 2]);
  return out;
}

// Number of eigenvalues strictly below x (Sturm sequence).
std::size_t count_below(const Tridiagonal& t, double x, double pivmin) {
  const std::size_t n = t.d.size();
  std::size_t count = 0;
  double q = t.d[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    q = t.d[i] - x - t.e[i - 1] * t.e[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (0-based) by bisection.
double kth_eigenvalue(const Tridiagonal& t, std::size_t k) {
  const std::size_t n = t.d.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double emax2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? t.e[i - 1] : 0.0) + (i + 1 < n ? t.e[i] : 0.0);
    lo = std::min(lo, t.d[i] - r);
    hi = std::max(hi, t.d[i] + r);
    if (i + 1 < n) emax2 = std::max(emax2, t.e[i] * t.e[i]);
  }
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax2);
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(std::abs(lo), std::abs(hi));
  lo -= 2.0 * eps * scale + pivmin;
  hi += 2.0 * eps * scale + pivmin;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + pivmin) break;
    if (count_below(t, mid, pivmin) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// All eigenvalues (unsorted) by implicit QL with Wilkinson shifts.
// Returns false if some eigenvalue fails to converge.
bool tridiagonal_eigenvalues(Tridiagonal t, std::vector<double>& out) {
  const int n = static_cast<int>(t.d.size());
  std::vector<double>& d = t.d;
  std::vector<double>& e = t.e;
  e.resize(static_cast<std::size_t>(n), 0.0);
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) return false;
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::sqrt(g * g + 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      for (; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::sqrt(f * f + g * g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (r == 0.0 && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  out = std::move(d);
  return true;
}

// Index of the first component whose modulus is not negligible.
std::size_t leading_index(const ComplexMatrix& v, std::size_t col) {
  double big = 0.0;
  for (std::size_t i = 0; i < v.rows(); ++i) big = std::max(big, std::abs(v(i, col)));
  for (std::size_t i = 0; i < v.rows(); ++i) {
    if (std::abs(v(i, col)) > 1e-8 * big) return i;
  }
  return 0;
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Returns the
// residual norm before normalization.
double orthonormalize_against(Vector& v, std::span<const Vector> basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& b : basis) {
      const Complex c = inner(v, b);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
  }
  const double r = norm(v);
  if (r > 0.0) v *= Complex(1.0 / r, 0.0);
  return r;
}

}  // namespace

void Tolerances::validate() const {
  if (!(eig_tol > 0.0) || !(rank_tol > 0.0) || !(opt_tol > 0.0) || !(check_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be strictly positive");
  }
}

// ---------------------------------------------------------------- Vector

Vector Vector::basis(std::size_t n, std::size_t k) {
  Vector v(n);
  v[k] = 1.0;
  return v;
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(*this, other, "vector add");
  for (std::size_t i = 0; i < size(); ++i) data_[i] += other[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(*this, other, "vector subtract");
  for (std::size_t i = 0; i < size(); ++i) data_[i] -= other[i];
  return *this;
}

Vector& Vector::operator*=(Complex c) {
  for (auto& x : data_) x *= c;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(Complex c, Vector v) { return v *= c; }

Complex inner(const Vector& x, const Vector& y) {
  require_same_size(x, y, "inner");
  Complex s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

double norm(const Vector& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

Vector normalized(const Vector& x) {
  const double n = norm(x);
  if (n == 0.0) return x;
  return Complex(1.0 / n, 0.0) * x;
}

// --------------------------------------------------------- ComplexMatrix

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ > 0 ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<Complex> d) {
  return diagonal(std::span<const Complex>(d.begin(), d.size()));
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const Vector> cols) {
  if (cols.empty()) return {};
  const std::size_t n = cols.front().size();
  ComplexMatrix m(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != n) throw DimensionError("from_columns: ragged columns");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vector ComplexMatrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void ComplexMatrix::set_col(std::size_t j, const Vector& v) {
  if (v.size() != rows_) throw DimensionError("set_col: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex c) {
  for (auto& x : data_) x *= c;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex c, ComplexMatrix a) { return a *= c; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matrix product: " + describe_shape(a) + " * " + describe_shape(b));
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vector operator*(const ComplexMatrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector product: length mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

ComplexMatrix gram(const ComplexMatrix& t) {
  const std::size_t n = t.cols();
  ComplexMatrix g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < t.rows(); ++k) s += std::conj(t(k, i)) * t(k, j);
      g(i, j) = s;
      g(j, i) = std::conj(s);
    }
    g(i, i) = g(i, i).real();
  }
  return g;
}

ComplexMatrix hermitian_part(const ComplexMatrix& t) {
  require_square(t, "hermitian_part");
  const std::size_t n = t.dim();
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (t(i, j) + std::conj(t(j, i)));
  return h;
}

ComplexMatrix skew_part(const ComplexMatrix& t) {
  require_square(t, "skew_part");
  const std::size_t n = t.dim();
  ComplexMatrix h(n);
  const Complex half_over_i(0.0, -0.5);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = half_over_i * (t(i, j) - std::conj(t(j, i)));
  return h;
}

double frobenius_norm(const ComplexMatrix& t) {
  double s = 0.0;
  for (const auto& x : t.data()) s += std::norm(x);
  return std::sqrt(s);
}

double max_abs(const ComplexMatrix& t) {
  double m = 0.0;
  for (const auto& x : t.data()) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const ComplexMatrix& t) {
  return std::all_of(t.data().begin(), t.data().end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool is_hermitian(const ComplexMatrix& t, double tol) {
  if (!t.is_square()) return false;
  const double scale = std::max(1.0, max_abs(t));
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = i; j < t.dim(); ++j)
      if (std::abs(t(i, j) - std::conj(t(j, i))) > tol * scale) return false;
  return true;
}

Complex trace(const ComplexMatrix& t) {
  require_square(t, "trace");
  Complex s = 0.0;
  for (std::size_t i = 0; i < t.dim(); ++i) s += t(i, i);
  return s;
}

ComplexMatrix rank_one(const Vector& x, const Vector& y) {
  require_same_size(x, y, "rank_one");
  const std::size_t n = x.size();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = x[i] * std::conj(y[j]);
  return m;
}

EigenRange hermitian_eig_range(const ComplexMatrix& h) {
  require_square(h, "hermitian_eig_range");
  const std::size_t n = h.dim();
  if (n == 0) return {0.0, 0.0};
  if (n == 1) return {h(0, 0).real(), h(0, 0).real()};
  const Tridiagonal t = tridiagonalize(h);
  std::vector<double> values;
  if (tridiagonal_eigenvalues(t, values)) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
  }
  return {kth_eigenvalue(t, 0), kth_eigenvalue(t, n - 1)};
}

double op_norm(const ComplexMatrix& t) {
  if (t.rows() == 0 || t.cols() == 0) return 0.0;
  if (t.rows() == 1 && t.cols() == 1) return std::abs(t(0, 0));
  const ComplexMatrix g = t.cols() <= t.rows() ? gram(t) : gram(t.adjoint());
  return std::sqrt(std::max(0.0, hermitian_eig_range(g).max));
}

double min_modulus(const ComplexMatrix& t) {
  require_square(t, "min_modulus");
  const std::size_t n = t.dim();
  if (n == 0) return 0.0;
  if (n == 1) return std::abs(t(0, 0));
  // Hermitian dilation [[0, T], [T*, 0]] has eigenvalues +-sigma_j; the n-th
  // smallest is sigma_min. Working on the dilation keeps absolute accuracy
  // near machine precision for tiny singular values.
  ComplexMatrix d(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d(i, n + j) = t(i, j);
      d(n + j, i) = std::conj(t(i, j));
    }
  }
  const Tridiagonal tri = tridiagonalize(d);
  return std::max(0.0, kth_eigenvalue(tri, n));
}

HermEig herm_eig(const ComplexMatrix& h, const Tolerances& tol) {
  require_square(h, "herm_eig");
  if (!is_hermitian(h, tol.check_tol)) throw PreconditionError("herm_eig: input is not Hermitian");
  const std::size_t n = h.dim();
  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = frobenius_norm(a);
  if (scale > 0.0) {
    for (int sweep = 0; sweep < 100; ++sweep) {
      double off = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) off += std::norm(a(i, j));
      if (std::sqrt(off) < tol.eig_tol * scale) break;

      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const Complex apq = a(p, q);
          const double mag = std::abs(apq);
          if (mag == 0.0) continue;
          const Complex phase = std::conj(apq) / mag;  // e^{-i phi}
          const double app = a(p, p).real();
          const double aqq = a(q, q).real();
          const double theta = (aqq - app) / (2.0 * mag);
          double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;
          // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] acting on (p, q).
          const Complex gpp = c, gpq = s, gqp = -s * phase, gqq = c * phase;

          for (std::size_t r = 0; r < n; ++r) {
            const Complex arp = a(r, p), arq = a(r, q);
            a(r, p) = arp * gpp + arq * gqp;
            a(r, q) = arp * gpq + arq * gqq;
          }
          for (std::size_t r = 0; r < n; ++r) {
            const Complex apr = a(p, r), aqr = a(q, r);
            a(p, r) = std::conj(gpp) * apr + std::conj(gqp) * aqr;
            a(q, r) = std::conj(gpq) * apr + std::conj(gqq) * aqr;
          }
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          a(p, p) = a(p, p).real();
          a(q, q) = a(q, q).real();
          for (std::size_t r = 0; r < n; ++r) {
            const Complex vrp = v(r, p), vrq = v(r, q);
            v(r, p) = vrp * gpp + vrq * gqp;
            v(r, q) = vrp * gpq + vrq * gqq;
          }
        }
      }
    }
  }

  // Phase convention: first non-negligible component real positive.
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lead = leading_index(v, k);
    const Complex z = v(lead, k);
    const double az = std::abs(z);
    if (az == 0.0) continue;
    const Complex rot = std::conj(z) / az;
    for (std::size_t i = 0; i < n; ++i) v(i, k) *= rot;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> lead(n);
  for (std::size_t k = 0; k < n; ++k) lead[k] = leading_index(v, k);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double li = a(i, i).real(), lj = a(j, j).real();
    if (li != lj) return li > lj;
    return lead[i] < lead[j];
  });

  HermEig out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Svd svd(const ComplexMatrix& t, const Tolerances& tol) {
  require_square(t, "svd");
  const std::size_t n = t.dim();
  const HermEig e = herm_eig(gram(t), tol);

  // sigma_j = ||T w_j|| is more accurate than sqrt(lambda_j) for small values
  // and keeps T w_j / sigma_j exactly unit.
  std::vector<Vector> tw(n);
  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) {
    tw[j] = t * e.vectors.col(j);
    sig[j] = norm(tw[j]);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sig[i] > sig[j]; });

  Svd out;
  out.sigma.resize(n);
  out.w = ComplexMatrix(n);
  out.u = ComplexMatrix(n);
  const double smax = n > 0 ? sig[order[0]] : 0.0;
  const double cutoff = tol.rank_tol * std::max(1.0, smax);

  std::vector<Vector> ucols;
  ucols.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sig[j];
    out.w.set_col(k, e.vectors.col(j));
    if (sig[j] > cutoff) {
      Vector u = Complex(1.0 / sig[j], 0.0) * tw[j];
      orthonormalize_against(u, ucols);
      ucols.push_back(std::move(u));
    }
  }
  // Complete U to a unitary with standard basis vectors.
  for (std::size_t i = 0; i < n && ucols.size() < n; ++i) {
    Vector u = Vector::basis(n, i);
    if (orthonormalize_against(u, ucols) > 1e-6) ucols.push_back(std::move(u));
  }
  for (std::size_t k = 0; k < n; ++k) out.u.set_col(k, ucols[k]);
  return out;
}

std::size_t numerical_rank(const Svd& s, const Tolerances& tol) {
  if (s.sigma.empty()) return 0;
  const double cutoff = tol.rank_tol * std::max(1.0, s.sigma.front());
  return static_cast<std::size_t>(
      std::count_if(s.sigma.begin(), s.sigma.end(), [&](double x) { return x > cutoff; }));
}

ComplexMatrix psd_sqrt(const ComplexMatrix& p, const Tolerances& tol) {
  const HermEig e = herm_eig(p, tol);
  const std::size_t n = p.dim();
  const double top = n > 0 ? std::abs(e.values.front()) : 0.0;
  if (n > 0 && e.values.back() < -tol.check_tol * std::max(1.0, top)) {
    throw PreconditionError("psd_sqrt: matrix has a negative eigenvalue");
  }
  ComplexMatrix r(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sqrt(std::max(0.0, e.values[k]));
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = s * e.vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * std::conj(e.vectors(j, k));
    }
  }
  return hermitian_part(r);
}

ComplexMatrix abs_op(const ComplexMatrix& t, const Tolerances& tol) {
  require_square(t, "abs_op");
  // From the SVD rather than sqrt(T*T): squaring would cost half the digits
  // of the small singular values.
  const Svd s = svd(t, tol);
  const std::size_t n = t.dim();
  ComplexMatrix r(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (s.sigma[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex wik = s.sigma[k] * s.w(i, k);
      for (std::size_t j = 0; j < n; ++j) r(i, j) += wik * std::conj(s.w(j, k));
    }
  }
  return hermitian_part(r);
}

ComplexMatrix inverse(const ComplexMatrix& t) {
  require_square(t, "inverse");
  const std::size_t n = t.dim();
  ComplexMatrix a = t;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  const double scale = std::max(max_abs(t), std::numeric_limits<double>::min());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best <= std::numeric_limits<double>::epsilon() * scale * 1e-4) {
      throw PreconditionError("inverse: matrix is numerically singular");
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    const Complex d = 1.0 / a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) *= d;
      inv(k, j) *= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Complex f = a(i, k);
      if (f == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

std::string describe_shape(const ComplexMatrix& t) {
  return std::to_string(t.rows()) + "x" + std::to_string(t.cols());
}

}  // namespace buzano
