#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace buzano {

using Complex = std::complex<double>;

/// Raised when operands have incompatible shapes.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when an input violates a documented precondition
/// (non-Hermitian input to an eigensolver, singular operator, ...).
struct PreconditionError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Numerical tolerances shared by every module.
///
/// eig_tol   stop threshold for Jacobi sweeps, relative to the Frobenius norm
/// rank_tol  singular values below rank_tol * max(1, sigma_max) count as zero
/// opt_tol   bracket width at which scalar searches stop
/// check_tol slack allowed when checking an inequality, relative to its scale
struct Tolerances {
  double eig_tol = 1e-12;
  double rank_tol = 1e-10;
  double opt_tol = 1e-12;
  double check_tol = 1e-9;

  void validate() const;
};

/// Dense complex column vector.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n) : data_(n) {}
  Vector(std::initializer_list<Complex> values) : data_(values) {}
  explicit Vector(std::vector<Complex> values) : data_(std::move(values)) {}

  static Vector basis(std::size_t n, std::size_t k);

  std::size_t size() const { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }

  std::span<Complex> entries() { return data_; }
  std::span<const Complex> entries() const { return data_; }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(Complex c);

  bool operator==(const Vector&) const = default;

 private:
  std::vector<Complex> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(Complex c, Vector v);

/// <x, y> = sum x_i conj(y_i): linear in x, conjugate-linear in y.
Complex inner(const Vector& x, const Vector& y);
double norm(const Vector& x);
/// Returns x / ||x||; a zero vector is returned unchanged.
Vector normalized(const Vector& x);

/// Dense row-major complex matrix. Operators are square; rectangular shapes
/// only appear internally (subspace bases).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit ComplexMatrix(std::size_t n) : ComplexMatrix(n, n) {}
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> d);
  static ComplexMatrix diagonal(std::initializer_list<Complex> d);
  /// Matrix whose columns are the given vectors.
  static ComplexMatrix from_columns(std::span<const Vector> cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  /// Dimension of a square matrix.
  std::size_t dim() const { return rows_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  Vector col(std::size_t j) const;
  void set_col(std::size_t j, const Vector& v);

  ComplexMatrix adjoint() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex c);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex c, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
Vector operator*(const ComplexMatrix& a, const Vector& x);

/// T* T, made exactly Hermitian.
ComplexMatrix gram(const ComplexMatrix& t);
/// (T + T*) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& t);
/// (T - T*) / 2i, so that T = hermitian_part(T) + i * skew_part(T).
ComplexMatrix skew_part(const ComplexMatrix& t);

double frobenius_norm(const ComplexMatrix& t);
double max_abs(const ComplexMatrix& t);
bool all_finite(const ComplexMatrix& t);
bool is_hermitian(const ComplexMatrix& t, double tol);

Complex trace(const ComplexMatrix& t);
/// x (x) y : z -> <z, y> x, with entries x_i conj(y_j).
ComplexMatrix rank_one(const Vector& x, const Vector& y);

/// Largest singular value.
double op_norm(const ComplexMatrix& t);
/// Smallest singular value; positive iff t is invertible.
double min_modulus(const ComplexMatrix& t);

/// Smallest and largest eigenvalue of a Hermitian matrix, without vectors.
/// Householder reduction to real tridiagonal form, then implicit QL with
/// Wilkinson shifts; Sturm bisection if QL does not converge.
struct EigenRange {
  double min;
  double max;
};
EigenRange hermitian_eig_range(const ComplexMatrix& h);

struct HermEig {
  std::vector<double> values;  ///< descending
  ComplexMatrix vectors;       ///< orthonormal columns, column k pairs with values[k]
};

/// Cyclic Jacobi eigensolver for a Hermitian matrix.
HermEig herm_eig(const ComplexMatrix& h, const Tolerances& tol = {});

struct Svd {
  ComplexMatrix u;
  std::vector<double> sigma;  ///< descending, nonnegative
  ComplexMatrix w;            ///< t = u * diag(sigma) * w*
};

Svd svd(const ComplexMatrix& t, const Tolerances& tol = {});

/// Number of singular values above rank_tol * max(1, sigma_max).
std::size_t numerical_rank(const Svd& s, const Tolerances& tol = {});

/// Unique positive square root of a positive semidefinite matrix.
ComplexMatrix psd_sqrt(const ComplexMatrix& p, const Tolerances& tol = {});
/// |T| = (T* T)^{1/2}
ComplexMatrix abs_op(const ComplexMatrix& t, const Tolerances& tol = {});

/// Inverse by LU with partial pivoting. Throws PreconditionError when singular.
ComplexMatrix inverse(const ComplexMatrix& t);

std::string describe_shape(const ComplexMatrix& t);

}  // namespace buzano
