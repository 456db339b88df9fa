#pragma once

// Dense real matrix kernel used by every other part of orbitsym.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitsym {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularInput : public Error {
 public:
  using Error::Error;
};

class NoSolution : public Error {
 public:
  using Error::Error;
};

/// Dense row-major real matrix with value semantics.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Throws std::invalid_argument if a row has the wrong length or an entry
  /// is not finite.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> entries);
  /// Elementary matrix E_ij (zero-based indices).
  static Matrix unit(std::size_t n, std::size_t i, std::size_t j);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return entries_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const double> entries() const { return entries_; }

  Matrix transpose() const;
  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  std::vector<double> column(std::size_t j) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);
std::ostream& operator<<(std::ostream& os, const Matrix& m);

/// Commutator AB - BA.
Matrix commutator(const Matrix& a, const Matrix& b);

/// Inverse by Gauss-Jordan elimination with partial pivoting.
/// Throws SingularInput when a pivot vanishes relative to the matrix scale.
Matrix inverse(const Matrix& m);
double determinant(const Matrix& m);

/// max |a_ij - b_ij|.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Singular values in decreasing order.
std::vector<double> singular_values(const Matrix& m);

struct QrFactors {
  Matrix q;
  Matrix r;
};

/// QR factorization with strictly positive diagonal in R, computed by
/// modified Gram-Schmidt with one reorthogonalization pass.
/// Throws SingularInput when a pivot norm falls below
/// `singular_threshold * ||M||_F`.
QrFactors qr_positive(const Matrix& m, double singular_threshold = 1e-10);

/// exp(X) by scaling and squaring around a degree-18 Taylor polynomial.
Matrix mat_exp(const Matrix& x);

struct LeastSquaresResult {
  std::vector<double> solution;
  double residual = 0.0;  // ||A x - b||_2
};

/// Minimum-norm least-squares solution of A x = b. When `exact_tolerance`
/// is positive, throws NoSolution if the residual exceeds it.
LeastSquaresResult solve_least_squares(const Matrix& a, std::span<const double> b,
                                       double exact_tolerance = 0.0);

/// Fourth-order central difference of f at t with step h.
double central_diff(const std::function<double(double)>& f, double t, double h);

/// Entrywise fourth-order central difference of a matrix-valued curve.
Matrix central_diff(const std::function<Matrix(double)>& f, double t, double h);

}  // namespace orbitsym
