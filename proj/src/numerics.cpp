#include "orbitsym/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

namespace orbitsym {

namespace {

void require_finite(std::span<const double> entries) {
  for (double v : entries) {
    if (!std::isfinite(v)) throw std::invalid_argument("Matrix: non-finite entry");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
  require_finite(entries_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
  require_finite(entries_);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) throw std::invalid_argument("Matrix: wrong entry count");
  require_finite(entries_);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
  Matrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  require_finite(m.entries_);
  return m;
}

Matrix Matrix::unit(std::size_t n, std::size_t i, std::size_t j) {
  Matrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

double Matrix::frobenius_norm() const { return std::sqrt(dot(entries_, entries_)); }

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : entries_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("operator*: inner dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("operator*: vector length mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[" : " [");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j == 0 ? "" : ", ") << m(i, j);
    os << ']';
  }
  return os << ']';
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix inverse(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("inverse: matrix not square");
  const std::size_t n = m.rows();
  Matrix work = m;
  Matrix inv = Matrix::identity(n);
  const double scale = std::max(m.max_abs(), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    if (std::abs(work(pivot, col)) <= 1e-14 * scale) throw SingularInput("inverse: singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const double p = work(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

double determinant(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("determinant: matrix not square");
  return to_eigen(m).partialPivLu().determinant();
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

std::vector<double> singular_values(const Matrix& m) {
  if (m.empty()) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

QrFactors qr_positive(const Matrix& m, double singular_threshold) {
  if (!m.square()) throw std::invalid_argument("qr_positive: matrix not square");
  const std::size_t n = m.rows();
  const double cutoff = singular_threshold * m.frobenius_norm();

  // Columns of Q stored as rows of qt for contiguous access.
  std::vector<std::vector<double>> qt(n);
  Matrix r(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> v = m.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const double c = dot(qt[i], v);
        r(i, j) += c;
        for (std::size_t row = 0; row < n; ++row) v[row] -= c * qt[i][row];
      }
    }
    const double norm = std::sqrt(dot(v, v));
    if (!(norm > cutoff) || norm == 0.0) {
      throw SingularInput("qr_positive: rank-deficient input (pivot " + std::to_string(j) + ")");
    }
    // Norm is positive, so R's diagonal is positive without extra sign flips.
    r(j, j) = norm;
    for (double& x : v) x /= norm;
    qt[j] = std::move(v);
  }

  Matrix q(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) q(i, j) = qt[j][i];
  return {std::move(q), std::move(r)};
}

Matrix mat_exp(const Matrix& x) {
  if (!x.square()) throw std::invalid_argument("mat_exp: matrix not square");
  const std::size_t n = x.rows();
  const double norm = x.frobenius_norm();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = x * std::ldexp(1.0, -squarings);

  // Horner evaluation of sum_{k=0}^{18} A^k / k!.
  constexpr int kDegree = 18;
  Matrix result = Matrix::identity(n);
  for (int k = kDegree; k >= 1; --k) {
    result = Matrix::identity(n) + (scaled * result) * (1.0 / k);
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

LeastSquaresResult solve_least_squares(const Matrix& a, std::span<const double> b,
                                       double exact_tolerance) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve_least_squares: size mismatch");
  LeastSquaresResult out;
  if (a.cols() == 0) {
    out.residual = std::sqrt(dot(b, b));
  } else {
    const Eigen::MatrixXd am = to_eigen(a);
    Eigen::VectorXd bv(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) bv(static_cast<Eigen::Index>(i)) = b[i];
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(1e-10);
    cod.compute(am);
    const Eigen::VectorXd xv = cod.solve(bv);
    out.solution.assign(xv.data(), xv.data() + xv.size());
    out.residual = (am * xv - bv).norm();
  }
  if (exact_tolerance > 0.0 && out.residual > exact_tolerance) {
    throw NoSolution("solve_least_squares: residual " + std::to_string(out.residual) +
                     " exceeds tolerance");
  }
  return out;
}

double central_diff(const std::function<double(double)>& f, double t, double h) {
  // Paired differences cancel exactly on constants.
  return (8 * (f(t + h) - f(t - h)) - (f(t + 2 * h) - f(t - 2 * h))) / (12 * h);
}

Matrix central_diff(const std::function<Matrix(double)>& f, double t, double h) {
  Matrix d = 8.0 * (f(t + h) - f(t - h)) - (f(t + 2 * h) - f(t - 2 * h));
  return d * (1.0 / (12 * h));
}

}  // namespace orbitsym
