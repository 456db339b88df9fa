#include "orbitsym/numerics.hpp"

#include "test_support.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <random>

using namespace orbitsym;
using orbitsym::testing::MatrixNear;
using orbitsym::testing::rotation2;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = dist(rng);
  return m;
}

// Independent reference exponential (Pade with scaling and squaring).
Matrix eigen_expm(const Matrix& x) {
  Eigen::MatrixXd e(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) e(i, j) = x(i, j);
  const Eigen::MatrixXd r = e.exp();
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = r(i, j);
  return out;
}

}  // namespace

TEST(Matrix, RejectsNonFiniteEntries) {
  EXPECT_THROW((Matrix{{1.0, std::numeric_limits<double>::quiet_NaN()}}), std::invalid_argument);
  EXPECT_THROW(Matrix(1, 1, std::vector<double>{INFINITY}), std::invalid_argument);
  EXPECT_THROW((Matrix{{1.0, 2.0}, {3.0}}), std::invalid_argument);
}

TEST(Matrix, BasicAlgebra) {
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix b{{0, 1}, {1, 0}};
  EXPECT_EQ(a * b, (Matrix{{2, 1}, {4, 3}}));
  EXPECT_EQ(commutator(a, b), a * b - b * a);
  EXPECT_DOUBLE_EQ(a.trace(), 5.0);
  EXPECT_EQ(a.transpose(), (Matrix{{1, 3}, {2, 4}}));
  EXPECT_TRUE(MatrixNear(inverse(a) * a, Matrix::identity(2), 1e-15));
  EXPECT_NEAR(determinant(a), -2.0, 1e-14);
  EXPECT_THROW(inverse(Matrix{{1, 2}, {2, 4}}), SingularInput);
}

// --- qr_positive ---------------------------------------------------------------

TEST(QrPositive, Identity) {
  const auto [q, r] = qr_positive(Matrix::identity(2));
  EXPECT_EQ(q, Matrix::identity(2));
  EXPECT_EQ(r, Matrix::identity(2));
}

TEST(QrPositive, RotationHasTrivialR) {
  const Matrix m = rotation2(0.7);
  const auto [q, r] = qr_positive(m);
  EXPECT_TRUE(MatrixNear(q, m, 1e-15));
  EXPECT_TRUE(MatrixNear(r, Matrix::identity(2), 1e-15));
}

TEST(QrPositive, ShearByHand) {
  // Columns (1,0), (1,1): q1 = e1, r12 = 1, remainder (0,1) has norm 1.
  const auto [q, r] = qr_positive(Matrix{{1, 1}, {0, 1}});
  EXPECT_TRUE(MatrixNear(q, Matrix::identity(2), 1e-15));
  EXPECT_TRUE(MatrixNear(r, Matrix{{1, 1}, {0, 1}}, 1e-15));
}

TEST(QrPositive, NegativeDiagonalInputStillPositiveR) {
  const auto [q, r] = qr_positive(Matrix{{-2, 0}, {0, -0.5}});
  EXPECT_TRUE(MatrixNear(q, Matrix{{-1, 0}, {0, -1}}, 1e-15));
  EXPECT_TRUE(MatrixNear(r, Matrix{{2, 0}, {0, 0.5}}, 1e-15));
}

TEST(QrPositive, RejectsRankDeficient) {
  EXPECT_THROW(qr_positive(Matrix{{1, 2}, {2, 4}}), SingularInput);
  EXPECT_THROW(qr_positive(Matrix(3, 3)), SingularInput);
}

TEST(QrPositive, RandomPropertiesAndIdempotence) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const Matrix m = random_matrix(rng, n, 2.0);
    QrFactors f;
    try {
      f = qr_positive(m);
    } catch (const SingularInput&) {
      continue;
    }
    EXPECT_LE((m - f.q * f.r).frobenius_norm(), 1e-12 * m.frobenius_norm());
    EXPECT_LE((f.q.transpose() * f.q - Matrix::identity(n)).max_abs(), 1e-12);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GT(f.r(i, i), 0.0);
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(f.r(i, j), 0.0);
    }
    const auto again = qr_positive(f.q);
    EXPECT_TRUE(MatrixNear(again.q, f.q, 1e-12));
    EXPECT_TRUE(MatrixNear(again.r, Matrix::identity(n), 1e-12));
  }
}

// --- mat_exp ---------------------------------------------------------------------

TEST(MatExp, Zero) { EXPECT_EQ(mat_exp(Matrix(3, 3)), Matrix::identity(3)); }

TEST(MatExp, Diagonal) {
  const double a = 1.3;
  const std::vector<double> d{a, -a};
  const std::vector<double> e{std::exp(a), std::exp(-a)};
  EXPECT_TRUE(MatrixNear(mat_exp(Matrix::diagonal(d)), Matrix::diagonal(e), 1e-14));
}

TEST(MatExp, NilpotentSeriesTerminates) {
  EXPECT_TRUE(MatrixNear(mat_exp(Matrix::unit(2, 0, 1)), Matrix{{1, 1}, {0, 1}}, 1e-16));
}

TEST(MatExp, MatchesReferenceUpToNormTen) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 5;
    Matrix x = random_matrix(rng, n, 1.0);
    x *= (0.1 + 9.9 * (trial % 10) / 9.0) / x.frobenius_norm();
    const Matrix ref = eigen_expm(x);
    EXPECT_LE((mat_exp(x) - ref).frobenius_norm(), 1e-12 * ref.frobenius_norm())
        << "||X|| = " << x.frobenius_norm();
  }
}

TEST(MatExp, InverseAndDeterminantProperties) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 6;
    Matrix x = random_matrix(rng, n, 1.0);
    x *= 3.0 * (trial % 11) / 10.0 / x.frobenius_norm();
    EXPECT_TRUE(MatrixNear(mat_exp(x) * mat_exp(-x), Matrix::identity(n), 1e-11));
    const double det = determinant(mat_exp(x));
    EXPECT_NEAR(det / std::exp(x.trace()), 1.0, 1e-10);
  }
}

// --- solve_least_squares ------------------------------------------------------------

TEST(LeastSquares, IdentitySystem) {
  const std::vector<double> b{1.5, -2.0, 3.0};
  const auto r = solve_least_squares(Matrix::identity(3), b);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.solution[i], b[i], 1e-15);
  EXPECT_NEAR(r.residual, 0.0, 1e-15);
}

TEST(LeastSquares, ConsistentOverdetermined) {
  const std::vector<double> b{1, 1};
  const auto r = solve_least_squares(Matrix{{1}, {1}}, b, 1e-12);
  ASSERT_EQ(r.solution.size(), 1u);
  EXPECT_NEAR(r.solution[0], 1.0, 1e-15);
}

TEST(LeastSquares, InconsistentNormalEquations) {
  // A^T A = 2, A^T b = 1 -> x = 1/2; residual (1/2, -1/2) has norm sqrt(2)/2.
  const std::vector<double> b{1, 0};
  const auto r = solve_least_squares(Matrix{{1}, {1}}, b);
  EXPECT_NEAR(r.solution[0], 0.5, 1e-15);
  EXPECT_NEAR(r.residual, std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_THROW(solve_least_squares(Matrix{{1}, {1}}, b, 1e-9), NoSolution);
}

TEST(LeastSquares, MinimumNormOnRankDeficientSystem) {
  // x1 + x2 = 2 has minimum-norm solution (1, 1).
  const std::vector<double> b{2};
  const auto r = solve_least_squares(Matrix{{1, 1}}, b);
  EXPECT_NEAR(r.solution[0], 1.0, 1e-14);
  EXPECT_NEAR(r.solution[1], 1.0, 1e-14);
}

// --- central_diff -------------------------------------------------------------------

TEST(CentralDiff, PolynomialIsExact) {
  EXPECT_NEAR(central_diff([](double t) { return t * t; }, 1.0, 1e-3), 2.0, 1e-9);
}

TEST(CentralDiff, Constant) {
  EXPECT_EQ(central_diff([](double) { return 4.2; }, 0.3, 1e-3), 0.0);
}

TEST(CentralDiff, ExponentialAtZero) {
  // Truncation h^4/30 * e^{2h} ~ 3e-14, rounding ~ 3e-13.
  EXPECT_NEAR(central_diff([](double t) { return std::exp(t); }, 0.0, 1e-3), 1.0, 1e-11);
}

TEST(CentralDiff, MatrixCurve) {
  const Matrix x{{0, 1}, {-1, 0}};
  const Matrix d = central_diff([&](double t) { return mat_exp(x * t); }, 0.0, 1e-3);
  EXPECT_TRUE(MatrixNear(d, x, 1e-11));
}

TEST(SingularValues, DiagonalCase) {
  const auto s = singular_values(Matrix{{0, -3}, {2, 0}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0], 3.0, 1e-14);
  EXPECT_NEAR(s[1], 2.0, 1e-14);
}
