#include "orbitsym/symplectic.hpp"

#include "orbitsym/verification.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace orbitsym;
using orbitsym::testing::MatrixNear;

namespace {

ChamberPtr chamber(std::vector<double> h) { return make_sl(h.size())->chamber_element(h); }

Matrix conj(const Matrix& g, const Matrix& x) { return g * x * inverse(g); }

double cond(const Matrix& g) { return g.frobenius_norm() * inverse(g).frobenius_norm(); }

const std::vector<std::vector<double>> kShapes{
    {1, -1}, {1, 0, -1}, {1, 1, -2}, {2, 1, -1, -2}, {1, 1, -1, -1}};

}  // namespace

// --- kks --------------------------------------------------------------------------

TEST(Kks, HandValue) {
  // [E12 - E21, E12] = E11 - E22 = H, and killing(H, H) = 4 tr(H^2) = 8.
  const auto ch = chamber({1, -1});
  const auto x = orbit_point(Matrix::identity(2), ch);
  const Matrix zv = Matrix::unit(2, 0, 1) - Matrix::unit(2, 1, 0);
  const Matrix zw = Matrix::unit(2, 0, 1);
  EXPECT_TRUE(MatrixNear(commutator(zv, zw), ch->h(), 0.0));
  EXPECT_DOUBLE_EQ(kks(x, tangent(x, zv), tangent(x, zw)), 8.0);
  EXPECT_DOUBLE_EQ(kks(x, tangent(x, zw), tangent(x, zv)), -8.0);
}

TEST(Kks, SolvedGeneratorsGiveSameValue) {
  const auto ch = chamber({1, -1});
  const auto x = orbit_point(Matrix::identity(2), ch);
  const Matrix zv = Matrix::unit(2, 0, 1) - Matrix::unit(2, 1, 0);
  const Matrix zw = Matrix::unit(2, 0, 1);
  const TangentVector v{commutator(zv, x.point), std::nullopt};
  const TangentVector w{commutator(zw, x.point), std::nullopt};
  EXPECT_NEAR(kks(x, v, w), 8.0, 1e-12);
}

TEST(Kks, VerticalAndHorizontalPairsVanish) {
  for (const auto& h : kShapes) {
    const auto ch = chamber(h);
    const auto& model = ch->model();
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Matrix g = random_group_element(model, derive_seed(s, 1, h.size()), 0.5);
      const Matrix k = random_exp_in_span(model.k_basis(), h.size(), derive_seed(s, 2, h.size()), 1);
      const Matrix gk = g * k;
      const auto x = orbit_point(gk, ch);
      const double xs = x.point.frobenius_norm();
      // Vertical: generators in Ad(gk) n(H).
      for (const Matrix& a : ch->n_of_h())
        for (const Matrix& b : ch->n_of_h()) {
          const Matrix za = conj(gk, a), zb = conj(gk, b);
          EXPECT_NEAR(kks(x, tangent(x, za), tangent(x, zb)), 0.0,
                      1e-10 * xs * za.frobenius_norm() * zb.frobenius_norm());
        }
      // Tangent to Ad(g) Ad(K) H: generators in Ad(g) k.
      for (const Matrix& a : model.k_basis())
        for (const Matrix& b : model.k_basis()) {
          const Matrix za = conj(g, a), zb = conj(g, b);
          EXPECT_NEAR(kks(x, tangent(x, za), tangent(x, zb)), 0.0,
                      1e-10 * xs * za.frobenius_norm() * zb.frobenius_norm());
        }
    }
  }
}

TEST(Kks, IndependentOfGeneratorChoice) {
  const auto ch = chamber({1, 1, -1, -1});
  const auto& model = ch->model();
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Matrix g = random_group_element(model, derive_seed(s, 3, 0), 0.5);
    const auto x = orbit_point(g, ch);
    const Matrix z1 = random_algebra_element(model, derive_seed(s, 4, 0), 1.0);
    const Matrix z2 = random_algebra_element(model, derive_seed(s, 5, 0), 1.0);
    const Matrix c1 = conj(g, random_in_span(ch->z_of_h(), 4, derive_seed(s, 6, 0), 1.0));
    const Matrix c2 = conj(g, random_in_span(ch->z_of_h(), 4, derive_seed(s, 7, 0), 1.0));
    const double base = kks(x, tangent(x, z1), tangent(x, z2));
    const double shifted = kks(x, tangent(x, z1 + c1), tangent(x, z2 + c2));
    const double solved = kks(x, {commutator(z1, x.point), std::nullopt},
                              {commutator(z2, x.point), std::nullopt});
    const double scale = std::max(1.0, std::abs(base));
    EXPECT_NEAR(shifted, base, 1e-9 * scale * cond(g));
    EXPECT_NEAR(solved, base, 1e-9 * scale * cond(g));
  }
}

TEST(Kks, AdInvariant) {
  const auto ch = chamber({2, 1, -1, -2});
  const auto& model = ch->model();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix g = random_group_element(model, derive_seed(s, 8, 0), 0.5);
    const Matrix a = random_group_element(model, derive_seed(s, 9, 0), 0.5);
    const Matrix z1 = random_algebra_element(model, derive_seed(s, 10, 0), 1.0);
    const Matrix z2 = random_algebra_element(model, derive_seed(s, 11, 0), 1.0);
    const auto x = orbit_point(g, ch);
    const auto y = orbit_point(a * g, ch);
    const double v1 = kks(x, tangent(x, z1), tangent(x, z2));
    const double v2 = kks(y, tangent(y, conj(a, z1)), tangent(y, conj(a, z2)));
    EXPECT_NEAR(v1, v2, 1e-9 * std::max(1.0, std::abs(v1)) * cond(a) * cond(a));
  }
}

TEST(Kks, MixedPairClosedForm) {
  for (const auto& h : kShapes) {
    const auto ch = chamber(h);
    const auto& model = ch->model();
    const std::size_t n = h.size();
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Matrix g = random_group_element(model, derive_seed(s, 12, n), 0.5);
      const Matrix x = random_in_span(model.k_basis(), n, derive_seed(s, 13, n), 1.0);
      const Matrix y = random_in_span(ch->n_of_h(), n, derive_seed(s, 14, n), 1.0);
      const auto f = iwasawa(g);
      const Matrix an = f.an();
      const Matrix kx = infinitesimal_iwasawa(model, x, f).k_deriv;
      const double lhs = model.killing(commutator(conj(an, y), conj(an, ch->h())), kx);
      const double rhs = model.killing(commutator(y, ch->h()), x);
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(rhs)) * cond(an));
      EXPECT_NEAR(rhs, model.killing(ch->h(), commutator(x, y)), 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

// --- tautological 1-form ----------------------------------------------------------

TEST(Tautological, VanishesOnZeroSection) {
  const auto ch = chamber({1, 0, -1});
  const auto& model = ch->model();
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix k = random_exp_in_span(model.k_basis(), 3, s, 2.0);
    const auto x = orbit_point(k, ch);
    const Matrix z = random_algebra_element(model, s + 30, 1.0);
    EXPECT_NEAR(tautological(x, tangent(x, z)), 0.0, 1e-12);
  }
}

TEST(Tautological, VanishesOnVerticalVectors) {
  const auto ch = chamber({2, 1, -1, -2});
  const auto& model = ch->model();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix g = random_group_element(model, s, 0.5);
    const auto x = orbit_point(g, ch);
    const Matrix k = iwasawa(g).k_factor;
    const Matrix z = conj(k, random_in_span(ch->n_of_h(), 4, s + 40, 1.0));
    EXPECT_NEAR(tautological(x, tangent(x, z)), 0.0, 1e-10 * cond(g));
  }
}

TEST(Tautological, EqualsAlphaOnTranslatedFlag) {
  for (const auto& h : kShapes) {
    const auto ch = chamber(h);
    const auto& model = ch->model();
    const std::size_t n = h.size();
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Matrix g = random_group_element(model, derive_seed(s, 15, n), 0.5);
      const Matrix k = random_exp_in_span(model.k_basis(), n, derive_seed(s, 16, n), 1.0);
      const Matrix x = random_in_span(model.k_basis(), n, derive_seed(s, 17, n), 1.0);
      const auto pt = orbit_point(g * k, ch);
      const double lambda = tautological(pt, tangent(pt, conj(g * k, x)));
      const double alpha = alpha_form(g, *ch, k, x);
      EXPECT_NEAR(lambda, alpha, 1e-9 * std::max(1.0, std::abs(alpha)) * cond(g));
    }
  }
}

// --- chart forms --------------------------------------------------------------------

TEST(OmegaKks, BlockStructureAndHandValue) {
  const auto ch = chamber({1, -1});
  const OrbitChart chart(orbit_point(Matrix::identity(2), ch), default_chart_directions(*ch));
  ASSERT_EQ(chart.directions()[0], -Matrix::unit(2, 1, 0));
  const FormMatrix w = omega_kks_chart(chart);
  EXPECT_TRUE(MatrixNear(w.entries, Matrix{{0, 8}, {-8, 0}}, 1e-14));

  const auto ch3 = chamber({2, 1, -3});
  const OrbitChart vert(orbit_point(Matrix::identity(3), ch3), ch3->n_of_h());
  EXPECT_TRUE(MatrixNear(omega_kks_chart(vert).entries, Matrix(3, 3), 0.0));
  const OrbitChart theta(orbit_point(Matrix::identity(3), ch3), ch3->theta_n_of_h());
  EXPECT_TRUE(MatrixNear(omega_kks_chart(theta).entries, Matrix(3, 3), 0.0));
}

TEST(OmegaKks, ConstantAlongChart) {
  const auto ch = chamber({1, 1, -2});
  const auto& model = ch->model();
  const OrbitChart chart(orbit_point(random_group_element(model, 4, 0.5), ch),
                         default_chart_directions(*ch));
  const FormMatrix w0 = omega_kks_chart(chart);
  for (double a : {0.1, -0.3, 0.5}) {
    const std::vector<double> t{a, -a / 2, a / 3, 0.2};
    EXPECT_TRUE(MatrixNear(omega_kks_chart(chart, t).entries, w0.entries, 1e-9 * 1e3));
  }
}

TEST(OmegaStd, TwoByTwoAtIdentity) {
  const auto ch = chamber({1, -1});
  const OrbitChart chart(orbit_point(Matrix::identity(2), ch), default_chart_directions(*ch));
  const FormMatrix w = omega_std_chart(chart);
  EXPECT_NEAR(w.entries(0, 1), 8.0, 1e-5);
  EXPECT_EQ(w.entries(1, 0), -w.entries(0, 1));
  EXPECT_EQ(w.entries(0, 0), 0.0);
}

TEST(OmegaStd, LagrangianBlocksAtZeroSection) {
  const auto ch = chamber({1, 0, -1});
  const Matrix k = random_exp_in_span(ch->model().k_basis(), 3, 17, 1.0);
  std::vector<Matrix> dirs = ch->m_of_h();
  dirs.insert(dirs.end(), ch->n_of_h().begin(), ch->n_of_h().end());
  const OrbitChart chart(orbit_point(k, ch), dirs);
  const FormMatrix w = omega_std_chart(chart);
  const std::size_t m = ch->m_of_h().size();
  double diag = 0.0, off = 0.0;
  for (std::size_t i = 0; i < 2 * m; ++i)
    for (std::size_t j = 0; j < 2 * m; ++j) {
      const bool same = (i < m) == (j < m);
      (same ? diag : off) = std::max(same ? diag : off, std::abs(w.entries(i, j)));
      EXPECT_EQ(w.entries(i, j), -w.entries(j, i));
    }
  EXPECT_LE(diag, 1e-6);
  EXPECT_GT(off, 1.0);
}

TEST(OmegaStd, MatchesKksAwayFromIdentity) {
  for (const auto& h : kShapes) {
    const auto ch = chamber(h);
    const Matrix g = random_group_element(ch->model(), derive_seed(3, 18, h.size()), 0.5);
    const OrbitChart chart(orbit_point(g, ch), default_chart_directions(*ch));
    const double scale = std::max(1.0, cond(g) * ch->h().frobenius_norm());
    EXPECT_TRUE(MatrixNear(omega_std_chart(chart).entries, omega_kks_chart(chart).entries,
                           1e-5 * scale));
  }
}

// --- potential and its differential ------------------------------------------------

TEST(Potential, Examples) {
  const auto ch = chamber({1, 0, -1});
  const auto& model = ch->model();
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Matrix k = random_exp_in_span(model.k_basis(), 3, s, 2.0);
    EXPECT_NEAR(potential_F(Matrix::identity(3), *ch, k), 0.0, 1e-13);
    EXPECT_NEAR(alpha_form(Matrix::identity(3), *ch, k, model.k_basis()[s % 3]), 0.0, 1e-13);
  }
  const Matrix log_a = Matrix::diagonal(std::vector<double>{0.4, -0.1, -0.3});
  EXPECT_NEAR(potential_F(mat_exp(log_a), *ch, Matrix::identity(3)), model.killing(ch->h(), log_a),
              1e-14);
}

TEST(Potential, ThreeRoutesAgree) {
  for (const auto& h : kShapes) {
    const auto ch = chamber(h);
    const auto& model = ch->model();
    const std::size_t n = h.size();
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Matrix g = random_group_element(model, derive_seed(s, 19, n), 0.5);
      const Matrix k = random_exp_in_span(model.k_basis(), n, derive_seed(s, 20, n), 1.0);
      const double scale = std::max(1.0, cond(g * k) * ch->h().frobenius_norm());
      for (const Matrix& x : ch->m_of_h()) {
        const double a = alpha_form(g, *ch, k, x);
        const double b = graph_covector(g, ch, k, x);
        const double c = potential_derivative(g, *ch, k, x);
        EXPECT_NEAR(a, b, 1e-9 * scale);
        EXPECT_NEAR(a, c, 1e-5 * scale);
      }
      for (const Matrix& x : ch->z_k_of_h()) {
        EXPECT_NEAR(alpha_form(g, *ch, k, x), 0.0, 1e-9 * scale);
        EXPECT_NEAR(graph_covector(g, ch, k, x), 0.0, 1e-9 * scale);
      }
    }
  }
}

// --- fixed-g suites ------------------------------------------------------------------

TEST(VerifyGraph, IdentityIsIdenticallyZero) {
  const auto ch = chamber({1, 0, -1});
  const auto r = verify_graph(Matrix::identity(3), ch, 10, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_error, 1e-10);
}

TEST(VerifyGraph, DiagonalAndRandomWitnesses) {
  const auto ch2 = chamber({1, -1});
  const Matrix a = Matrix::diagonal(std::vector<double>{1.5, 1 / 1.5});
  EXPECT_TRUE(verify_graph(a, ch2, 10, 2).pass);
  const auto wall = chamber({1, 1, -2});
  EXPECT_TRUE(verify_graph(random_group_element(wall->model(), 3, 0.7), wall, 10, 3).pass);
}

TEST(VerifyLagrangian, Examples) {
  const auto ch2 = chamber({1, -1});
  const auto v = verify_lagrangian(Matrix::identity(2), ch2, LagrangianMode::vertical, 5, 1);
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.max_error, 0.0);
  EXPECT_TRUE(
      verify_lagrangian(Matrix::identity(2), ch2, LagrangianMode::horizontal, 5, 1).pass);
  const auto ch3 = chamber({1, 0, -1});
  const Matrix g = random_group_element(ch3->model(), 5, 0.5);
  EXPECT_TRUE(verify_lagrangian(g, ch3, LagrangianMode::vertical, 10, 2).pass);
  EXPECT_TRUE(verify_lagrangian(g, ch3, LagrangianMode::horizontal, 10, 2).pass);
}

TEST(VerifyTheorem, Examples) {
  const auto ch2 = chamber({1, -1});
  const auto r2 = verify_theorem(Matrix::identity(2), ch2, 1);
  EXPECT_TRUE(r2.pass);
  EXPECT_LE(r2.max_error, 1e-5);

  const auto ch3 = chamber({1, 0, -1});
  EXPECT_TRUE(verify_theorem(random_group_element(ch3->model(), 6, 1.0), ch3, 2).pass);

  const auto wall = chamber({1, 1, -2});
  const auto rw = verify_theorem(random_group_element(wall->model(), 7, 0.5), wall, 3);
  EXPECT_TRUE(rw.pass);
  const OrbitChart chart(orbit_point(Matrix::identity(3), wall), default_chart_directions(*wall));
  EXPECT_EQ(chart.dimension(), 4u);
}
