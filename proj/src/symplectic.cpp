#include "orbitsym/symplectic.hpp"

#include <array>

namespace orbitsym {

namespace {

Matrix generator_of(const OrbitPoint& x, const TangentVector& v) {
  return v.generator ? *v.generator : solve_generator(x, v.value);
}

// lambda(d_j) at chart(t) for every coordinate j, sharing one factorization.
std::vector<double> tautological_row(const OrbitChart& chart, std::span<const double> t) {
  const OrbitPoint x = chart(t);
  const SemisimpleModel& model = x.model();
  const IwasawaFactors f = iwasawa(x.witness);
  const Matrix& k = f.k_factor;
  const Matrix kt = k.transpose();
  const Matrix fiber = x.point - k * x.chamber->h() * kt;
  std::vector<double> row(chart.dimension());
  for (std::size_t j = 0; j < row.size(); ++j) {
    const Matrix w = chart.coordinate_generator(t, j);
    const Matrix kd = infinitesimal_iwasawa(model, w, f).k_deriv;
    row[j] = model.killing(fiber, k * kd * kt);
  }
  return row;
}

}  // namespace

double kks(const OrbitPoint& x, const TangentVector& v, const TangentVector& w) {
  return x.model().killing(x.point, commutator(generator_of(x, v), generator_of(x, w)));
}

double tautological_left(const OrbitPoint& x, const Matrix& w) {
  const OrbitPoint base = project_ruling(x);
  const Matrix& k = base.witness;
  const Matrix kd = infinitesimal_iwasawa(x.model(), w, x.witness).k_deriv;
  return x.model().killing(x.point - base.point, k * kd * k.transpose());
}

double tautological(const OrbitPoint& x, const TangentVector& v) {
  const Matrix& g = x.witness;
  return tautological_left(x, inverse(g) * generator_of(x, v) * g);
}

FormMatrix omega_std_chart(const OrbitChart& chart, double h) {
  const std::size_t m = chart.dimension();
  // grad(i, j) = d_i lambda_j at t = 0.
  Matrix grad(m, m);
  const std::array<double, 4> offsets{-2 * h, -h, h, 2 * h};
  const std::array<double, 4> weights{1.0, -8.0, 8.0, -1.0};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> t(m, 0.0);
    for (std::size_t s = 0; s < offsets.size(); ++s) {
      t[i] = offsets[s];
      const auto row = tautological_row(chart, t);
      for (std::size_t j = 0; j < m; ++j) grad(i, j) += weights[s] * row[j];
    }
    for (std::size_t j = 0; j < m; ++j) grad(i, j) /= 12 * h;
  }
  FormMatrix out{Matrix(m, m)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double w = -(grad(i, j) - grad(j, i));
      out.entries(i, j) = w;
      out.entries(j, i) = -w;
    }
  }
  return out;
}

FormMatrix omega_kks_chart(const OrbitChart& chart, std::span<const double> t) {
  const std::size_t m = chart.dimension();
  std::vector<double> zero(m, 0.0);
  if (t.empty()) t = zero;
  const OrbitPoint x = chart(t);
  const Matrix& g = x.witness;
  const Matrix g_inv = inverse(g);
  std::vector<Matrix> gens;
  for (const Matrix& d : chart.directions()) gens.push_back(g * d * g_inv);
  FormMatrix out{Matrix(m, m)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double w = x.model().killing(x.point, commutator(gens[i], gens[j]));
      out.entries(i, j) = w;
      out.entries(j, i) = -w;
    }
  }
  return out;
}

double potential_F(const Matrix& g, const ChamberElement& chamber, const Matrix& k) {
  return chamber.model().killing(chamber.h(), iwasawa(g * k).h_projection);
}

double alpha_form(const Matrix& g, const ChamberElement& chamber, const Matrix& k,
                  const Matrix& x) {
  const auto inf = infinitesimal_iwasawa(chamber.model(), x, g * k);
  return -chamber.model().killing(chamber.h(), inf.a_deriv);
}

double graph_covector(const Matrix& g, ChamberPtr chamber, const Matrix& k, const Matrix& x) {
  const Matrix gk = g * k;
  const CotangentRep rep = to_cotangent(orbit_point(gk, chamber));
  // Left-translated velocity of the base witness K(gk exp(tX)).
  const Matrix kd = infinitesimal_iwasawa(chamber->model(), x, gk).k_deriv;
  // Expand in m(H) + z_K(H); the z_K(H) part does not move the base point.
  std::vector<Matrix> k_basis = chamber->m_of_h();
  const std::size_t m = k_basis.size();
  if (m == 0) return 0.0;
  k_basis.insert(k_basis.end(), chamber->z_k_of_h().begin(), chamber->z_k_of_h().end());
  const std::size_t len = kd.rows() * kd.cols();
  Matrix columns(len, k_basis.size());
  for (std::size_t c = 0; c < k_basis.size(); ++c)
    for (std::size_t r = 0; r < len; ++r) columns(r, c) = k_basis[c].entries()[r];
  const auto coeffs = solve_least_squares(columns, kd.entries()).solution;
  double value = 0.0;
  for (std::size_t a = 0; a < m; ++a) value += coeffs[a] * rep.coords[a];
  return value;
}

double potential_derivative(const Matrix& g, const ChamberElement& chamber, const Matrix& k,
                            const Matrix& x, double h) {
  return -central_diff([&](double t) { return potential_F(g, chamber, k * mat_exp(x * t)); }, 0.0,
                       h);
}

}  // namespace orbitsym
