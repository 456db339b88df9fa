#include "orbitsym/orbit.hpp"

#include "orbitsym/iwasawa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace orbitsym {

namespace {

Matrix conjugate(const Matrix& g, const Matrix& x) { return g * x * inverse(g); }

// Columns are the vectorized basis elements.
Matrix basis_columns(std::span<const Matrix> basis) {
  const std::size_t len = basis.front().rows() * basis.front().cols();
  Matrix out(len, basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const auto e = basis[c].entries();
    for (std::size_t r = 0; r < len; ++r) out(r, c) = e[r];
  }
  return out;
}

double conditioning_scale(const OrbitPoint& x) {
  return std::max(1.0, x.witness.frobenius_norm() * inverse(x.witness).frobenius_norm() *
                           x.chamber->h().frobenius_norm());
}

}  // namespace

OrbitPoint orbit_point(const Matrix& g, ChamberPtr chamber) {
  Matrix point = conjugate(g, chamber->h());
  return {g, std::move(point), std::move(chamber)};
}

OrbitPoint flag_point(const Matrix& k, ChamberPtr chamber) {
  const std::size_t n = k.rows();
  if (!k.square() || max_abs_diff(k.transpose() * k, Matrix::identity(n)) > 1e-10 ||
      std::abs(determinant(k) - 1.0) > 1e-10) {
    throw NotOrthogonal("flag_point: witness is not in SO(n)");
  }
  Matrix point = k * chamber->h() * k.transpose();
  return {k, std::move(point), std::move(chamber)};
}

TangentVector tangent(const OrbitPoint& x, const Matrix& generator) {
  return {commutator(generator, x.point), generator};
}

OrbitPoint project_ruling(const OrbitPoint& x) {
  return flag_point(iwasawa(x.witness).k_factor, x.chamber);
}

double span_residual(std::span<const Matrix> basis, const Matrix& value) {
  if (basis.empty()) return value.frobenius_norm();
  return solve_least_squares(basis_columns(basis), value.entries()).residual;
}

double displacement_residual(const OrbitPoint& x) {
  const OrbitPoint base = project_ruling(x);
  const Matrix& k = base.witness;
  return span_residual(x.chamber->n_of_h(), k.transpose() * (x.point - base.point) * k);
}

std::vector<double> covector_coords(const ChamberElement& chamber, const Matrix& k,
                                    const Matrix& fiber) {
  const SemisimpleModel& model = chamber.model();
  const Matrix kt = k.transpose();
  std::vector<double> coords;
  coords.reserve(chamber.m_of_h().size());
  for (const Matrix& e : chamber.m_of_h()) coords.push_back(model.killing(fiber, k * e * kt));
  return coords;
}

CotangentRep make_cotangent(const Matrix& k, const Matrix& fiber, ChamberPtr chamber) {
  Matrix base = k * chamber->h() * k.transpose();
  std::vector<double> coords = covector_coords(*chamber, k, fiber);
  return {k, std::move(base), fiber, std::move(coords), std::move(chamber)};
}

CotangentRep to_cotangent(const OrbitPoint& x) {
  const OrbitPoint base = project_ruling(x);
  const Matrix fiber = x.point - base.point;
  const Matrix& k = base.witness;
  const double residual = span_residual(x.chamber->n_of_h(), k.transpose() * fiber * k);
  if (residual > 1e-10 * conditioning_scale(x)) {
    throw FiberResidual("to_cotangent: fiber leaves Ad(K(g)) n(H), residual " +
                        std::to_string(residual));
  }
  return make_cotangent(k, fiber, x.chamber);
}

Matrix nilpotent_witness_log(const ChamberElement& chamber, const Matrix& u, int max_iterations,
                             double tolerance) {
  const std::size_t n = chamber.h().rows();
  const auto& basis = chamber.n_of_h();
  if (basis.empty()) {
    if (u.frobenius_norm() > tolerance) throw NoNilpotentWitness("fiber must vanish: n(H) = 0");
    return Matrix(n, n);
  }
  const Matrix& h = chamber.h();
  std::vector<Matrix> images;
  for (const Matrix& y : basis) images.push_back(commutator(y, h));
  const Matrix jacobian = basis_columns(images);

  // Chord iteration with the Jacobian at Y = 0. The residual is cleared one
  // root height per sweep, so it terminates after at most n - 1 corrections.
  Matrix y(n, n);
  const double target = tolerance * std::max(1.0, u.frobenius_norm());
  for (int it = 0; it <= max_iterations; ++it) {
    const Matrix residual = conjugate(mat_exp(y), h) - h - u;
    if (residual.frobenius_norm() <= target) return y;
    const auto step = solve_least_squares(jacobian, (-residual).entries());
    y += combine(basis, step.solution);
  }
  throw NoNilpotentWitness("from_cotangent: no convergence after " +
                           std::to_string(max_iterations) + " iterations");
}

OrbitPoint from_cotangent(const CotangentRep& rep, int max_iterations, double tolerance) {
  const Matrix& k = rep.base_witness;
  const Matrix u = k.transpose() * rep.fiber * k;
  const Matrix y = nilpotent_witness_log(*rep.chamber, u, max_iterations, tolerance);
  return {k * mat_exp(y), rep.base + rep.fiber, rep.chamber};
}

Matrix pairing_matrix(const ChamberElement& chamber) {
  const auto& ns = chamber.n_of_h();
  const auto& ms = chamber.m_of_h();
  Matrix out(ns.size(), ms.size());
  for (std::size_t i = 0; i < ns.size(); ++i)
    for (std::size_t a = 0; a < ms.size(); ++a) out(i, a) = chamber.model().killing(ns[i], ms[a]);
  return out;
}

Matrix solve_generator(const OrbitPoint& x, const Matrix& v) {
  const std::size_t n = x.point.rows();
  // Z -> [Z, x] on gl(n); the minimum-norm solution is orthogonal to the
  // identity and therefore already traceless.
  std::vector<Matrix> images;
  images.reserve(n * n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) images.push_back(commutator(Matrix::unit(n, p, q), x.point));
  const auto result = solve_least_squares(basis_columns(images), v.entries());
  const double tol =
      1e-9 * std::max(1.0, x.point.frobenius_norm()) * std::max(1.0, v.frobenius_norm());
  if (result.residual > tol) {
    throw NotTangent("solve_generator: vector is not tangent to the orbit, residual " +
                     std::to_string(result.residual));
  }
  return x.model().project_to_algebra(Matrix(n, n, result.solution));
}

Matrix dexp_left(const Matrix& s, const Matrix& x) {
  Matrix sum = x;
  Matrix term = x;
  for (int k = 1; k < 80; ++k) {
    term = commutator(s, term) * (-1.0 / (k + 1));
    sum += term;
    if (term.frobenius_norm() <= 1e-18 * std::max(1.0, sum.frobenius_norm())) break;
  }
  return sum;
}

OrbitChart::OrbitChart(OrbitPoint center, std::vector<Matrix> directions)
    : center_(std::move(center)), directions_(std::move(directions)) {
  if (directions_.empty()) return;
  std::vector<Matrix> images;
  for (const Matrix& d : directions_) images.push_back(commutator(d, center_.chamber->h()));
  const auto sv = singular_values(basis_columns(images));
  if (sv.size() < directions_.size() || sv.back() <= 1e-10 * std::max(1.0, sv.front())) {
    throw DegenerateChart("orbit_chart: directions are dependent modulo z(H)");
  }
}

Matrix OrbitChart::exponent(std::span<const double> t) const {
  if (t.size() != directions_.size()) throw std::invalid_argument("OrbitChart: wrong arity");
  const std::size_t n = center_.point.rows();
  if (directions_.empty()) return Matrix(n, n);
  return combine(directions_, t);
}

Matrix OrbitChart::witness(std::span<const double> t) const {
  return center_.witness * mat_exp(exponent(t));
}

OrbitPoint OrbitChart::operator()(std::span<const double> t) const {
  return orbit_point(witness(t), center_.chamber);
}

Matrix OrbitChart::coordinate_generator(std::span<const double> t, std::size_t j) const {
  return dexp_left(exponent(t), directions_.at(j));
}

TangentVector OrbitChart::coordinate_velocity(std::span<const double> t, std::size_t j) const {
  const OrbitPoint x = (*this)(t);
  const Matrix z = conjugate(x.witness, coordinate_generator(t, j));
  return tangent(x, z);
}

std::vector<Matrix> default_chart_directions(const ChamberElement& chamber) {
  std::vector<Matrix> dirs = chamber.theta_n_of_h();
  dirs.insert(dirs.end(), chamber.n_of_h().begin(), chamber.n_of_h().end());
  return dirs;
}

}  // namespace orbitsym
