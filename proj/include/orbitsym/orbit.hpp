#pragma once

// Adjoint-orbit geometry: orbit points with group witnesses, the flag
// manifold Ad(K)H as zero section, the ruling projection and the
// identification of the orbit with the cotangent bundle of the flag manifold.

#include "orbitsym/lie_model.hpp"
#include "orbitsym/numerics.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace orbitsym {

class NotOrthogonal : public Error {
 public:
  using Error::Error;
};
class FiberResidual : public Error {
 public:
  using Error::Error;
};
class NoNilpotentWitness : public Error {
 public:
  using Error::Error;
};
class DegenerateChart : public Error {
 public:
  using Error::Error;
};
class NotTangent : public Error {
 public:
  using Error::Error;
};

using ChamberPtr = std::shared_ptr<const ChamberElement>;

/// x = Ad(g) H, always carried together with its witness g.
struct OrbitPoint {
  Matrix witness;
  Matrix point;
  ChamberPtr chamber;

  const SemisimpleModel& model() const { return chamber->model(); }
};

/// V = [Z, x]; the generator Z is optional.
struct TangentVector {
  Matrix value;
  std::optional<Matrix> generator;
};

/// Point of T*Ad(K)H: base b = Ad(k) H and fiber v with Ad(k)^{-1} v in n(H).
struct CotangentRep {
  Matrix base_witness;
  Matrix base;
  Matrix fiber;
  /// killing(v, Ad(k) E_a) over the m(H)-basis E_a.
  std::vector<double> coords;
  ChamberPtr chamber;
};

OrbitPoint orbit_point(const Matrix& g, ChamberPtr chamber);
/// Throws NotOrthogonal unless k^T k = I and det k = 1 within 1e-10.
OrbitPoint flag_point(const Matrix& k, ChamberPtr chamber);

/// Tangent vector with known generator Z: value [Z, x].
TangentVector tangent(const OrbitPoint& x, const Matrix& generator);

/// Bundle projection of the ruling: Ad(K(g)) H.
OrbitPoint project_ruling(const OrbitPoint& x);

/// Least-squares residual of `value` against span(basis), in Frobenius norm.
double span_residual(std::span<const Matrix> basis, const Matrix& value);

/// Residual of x - pr(x) against Ad(K(g)) n(H).
double displacement_residual(const OrbitPoint& x);

/// Pairing values killing(fiber, Ad(k) E_a) over the m(H)-basis.
std::vector<double> covector_coords(const ChamberElement& chamber, const Matrix& k,
                                    const Matrix& fiber);

/// Builds a cotangent representative from a base witness and a fiber vector.
CotangentRep make_cotangent(const Matrix& k, const Matrix& fiber, ChamberPtr chamber);

/// The inverse identification i^{-1}. Throws FiberResidual when x - pr(x)
/// leaves Ad(K(g)) n(H) beyond tolerance.
CotangentRep to_cotangent(const OrbitPoint& x);

/// The identification i. The witness is k exp(Y) with Y in n(H) solving
/// Ad(exp Y) H = H + Ad(k)^{-1} fiber.
OrbitPoint from_cotangent(const CotangentRep& rep, int max_iterations = 50,
                          double tolerance = 1e-12);

/// Y in n(H) with Ad(exp Y) H = H + u, for u in n(H).
Matrix nilpotent_witness_log(const ChamberElement& chamber, const Matrix& u,
                             int max_iterations = 50, double tolerance = 1e-12);

/// The n(H) x m(H) matrix of pairings killing(Y_i, E_a).
Matrix pairing_matrix(const ChamberElement& chamber);

/// Minimum-norm Z with [Z, x] = V. Throws NotTangent if no such Z exists.
Matrix solve_generator(const OrbitPoint& x, const Matrix& v);

/// Right-trivialized derivative of exp: exp(-S) d/de exp(S + eX) at e = 0,
/// i.e. sum_k (-1)^k ad_S^k X / (k+1)!.
Matrix dexp_left(const Matrix& s, const Matrix& x);

/// Chart t -> Ad(g exp(sum_i t_i X_i)) H centred at an orbit point.
class OrbitChart {
 public:
  /// Throws DegenerateChart when the directions are dependent modulo z(H).
  OrbitChart(OrbitPoint center, std::vector<Matrix> directions);

  std::size_t dimension() const { return directions_.size(); }
  const OrbitPoint& center() const { return center_; }
  const std::vector<Matrix>& directions() const { return directions_; }

  /// Witness g exp(sum t_i X_i).
  Matrix witness(std::span<const double> t) const;
  OrbitPoint operator()(std::span<const double> t) const;

  /// Left-trivialized generator W_j(t) of the coordinate field: the
  /// coordinate velocity at chart(t) is [Ad(g(t)) W_j(t), x(t)].
  Matrix coordinate_generator(std::span<const double> t, std::size_t j) const;
  TangentVector coordinate_velocity(std::span<const double> t, std::size_t j) const;

 private:
  Matrix exponent(std::span<const double> t) const;

  OrbitPoint center_;
  std::vector<Matrix> directions_;
};

/// theta n(H) followed by n(H): a complement of z(H).
std::vector<Matrix> default_chart_directions(const ChamberElement& chamber);

}  // namespace orbitsym
