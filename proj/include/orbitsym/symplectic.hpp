#pragma once

// The KKS form, the tautological 1-form transported through the
// identification with the cotangent bundle, and the Iwasawa potential.

#include "orbitsym/iwasawa.hpp"
#include "orbitsym/orbit.hpp"

#include <span>
#include <vector>

namespace orbitsym {

/// Values of a 2-form on the coordinate velocity pairs of a chart.
/// Only i < j is computed; the lower triangle is mirrored.
struct FormMatrix {
  Matrix entries;

  std::size_t dimension() const { return entries.rows(); }
};

/// killing(x, [Z_V, Z_W]); generators are solved for when absent.
double kks(const OrbitPoint& x, const TangentVector& v, const TangentVector& w);

/// Tautological 1-form on V = [Z, x]:
/// killing(x - pr(x), Ad(K(g)) K(Ad(g)^{-1} Z, g)).
double tautological(const OrbitPoint& x, const TangentVector& v);

/// Same, with the generator given left-trivialized: V = [Ad(g) W, x].
double tautological_left(const OrbitPoint& x, const Matrix& w);

/// omega_std = -d(lambda) in chart coordinates, by fourth-order central
/// differences of lambda(d_j) with step h.
FormMatrix omega_std_chart(const OrbitChart& chart, double h = 1e-3);

/// KKS values on the coordinate fields of the witness frame at chart(t):
/// killing(x(t), [Ad(g(t)) X_i, Ad(g(t)) X_j]). Independent of t.
FormMatrix omega_kks_chart(const OrbitChart& chart, std::span<const double> t = {});

/// F(k) = killing(H, H(g k)) with H(.) the Iwasawa log-projection.
double potential_F(const Matrix& g, const ChamberElement& chamber, const Matrix& k);

/// -killing(H, A(X, g k)) for X in k.
double alpha_form(const Matrix& g, const ChamberElement& chamber, const Matrix& k,
                  const Matrix& x);

/// Covector of to_cotangent(Ad(gk) H) applied to the flag tangent swept by
/// the base point along k exp(tX), expanded in m(H) coordinates.
double graph_covector(const Matrix& g, ChamberPtr chamber, const Matrix& k, const Matrix& x);

/// -d/dt F(k exp(tX)) at t = 0 by central differences.
double potential_derivative(const Matrix& g, const ChamberElement& chamber, const Matrix& k,
                            const Matrix& x, double h = 1e-3);

}  // namespace orbitsym
