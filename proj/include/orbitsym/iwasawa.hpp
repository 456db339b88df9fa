#pragma once

// Group-level Iwasawa decomposition g = K(g) A(g) N(g) and its derivative
// along right-translated curves g exp(tX).

#include "orbitsym/lie_model.hpp"
#include "orbitsym/numerics.hpp"

namespace orbitsym {

struct IwasawaFactors {
  Matrix k_factor;      // orthogonal, det 1
  Matrix a_factor;      // positive diagonal
  Matrix n_factor;      // unit upper triangular
  Matrix h_projection;  // log of a_factor

  /// A(g) N(g).
  Matrix an() const { return a_factor * n_factor; }
};

/// Left-translated velocities at t = 0 of K, A and N along g exp(tX).
struct InfinitesimalIwasawa {
  Matrix k_deriv;
  Matrix a_deriv;
  Matrix n_deriv;
};

/// Unique KAN factorization of an invertible g, via qr_positive.
IwasawaFactors iwasawa(const Matrix& g);

/// Closed form: split Y = Ad(AN(g)) X into k + a + n and return
/// (Y_k, Y_a, Ad(AN(g))^{-1} Y_n).
InfinitesimalIwasawa infinitesimal_iwasawa(const SemisimpleModel& model, const Matrix& x,
                                           const Matrix& g);
/// Same, reusing an existing factorization of g.
InfinitesimalIwasawa infinitesimal_iwasawa(const SemisimpleModel& model, const Matrix& x,
                                           const IwasawaFactors& factors);

/// Same quantities by fourth-order central differences of the factor curves
/// t -> factor(g exp(tX)), left-translated to the identity.
InfinitesimalIwasawa fd_iwasawa_derivatives(const Matrix& x, const Matrix& g, double h = 1e-3);

}  // namespace orbitsym
