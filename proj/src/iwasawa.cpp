#include "orbitsym/iwasawa.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace orbitsym {

IwasawaFactors iwasawa(const Matrix& g) {
  auto [q, r] = qr_positive(g);
  const std::size_t n = g.rows();
  IwasawaFactors out{std::move(q), Matrix(n, n), Matrix(n, n), Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double d = r(i, i);
    out.a_factor(i, i) = d;
    out.h_projection(i, i) = std::log(d);
    out.n_factor(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) out.n_factor(i, j) = r(i, j) / d;
  }
  return out;
}

InfinitesimalIwasawa infinitesimal_iwasawa(const SemisimpleModel& model, const Matrix& x,
                                           const Matrix& g) {
  return infinitesimal_iwasawa(model, x, iwasawa(g));
}

InfinitesimalIwasawa infinitesimal_iwasawa(const SemisimpleModel& model, const Matrix& x,
                                           const IwasawaFactors& factors) {
  const Matrix an = factors.an();
  const Matrix an_inv = inverse(an);
  KanSplit split = model.decompose_kan(an * x * an_inv);
  return {std::move(split.k), std::move(split.a), an_inv * split.n * an};
}

InfinitesimalIwasawa fd_iwasawa_derivatives(const Matrix& x, const Matrix& g, double h) {
  const IwasawaFactors base = iwasawa(g);
  // Stencil points t = -2h, -h, h, 2h, each factorized once.
  const std::array<double, 4> offsets{-2 * h, -h, h, 2 * h};
  std::vector<IwasawaFactors> stencil;
  for (double t : offsets) stencil.push_back(iwasawa(g * mat_exp(x * t)));
  auto pick = [&](auto member) {
    return central_diff(
        [&](double t) -> Matrix {
          for (std::size_t i = 0; i < offsets.size(); ++i)
            if (offsets[i] == t) return stencil[i].*member;
          throw std::logic_error("fd_iwasawa_derivatives: unexpected stencil point");
        },
        0.0, h);
  };
  const Matrix dk = pick(&IwasawaFactors::k_factor);
  const Matrix da = pick(&IwasawaFactors::a_factor);
  const Matrix dn = pick(&IwasawaFactors::n_factor);
  return {base.k_factor.transpose() * dk, inverse(base.a_factor) * da,
          inverse(base.n_factor) * dn};
}

}  // namespace orbitsym
