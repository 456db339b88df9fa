#include "orbitsym/lie_model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace orbitsym {

namespace {

std::int64_t checked_narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("Rational: 64-bit overflow");
  }
  return static_cast<std::int64_t>(v);
}

// Uniform in [-1, 1) from the top 53 bits of a 64-bit draw.
double symmetric_unit(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace

Rational::Rational(std::int64_t p, std::int64_t q) {
  if (q == 0) throw std::invalid_argument("Rational: zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p, q);
  num = g == 0 ? 0 : p / g;
  den = g == 0 ? 1 : q / g;
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

Rational operator+(const Rational& a, const Rational& b) {
  const __int128 p = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
  const __int128 q = static_cast<__int128>(a.den) * b.den;
  __int128 x = p < 0 ? -p : p;
  __int128 y = q;
  while (y != 0) {
    const __int128 t = x % y;
    x = y;
    y = t;
  }
  const __int128 g = x == 0 ? 1 : x;
  return Rational(checked_narrow(p / g), checked_narrow(q / g));
}

// ---------------------------------------------------------------------------

SlnModel::SlnModel(std::size_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("SlnModel: n must be at least 2");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      k_basis_.push_back(Matrix::unit(n, i, j) - Matrix::unit(n, j, i));
      n_basis_.push_back(Matrix::unit(n, i, j));
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a_basis_.push_back(Matrix::unit(n, i, i) - Matrix::unit(n, i + 1, i + 1));
  }
}

double SlnModel::killing(const Matrix& x, const Matrix& y) const {
  // tr(XY) without forming the product.
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) s += x(i, j) * y(j, i);
  return killing_coefficient() * s;
}

Matrix SlnModel::cartan_involution(const Matrix& x) const { return -x.transpose(); }

KanSplit SlnModel::decompose_kan(const Matrix& x) const {
  KanSplit out{Matrix(n_, n_), Matrix(n_, n_), Matrix(n_, n_)};
  for (std::size_t i = 0; i < n_; ++i) {
    out.a(i, i) = x(i, i);
    for (std::size_t j = 0; j < i; ++j) {
      out.k(i, j) = x(i, j);
      out.k(j, i) = -x(i, j);
      out.n(j, i) = x(j, i) + x(i, j);
    }
  }
  return out;
}

Matrix SlnModel::project_to_algebra(const Matrix& x) const {
  Matrix out = x;
  const double shift = x.trace() / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out(i, i) -= shift;
  return out;
}

std::shared_ptr<const ChamberElement> SlnModel::chamber_element(
    std::span<const double> entries) const {
  if (entries.size() != n_) {
    throw NotInChamber("H has " + std::to_string(entries.size()) + " entries, expected " +
                       std::to_string(n_));
  }
  double sum = 0.0;
  std::vector<std::size_t> block_of(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (!std::isfinite(entries[i])) throw NotInChamber("H has a non-finite entry");
    sum += entries[i];
    if (i > 0) {
      if (entries[i] > entries[i - 1]) throw NotInChamber("H not weakly decreasing");
      block_of[i] = block_of[i - 1] + (entries[i] == entries[i - 1] ? 0 : 1);
    }
  }
  if (sum != 0.0) throw NotInChamber("H entries do not sum to zero");
  return build_chamber({entries.begin(), entries.end()}, std::move(block_of));
}

std::shared_ptr<const ChamberElement> SlnModel::chamber_element(
    std::span<const Rational> entries) const {
  if (entries.size() != n_) {
    throw NotInChamber("H has " + std::to_string(entries.size()) + " entries, expected " +
                       std::to_string(n_));
  }
  Rational sum;
  std::vector<std::size_t> block_of(n_, 0);
  std::vector<double> values(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    sum = sum + entries[i];
    values[i] = entries[i].to_double();
    if (i > 0) {
      if (entries[i - 1] < entries[i]) throw NotInChamber("H not weakly decreasing");
      block_of[i] = block_of[i - 1] + (entries[i] == entries[i - 1] ? 0 : 1);
    }
  }
  if (sum.num != 0) throw NotInChamber("H entries do not sum to zero");
  return build_chamber(std::move(values), std::move(block_of));
}

std::shared_ptr<const ChamberElement> SlnModel::build_chamber(
    std::vector<double> values, std::vector<std::size_t> block_of) const {
  const std::size_t n = n_;
  std::vector<ChamberElement::Block> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || block_of[i] != block_of[i - 1]) blocks.push_back({values[i], 0});
    ++blocks.back().multiplicity;
  }

  std::vector<Matrix> n_of_h, theta_n_of_h, z_of_h, z_k_of_h, m_of_h;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Matrix eij = Matrix::unit(n, i, j);
      const Matrix eji = Matrix::unit(n, j, i);
      if (block_of[i] != block_of[j]) {
        n_of_h.push_back(eij);
        theta_n_of_h.push_back(cartan_involution(eij));
        m_of_h.push_back(eij - eji);
      } else {
        z_k_of_h.push_back(eij - eji);
      }
    }
  }
  // z(H): off-diagonal units inside blocks, then the traceless diagonal.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && block_of[i] == block_of[j]) z_of_h.push_back(Matrix::unit(n, i, j));
  for (const Matrix& a : a_basis_) z_of_h.push_back(a);

  Matrix h = Matrix::diagonal(values);
  return std::make_shared<const ChamberElement>(
      shared_from_this(), std::move(h), std::move(values), std::move(blocks), std::move(n_of_h),
      std::move(theta_n_of_h), std::move(z_of_h), std::move(z_k_of_h), std::move(m_of_h));
}

std::shared_ptr<const SemisimpleModel> make_sl(std::size_t n) {
  return std::make_shared<const SlnModel>(n);
}

ChamberElement::ChamberElement(std::shared_ptr<const SemisimpleModel> model, Matrix h,
                               std::vector<double> entries, std::vector<Block> blocks,
                               std::vector<Matrix> n_of_h, std::vector<Matrix> theta_n_of_h,
                               std::vector<Matrix> z_of_h, std::vector<Matrix> z_k_of_h,
                               std::vector<Matrix> m_of_h)
    : model_(std::move(model)),
      h_(std::move(h)),
      entries_(std::move(entries)),
      blocks_(std::move(blocks)),
      n_of_h_(std::move(n_of_h)),
      theta_n_of_h_(std::move(theta_n_of_h)),
      z_of_h_(std::move(z_of_h)),
      z_k_of_h_(std::move(z_k_of_h)),
      m_of_h_(std::move(m_of_h)) {}

// ---------------------------------------------------------------------------

Matrix combine(std::span<const Matrix> basis, std::span<const double> coefficients) {
  if (basis.size() != coefficients.size()) throw std::invalid_argument("combine: size mismatch");
  if (basis.empty()) throw std::invalid_argument("combine: empty basis");
  Matrix out(basis.front().rows(), basis.front().cols());
  for (std::size_t i = 0; i < basis.size(); ++i) out += basis[i] * coefficients[i];
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  // splitmix64 finalizer over a simple combination.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1) + 0xBF58476D1CE4E5B9ULL * index;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix random_algebra_element(const SemisimpleModel& model, std::uint64_t seed, double scale) {
  const std::size_t n = model.n();
  std::mt19937_64 rng(seed);
  Matrix x(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = scale * symmetric_unit(rng);
  return model.project_to_algebra(x);
}

Matrix random_group_element(const SemisimpleModel& model, std::uint64_t seed, double scale,
                            int factors) {
  Matrix g = Matrix::identity(model.n());
  for (int f = 0; f < factors; ++f) {
    g = g * mat_exp(random_algebra_element(model, derive_seed(seed, 17, f), scale));
  }
  return g;
}

Matrix random_in_span(std::span<const Matrix> basis, std::size_t n, std::uint64_t seed,
                      double scale) {
  if (basis.empty()) return Matrix(n, n);
  std::mt19937_64 rng(seed);
  std::vector<double> c(basis.size());
  for (double& v : c) v = scale * symmetric_unit(rng);
  return combine(basis, c);
}

Matrix random_exp_in_span(std::span<const Matrix> basis, std::size_t n, std::uint64_t seed,
                          double scale) {
  return mat_exp(random_in_span(basis, n, seed, scale));
}

}  // namespace orbitsym
