#pragma once

// Concrete semisimple data for matrix Lie algebras. Only sl(n, R) is
// implemented; downstream code talks to the SemisimpleModel interface.

#include "orbitsym/numerics.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace orbitsym {

class NotInChamber : public Error {
 public:
  using Error::Error;
};

/// The three Iwasawa components of an algebra element, X = k + a + n.
struct KanSplit {
  Matrix k;
  Matrix a;
  Matrix n;
};

/// Exact rational number p/q with q > 0 and gcd(p, q) = 1.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t p, std::int64_t q = 1);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);
  friend Rational operator+(const Rational& a, const Rational& b);
};

class ChamberElement;

/// Killing form, Cartan involution, Iwasawa splitting and chamber data of a
/// real semisimple matrix Lie algebra.
class SemisimpleModel : public std::enable_shared_from_this<SemisimpleModel> {
 public:
  virtual ~SemisimpleModel() = default;

  /// Size of the defining matrices.
  virtual std::size_t n() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual double killing_coefficient() const = 0;

  virtual double killing(const Matrix& x, const Matrix& y) const = 0;
  virtual Matrix cartan_involution(const Matrix& x) const = 0;
  virtual KanSplit decompose_kan(const Matrix& x) const = 0;

  virtual const std::vector<Matrix>& k_basis() const = 0;
  virtual const std::vector<Matrix>& a_basis() const = 0;
  virtual const std::vector<Matrix>& n_basis() const = 0;

  /// Builds H from entries that must lie in the closed positive chamber.
  /// Entries are compared exactly; the sum must be exactly zero.
  virtual std::shared_ptr<const ChamberElement> chamber_element(
      std::span<const double> entries) const = 0;
  /// Same, deciding chamber membership and blocks on exact rationals.
  virtual std::shared_ptr<const ChamberElement> chamber_element(
      std::span<const Rational> entries) const = 0;

  /// Projects an arbitrary square matrix onto the algebra.
  virtual Matrix project_to_algebra(const Matrix& x) const = 0;
};

/// sl(n, R) with K = SO(n), A = positive diagonal, N = upper unitriangular.
class SlnModel final : public SemisimpleModel {
 public:
  explicit SlnModel(std::size_t n);

  std::size_t n() const override { return n_; }
  std::size_t dimension() const override { return n_ * n_ - 1; }
  double killing_coefficient() const override { return 2.0 * static_cast<double>(n_); }

  /// 2n tr(XY).
  double killing(const Matrix& x, const Matrix& y) const override;
  /// -X^T.
  Matrix cartan_involution(const Matrix& x) const override;
  /// With L the strictly lower part of X: k = L - L^T, a = diag(X),
  /// n = strictly upper part of X - k.
  KanSplit decompose_kan(const Matrix& x) const override;

  const std::vector<Matrix>& k_basis() const override { return k_basis_; }
  const std::vector<Matrix>& a_basis() const override { return a_basis_; }
  const std::vector<Matrix>& n_basis() const override { return n_basis_; }

  std::shared_ptr<const ChamberElement> chamber_element(
      std::span<const double> entries) const override;
  std::shared_ptr<const ChamberElement> chamber_element(
      std::span<const Rational> entries) const override;

  Matrix project_to_algebra(const Matrix& x) const override;

 private:
  std::shared_ptr<const ChamberElement> build_chamber(std::vector<double> values,
                                                      std::vector<std::size_t> block_of) const;

  std::size_t n_;
  std::vector<Matrix> k_basis_;
  std::vector<Matrix> a_basis_;
  std::vector<Matrix> n_basis_;
};

std::shared_ptr<const SemisimpleModel> make_sl(std::size_t n);

/// A real hyperbolic element H in the closed positive Weyl chamber together
/// with the subspaces it determines.
class ChamberElement {
 public:
  struct Block {
    double value;
    std::size_t multiplicity;
  };

  ChamberElement(std::shared_ptr<const SemisimpleModel> model, Matrix h, std::vector<double> entries,
                 std::vector<Block> blocks, std::vector<Matrix> n_of_h, std::vector<Matrix> theta_n_of_h,
                 std::vector<Matrix> z_of_h, std::vector<Matrix> z_k_of_h, std::vector<Matrix> m_of_h);

  const SemisimpleModel& model() const { return *model_; }
  std::shared_ptr<const SemisimpleModel> model_ptr() const { return model_; }

  const Matrix& h() const { return h_; }
  std::span<const double> entries() const { return entries_; }
  std::span<const Block> blocks() const { return blocks_; }

  /// Root spaces of positive roots not vanishing on H.
  const std::vector<Matrix>& n_of_h() const { return n_of_h_; }
  const std::vector<Matrix>& theta_n_of_h() const { return theta_n_of_h_; }
  /// Centralizer of H.
  const std::vector<Matrix>& z_of_h() const { return z_of_h_; }
  const std::vector<Matrix>& z_k_of_h() const { return z_k_of_h_; }
  /// Killing-orthogonal complement of z_K(H) in k.
  const std::vector<Matrix>& m_of_h() const { return m_of_h_; }

  std::size_t orbit_dimension() const { return 2 * n_of_h_.size(); }
  std::size_t flag_dimension() const { return m_of_h_.size(); }
  bool regular() const { return blocks_.size() == entries_.size(); }

 private:
  std::shared_ptr<const SemisimpleModel> model_;
  Matrix h_;
  std::vector<double> entries_;
  std::vector<Block> blocks_;
  std::vector<Matrix> n_of_h_;
  std::vector<Matrix> theta_n_of_h_;
  std::vector<Matrix> z_of_h_;
  std::vector<Matrix> z_k_of_h_;
  std::vector<Matrix> m_of_h_;
};

/// Linear combination sum_i c_i B_i.
Matrix combine(std::span<const Matrix> basis, std::span<const double> coefficients);

// Deterministic samplers. Uniform variates are derived directly from a
// 64-bit Mersenne twister so outputs do not depend on the standard library.

/// Entries uniform in [-scale, scale], projected onto the algebra.
Matrix random_algebra_element(const SemisimpleModel& model, std::uint64_t seed, double scale);
/// Product of `factors` exponentials of random algebra elements.
Matrix random_group_element(const SemisimpleModel& model, std::uint64_t seed, double scale,
                            int factors = 3);
/// exp of a random combination of the given basis, coefficients in [-scale, scale].
Matrix random_exp_in_span(std::span<const Matrix> basis, std::size_t n, std::uint64_t seed,
                          double scale);
/// Random combination of the given basis, coefficients in [-scale, scale].
Matrix random_in_span(std::span<const Matrix> basis, std::size_t n, std::uint64_t seed,
                      double scale);

/// Mixes a base seed with a stream and index into an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace orbitsym
