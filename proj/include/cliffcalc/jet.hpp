#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "cliffcalc/algebra.hpp"

namespace cliff {

enum class Side { left, right };

struct SingularJetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientOrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shared enumeration of multi-indices over `nvars` variables with total
/// degree <= `order`, grouped by degree (graded lex).  Cached per shape.
class MultiIndexTable {
 public:
  static std::shared_ptr<const MultiIndexTable> get(int nvars, int order);
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t count() const { return count_; }

  std::span<const std::uint8_t> exponents(std::size_t idx) const {
    return {exp_.data() + idx * nvars_, static_cast<std::size_t>(nvars_)};
  }
  int degree(std::size_t idx) const { return degree_[idx]; }
  std::size_t degree_begin(int d) const { return offsets_[d]; }
  std::size_t degree_end(int d) const { return offsets_[d + 1]; }

  /// Rank of an exponent tuple; npos if its degree exceeds `order`.
  std::size_t index_of(std::span<const std::uint8_t> alpha) const;
  /// Index of alpha + by*e_var (by may push past `order` -> npos).
  std::size_t shifted(std::size_t idx, int var, int by) const;
  /// Index of the sum of two exponent tuples, npos when past `order`.
  std::size_t sum_index(std::size_t a, std::size_t b) const;

 private:
  MultiIndexTable(int nvars, int order);
  std::size_t rank(std::span<const std::uint8_t> alpha, int deg) const;

  int nvars_, order_;
  std::size_t count_;
  std::vector<std::uint8_t> exp_;
  std::vector<int> degree_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint64_t> binom_;  // pascal table, row-major (order+nvars+1)^2
  std::size_t binom_stride_;
  std::uint64_t binom(int n, int k) const {
    return (k < 0 || k > n) ? 0 : binom_[n * binom_stride_ + k];
  }
};

/// Truncated power series in the n+1 real coordinates of x around `center`,
/// with Multivector coefficients.  The variables are central; coefficient
/// products keep left/right order.  Stored coefficients are Taylor
/// coefficients: f(x) = sum_alpha c_alpha (x - center)^alpha.
class Jet {
 public:
  Jet(const Algebra& alg, const Paravector& center, int order);

  const Algebra& algebra() const { return *alg_; }
  const Paravector& center() const { return center_; }
  int order() const { return order_; }
  const MultiIndexTable& table() const { return *tab_; }

  std::span<double> coeff(std::size_t idx) { return {c_.data() + idx * alg_->dim(), alg_->dim()}; }
  std::span<const double> coeff(std::size_t idx) const {
    return {c_.data() + idx * alg_->dim(), alg_->dim()};
  }
  Multivector coeff_mv(std::size_t idx) const;
  void set_coeff(std::size_t idx, const Multivector& v);
  void add_coeff(std::size_t idx, const Multivector& v, double scale = 1.0);

  Multivector value() const { return coeff_mv(0); }
  Multivector eval(const Paravector& x) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double k);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double k) { return a *= k; }
  friend Jet operator*(double k, Jet a) { return a *= k; }

  /// Ordered truncated product (coefficients multiply by the geometric
  /// product in the written order).
  friend Jet jet_mul(const Jet& a, const Jet& b);
  /// Right/left multiplication by a constant multivector.
  Jet scaled_right(const Multivector& m) const;
  Jet scaled_left(const Multivector& m) const;

  Jet truncated(int new_order) const;
  double norm() const;
  /// Largest coefficient norm; the natural scale for defect ratios.
  double max_coeff_norm() const;

 private:
  const Algebra* alg_;
  Paravector center_;
  int order_;
  std::shared_ptr<const MultiIndexTable> tab_;
  std::vector<double> c_;
};

/// Jet of the identity map x (a paravector-valued linear jet).
Jet jet_variable(const Algebra& alg, const Paravector& center, int order);
Jet jet_conj_variable(const Algebra& alg, const Paravector& center, int order);
Jet jet_constant(const Algebra& alg, const Paravector& center, int order, const Multivector& v);
/// Jet of x^m (exact once order >= m).
Jet jet_pv_power(const Algebra& alg, const Paravector& center, int order, unsigned m);

/// Dirac operator D = d/dx0 + sum_i e_i d/dx_i (conjugate flips the vector
/// part) applied from the given side; drops the order by one.
Jet apply_dirac(const Jet& j, bool conjugate, Side side = Side::left);
/// Laplacian power via the multinomial identity; drops the order by 2m.
Jet apply_laplacian_power(const Jet& j, int m);

/// Jet with values in a commutative slice plane C_I, held as complex
/// coefficients.  Products and inversion are plain complex series ops.
class SliceJet {
 public:
  SliceJet(const Algebra& alg, const Paravector& center, int order, std::vector<double> unit);

  const Algebra& algebra() const { return *alg_; }
  int order() const { return order_; }
  const MultiIndexTable& table() const { return *tab_; }
  const std::vector<double>& unit() const { return unit_; }
  const Paravector& center() const { return center_; }

  std::complex<double>& coeff(std::size_t idx) { return c_[idx]; }
  std::complex<double> coeff(std::size_t idx) const { return c_[idx]; }

  friend SliceJet slice_mul(const SliceJet& a, const SliceJet& b);
  /// Series reciprocal; throws SingularJetError when the constant term is
  /// (numerically) zero, which signals center on the sphere [s].
  SliceJet recip() const;
  SliceJet pow(int m) const;  // m >= 1
  Jet promote() const;

 private:
  const Algebra* alg_;
  Paravector center_;
  int order_;
  std::shared_ptr<const MultiIndexTable> tab_;
  std::vector<double> unit_;
  std::vector<std::complex<double>> c_;
};

/// Jet of Q_{c,s}(x) = s^2 - 2 x0 s + |x|^2 in the slice plane of s.
SliceJet jet_qcs(const Algebra& alg, const Paravector& s, const Paravector& center, int order);

/// Checked conversion: every coefficient must lie in span{1, I} within
/// `tol` of its own scale.
SliceJet slice_jet_from(const Jet& j, std::span<const double> unit, double tol = 1e-10);

/// Series reciprocal of a jet whose coefficients all lie in one slice
/// subalgebra (inferred from the coefficients, checked to 1e-10).
Jet jet_recip(const Jet& q);

}  // namespace cliff
