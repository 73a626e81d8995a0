#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cliff {

/// Thrown when two values from different algebras are combined.
struct AlgebraMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// One real Clifford algebra R_n (n odd, 3 <= n <= 9), with the product
/// tables shared by every value of that signature.
///
/// Coefficients are indexed by the blade bitmask (bit i-1 set <=> e_i in
/// the blade), so the product of blades a and b lands at index a^b.  The
/// (grade, lexicographic) canonical order used by the serialization layer
/// is kept as a permutation of that index space.
class Algebra {
 public:
  /// n in {3,5,7,9}; instances are cached and live for the program.
  static const Algebra& get(int n);

  int n() const { return n_; }
  std::size_t dim() const { return dim_; }

  /// Sign of e_a * e_b (blades as bitmasks); the blade itself is a^b.
  double sign(std::size_t a, std::size_t b) const { return sign_[a * dim_ + b]; }

  /// sign_out(j)[i] = sign(i^j, j): the sign applied to a[i^j]*b[j] when
  /// accumulating into out[i].  Row-major dim x dim, laid out for the
  /// product kernels.
  const double* sign_out_row(std::size_t j) const { return sign_out_.data() + j * dim_; }
  const double* sign_table() const { return sign_.data(); }

  int grade(std::size_t mask) const { return grade_[mask]; }

  /// Canonical (grade, lex) position <-> blade bitmask.
  std::size_t canonical_to_mask(std::size_t pos) const { return canon_to_mask_[pos]; }
  std::size_t mask_to_canonical(std::size_t mask) const { return mask_to_canon_[mask]; }

  Algebra(const Algebra&) = delete;
  Algebra& operator=(const Algebra&) = delete;

 private:
  explicit Algebra(int n);

  int n_;
  std::size_t dim_;
  std::vector<double> sign_;      // sign(a,b), row-major
  std::vector<double> sign_out_;  // sign(i^j, j), row j
  std::vector<int> grade_;
  std::vector<std::size_t> canon_to_mask_;
  std::vector<std::size_t> mask_to_canon_;
};

/// Dense element of R_n.  Value type; all operations are pure.
class Multivector {
 public:
  Multivector() : alg_(nullptr) {}
  explicit Multivector(const Algebra& alg) : alg_(&alg), c_(alg.dim(), 0.0) {}
  Multivector(const Algebra& alg, std::vector<double> coeffs);

  static Multivector scalar(const Algebra& alg, double v);
  /// Basis vector e_i, i in 1..n.
  static Multivector basis_vector(const Algebra& alg, int i);

  const Algebra& algebra() const { return *alg_; }
  bool empty() const { return alg_ == nullptr; }
  std::size_t dim() const { return c_.size(); }

  double operator[](std::size_t mask) const { return c_[mask]; }
  double& operator[](std::size_t mask) { return c_[mask]; }
  const double* data() const { return c_.data(); }
  double* data() { return c_.data(); }

  double scalar_part() const { return c_[0]; }
  /// Euclidean norm of the coefficient vector.
  double norm() const;

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(double k);

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, double k) { return a *= k; }
  friend Multivector operator*(double k, Multivector a) { return a *= k; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }

  /// Geometric product.  Routes through the runtime-dispatched dense kernel
  /// unless one factor is sparse enough that the index loop wins.
  friend Multivector operator*(const Multivector& a, const Multivector& b) { return mv_mul(a, b); }
  friend Multivector mv_mul(const Multivector& a, const Multivector& b);

  /// Coefficients permuted into canonical (grade, lex) order.
  std::vector<double> to_canonical() const;
  static Multivector from_canonical(const Algebra& alg, std::span<const double> coeffs);

  std::size_t nonzero_count() const;

 private:
  const Algebra* alg_;
  std::vector<double> c_;
};

/// Element x0 + sum x_i e_i of R^{n+1} inside R_n.
class Paravector {
 public:
  Paravector() : alg_(nullptr), x0_(0) {}
  Paravector(const Algebra& alg, double x0, std::vector<double> vec);
  static Paravector zero(const Algebra& alg);
  static Paravector real(const Algebra& alg, double x0);

  const Algebra& algebra() const { return *alg_; }
  double x0() const { return x0_; }
  const std::vector<double>& vec() const { return vec_; }
  int n() const { return static_cast<int>(vec_.size()); }

  double vec_norm() const;
  double abs2() const;  // |x|^2 = x0^2 + |vec|^2
  double abs() const;

  Paravector conj() const;  // x0 - vec
  Multivector to_multivector() const;

  /// x^m under the geometric product; stays a paravector (computed in the
  /// commutative slice through x).
  Paravector pow(unsigned m) const;

  friend Paravector operator+(const Paravector& a, const Paravector& b);
  friend Paravector operator-(const Paravector& a, const Paravector& b);
  friend Paravector operator*(double k, const Paravector& a);

 private:
  const Algebra* alg_;
  double x0_;
  std::vector<double> vec_;
};

/// Point u + Iv of a slice plane C_I (v >= 0, |I| = 1).
class SlicePoint {
 public:
  SlicePoint(const Algebra& alg, double u, double v, std::vector<double> unit);

  const Algebra& algebra() const { return *alg_; }
  double u() const { return u_; }
  double v() const { return v_; }
  const std::vector<double>& unit() const { return unit_; }

  Paravector realize() const;
  /// Decompose a paravector as (Re x, |vec x|, I_x); for a real point the
  /// slice unit defaults to e_1.
  static SlicePoint decompose(const Paravector& x);

 private:
  const Algebra* alg_;
  double u_, v_;
  std::vector<double> unit_;
};

/// Embed a + ib in the slice plane of the unit vector I: a + b*(sum I_i e_i).
Multivector embed_slice(const Algebra& alg, std::complex<double> z, std::span<const double> unit);

/// Project a multivector onto span{1, I}; `residual` (if non-null) receives
/// the norm of what was left behind.
std::complex<double> project_slice(const Multivector& m, std::span<const double> unit,
                                   double* residual = nullptr);

/// Complexification of a paravector: x0 + i|vec x|.
std::complex<double> complexify(const Paravector& x);

/// True iff |Re(x)-Re(s)| <= tol and ||vec x|-|vec s|| <= tol, i.e. s lies on
/// (or within tol of) the sphere [x].
bool same_sphere(const Paravector& x, const Paravector& s, double tol = 1e-9);

inline void require_same_algebra(const Algebra& a, const Algebra& b, const char* where) {
  if (&a != &b)
    throw AlgebraMismatchError(std::string(where) + ": values from different algebras");
}

}  // namespace cliff
