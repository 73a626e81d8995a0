#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "cliffcalc/algebra.hpp"
#include "cliffcalc/jet.hpp"
#include "cliffcalc/kernels.hpp"

namespace cliff {

struct SpectralProximityError : std::domain_error {
  using std::domain_error::domain_error;
};
struct EnclosureError : std::domain_error {
  using std::domain_error::domain_error;
};
struct SideMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct HypothesisError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// d x d matrix with Multivector entries, acting on V (x) R_n by matrix
/// action on V and left Clifford multiplication on R_n.
class CliffordMatrix {
 public:
  CliffordMatrix(const Algebra& alg, int d);
  static CliffordMatrix identity(const Algebra& alg, int d);
  static CliffordMatrix from_real(const Algebra& alg, const Eigen::MatrixXd& m);
  /// Entries a+ib mapped to a + I b in the slice of `unit`.
  static CliffordMatrix from_complex_slice(const Algebra& alg, const Eigen::MatrixXcd& m,
                                           std::span<const double> unit);

  const Algebra& algebra() const { return *alg_; }
  int d() const { return d_; }
  Multivector& at(int i, int j) { return e_[i * d_ + j]; }
  const Multivector& at(int i, int j) const { return e_[i * d_ + j]; }

  CliffordMatrix& operator+=(const CliffordMatrix& o);
  CliffordMatrix& operator-=(const CliffordMatrix& o);
  CliffordMatrix& operator*=(double k);
  friend CliffordMatrix operator+(CliffordMatrix a, const CliffordMatrix& b) { return a += b; }
  friend CliffordMatrix operator-(CliffordMatrix a, const CliffordMatrix& b) { return a -= b; }
  friend CliffordMatrix operator*(CliffordMatrix a, double k) { return a *= k; }
  friend CliffordMatrix operator*(double k, CliffordMatrix a) { return a *= k; }
  friend CliffordMatrix operator*(const CliffordMatrix& a, const CliffordMatrix& b);

  CliffordMatrix scaled_right(const Multivector& m) const;  // entries e * m
  CliffordMatrix scaled_left(const Multivector& m) const;   // entries m * e
  CliffordMatrix pow(int k) const;

  double norm() const;  // Frobenius over all coefficients

 private:
  const Algebra* alg_;
  int d_;
  std::vector<Multivector> e_;
};

/// Paravector operator T = sum e_mu T_mu with commuting real d x d
/// components T_0..T_n.
class CommutingParavectorOp {
 public:
  CommutingParavectorOp(const Algebra& alg, std::vector<Eigen::MatrixXd> components);
  /// d = 1 operator from a paravector (the scalar reduction oracle).
  static CommutingParavectorOp from_paravector(const Paravector& x);

  const Algebra& algebra() const { return *alg_; }
  int d() const { return d_; }
  int n() const { return alg_->n(); }
  const Eigen::MatrixXd& component(int mu) const { return comp_[mu]; }
  const std::vector<Eigen::MatrixXd>& components() const { return comp_; }

  double commutation_defect() const;  // max relative ||[Ti,Tj]||
  void require_commuting(double tol = 1e-10) const;
  /// Throws HypothesisError naming the first non-symmetric component.
  void require_symmetric_components(double tol = 1e-10) const;
  /// Throws HypothesisError naming T_mu when ||T_mu|| > tol.
  void require_component_zero(int mu, double tol = 1e-12) const;

  Eigen::MatrixXd two_t0() const { return 2.0 * comp_[0]; }
  Eigen::MatrixXd sum_of_squares() const;  // T Tbar = sum T_mu^2
  double norm_estimate() const;            // operator-norm upper bound

  CliffordMatrix to_matrix() const;       // T
  CliffordMatrix conj_matrix() const;     // Tbar

 private:
  const Algebra* alg_;
  int d_;
  std::vector<Eigen::MatrixXd> comp_;
};

/// One axially symmetric component of the S-spectrum: the sphere
/// [t0 + J rho], rho >= 0 (rho = 0 is a real point).
struct SpectrumSphere {
  double t0;
  double rho;
};

/// S-spectrum via the companion linearization of z^2 I - 2 z T0 + sum T_mu^2.
std::vector<SpectrumSphere> s_spectrum(const CommutingParavectorOp& T);

/// Distance from the paravector s to the spectrum descriptors.
double spectral_distance(const Paravector& s, const std::vector<SpectrumSphere>& spec);

enum class ResolventKind { SL, SR, FL, FR, H, KL, KR, PL, PR, Qc, PseudoQ };

/// Q_{c,s}(T)^{-m}, computed by complexifying s against the real components
/// and inverting the complex d x d matrix.
CliffordMatrix qcs_inv_pow_op(const Paravector& s, const CommutingParavectorOp& T, int m);

/// Closed-form resolvent operators.  `param` is l for H / PL / PR, alpha for
/// KL / KR, ignored otherwise.  Qc yields Q_{c,s}(T)^{-1}; PseudoQ yields
/// the noncommutative-form pseudo-resolvent Q_s(T)^{-1}.
CliffordMatrix resolvent(ResolventKind kind, int param, const Paravector& s,
                         const CommutingParavectorOp& T);

/// Truncated operator power series of the same resolvents (S, F, H, K, P).
CliffordMatrix resolvent_series(ResolventKind kind, int param, const Paravector& s,
                                const CommutingParavectorOp& T, int terms);

/// Clifford-Appell operator P_k^n(T) and Clifford-harmonic operator H_k^n(T).
CliffordMatrix appell_operator(const CommutingParavectorOp& T, int k);
CliffordMatrix harmonic_operator(const CommutingParavectorOp& T, int k);

/// Slice polynomial: coefficients right-applied for left functions
/// (f(s) = sum s^m a_m), left-applied for right ones.
class SlicePolynomial {
 public:
  SlicePolynomial(Side side, std::vector<Multivector> coeffs);
  static SlicePolynomial monomial(const Algebra& alg, Side side, int degree, double scale = 1.0);

  Side side() const { return side_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Multivector>& coeffs() const { return coeffs_; }
  const Algebra& algebra() const { return coeffs_.front().algebra(); }

  bool intrinsic(double tol = 1e-14) const;
  Multivector eval(const Paravector& s) const;
  /// Jet of the polynomial in the x variable (for the pointwise oracle).
  Jet to_jet(const Paravector& center, int order) const;
  /// Product f*g for intrinsic f (real coefficients commute through).
  friend SlicePolynomial intrinsic_product(const SlicePolynomial& f, const SlicePolynomial& g);
  SlicePolynomial operator+(const SlicePolynomial& o) const;

 private:
  Side side_;
  std::vector<Multivector> coeffs_;
};

/// Circle contour d(B_r(c) cap C_I) with trapezoid nodes; ds_I = ds(-I)
/// realizes the weight r e^{I theta} d theta.
struct ContourSpec {
  double center = 0.0;
  double radius = 2.0;
  std::vector<double> slice_unit;
  int nodes = 256;
};

enum class Calculus { S, F, Polyharmonic, Cliffordian, Polyanalytic };

/// The five contour-integral functional calculi.  `param` is l for the
/// polyharmonic/polyanalytic calculi and alpha for the Cliffordian one.
CliffordMatrix contour_calculus(Calculus calc, int param, const SlicePolynomial& f,
                                const CommutingParavectorOp& T, const ContourSpec& contour);

/// c_{m,n} * contour integral of F_L(s,T) ds_I s^{m+2h}; equals P_m^n(T).
CliffordMatrix appell_moment(const CommutingParavectorOp& T, int m, const ContourSpec& contour);

/// || contour integral of (resolvent) ds_I s^exponent ||; vanishes inside the
/// stated exponent range of each kind (F, H, K, P).
double moment_vanishing(Calculus kind, int param, const CommutingParavectorOp& T,
                        const ContourSpec& contour, int exponent);
/// Largest exponent with guaranteed vanishing for the given kind/param.
int moment_vanishing_bound(Calculus kind, int param, int n);

enum class ResolventEquation { LeftS, RightS, TwoSidedS, FEq };
double resolvent_equation_check(ResolventEquation which, const Paravector& s, const Paravector& p,
                                const CommutingParavectorOp& T);

/// || F-calc(fg) - RHS of the product formula || for intrinsic f, left g.
double product_rule_check(const SlicePolynomial& f, const SlicePolynomial& g,
                          const CommutingParavectorOp& T, const ContourSpec& contour);

/// || left form - right form || for intrinsic f across one calculus.
double intrinsic_two_sided_check(Calculus calc, int param, const SlicePolynomial& f,
                                 const CommutingParavectorOp& T, const ContourSpec& contour);

/// || calc(f) - calc(f + junk) ||; junk must lie in the operator's kernel
/// class (degree bound checked).
double kernel_independence_check(Calculus calc, int param, const SlicePolynomial& f,
                                 const SlicePolynomial& junk, const CommutingParavectorOp& T,
                                 const ContourSpec& contour);

/// Monogenic resolvent (n = 3 only): (1/Sigma_4)(ybar I + T) M(y)^{-2} with
/// M(y) = y0^2 I + sum (y_i I - T_i)^2 inverted by symmetric
/// eigendecomposition.
CliffordMatrix monogenic_resolvent(const Paravector& y, const CommutingParavectorOp& T);

struct SphereGrid {
  int n_chi = 32;
  int n_theta = 32;
  int n_phi = 64;
};

/// Surface-integral monogenic calculus on the sphere of radius R in R^4
/// (n = 3): integral of G(x,T) nu(x) ghat(x) dS(x).
CliffordMatrix monogenic_surface_calc(const std::function<Multivector(const Paravector&)>& ghat,
                                      const CommutingParavectorOp& T, double R,
                                      const SphereGrid& grid = {});

/// Contour calculus vs jet evaluation at the joint eigen-paravectors of a
/// diagonal operator; returns the max entry defect.
double pointwise_oracle_check(Calculus calc, int param, const SlicePolynomial& f,
                              const CommutingParavectorOp& T, const ContourSpec& contour);

}  // namespace cliff
