#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cliffcalc/algebra.hpp"
#include "cliffcalc/rational.hpp"

namespace cliff::poly {

inline int sce_exponent(int n) { return (n - 1) / 2; }

/// gamma_n = [Gamma((n+1)/2)]^2 2^{n-1} (-1)^{(n-1)/2}
double gamma_n(int n);
/// sigma_{n,l} = 2^{2l-1} (l-1)! (-h_n)_l, 1 <= l <= h_n
double sigma_nl(int n, int l);
/// k_alpha = 4^alpha alpha! (-h_n)_alpha, 1 <= alpha <= h_n-1
double k_alpha(int n, int alpha);
/// c_{m,n} = m! (2h_n)! / (2 pi gamma_n (m+2h_n)!)
double c_mn(int n, int m);
/// Area of the unit sphere in R^dim: 2 pi^{dim/2} / Gamma(dim/2)
double unit_sphere_area(int dim);

/// Exact rational forms of the constants above (pi-free ones only).
Rational gamma_n_exact(int n);
Rational sigma_nl_exact(int n, int l);
Rational k_alpha_exact(int n, int alpha);

/// Recomputes the hard-coded anchor values (gamma_3 = -4, gamma_5 = 64, the
/// Pochhammer convention) from the formulas; throws on mismatch.  Run once
/// at battery startup.
void constants_self_check();

/// Coefficient tables, exact.
Rational appell_coeff_exact(int n, int k, int l);    // C_l^k(n)
Rational harmonic_coeff_exact(int n, int k, int l);  // T_l^k(n)
double appell_coeff(int n, int k, int l);
double harmonic_coeff(int n, int k, int l);

/// Clifford-Appell polynomial P_k^n(x); 0 for k < 0.
Multivector eval_appell(const Algebra& alg, int k, const Paravector& x);
/// Axially harmonic polynomial H_k^n(x); 0 for k < 0.
Multivector eval_harmonic(const Algebra& alg, int k, const Paravector& x);
/// Polyharmonic polynomial H_k(x) = sum_l x^{k-l} xbar^l.
Multivector eval_polyharm(const Algebra& alg, int k, const Paravector& x);
/// Fueter polynomial for the multi-index (k_1..k_n) (symmetrized product of
/// the Fueter variables z_j = x_j - x0 e_j).
Multivector eval_fueter(const Algebra& alg, std::span<const int> kvec, const Paravector& x);
/// Right side of the Fueter-polynomial expansion of P_k^n; the gradient
/// values at 0 are extracted from jets.  Must equal eval_appell.
Multivector appell_from_fueter(const Algebra& alg, int k, const Paravector& x);

struct IdentityReport {
  std::string identity;
  int n = 0;
  std::string worst_tuple;
  double defect = 0.0;        // float route
  bool exact_zero = false;    // rational route came out exactly 0 (where applicable)
  bool exact_route = false;   // identity has a rational route
  bool skipped = false;       // structurally empty regime (e.g. K family at n=3)
};

/// Names: lem1_part1, lem1_part2, prop1, seriesw, summ1, jacobi, rell,
/// constant_pairs.
const std::vector<std::string>& identity_names();
IdentityReport identity_suite(const std::string& name, int n, int kmax = 30,
                              std::uint64_t seed = 2024);

}  // namespace cliff::poly
